#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kobvis/geometry.hpp"

namespace kobvis {

enum class VerdictStatus { Convergent, Divergent, Inconclusive };
const char* to_string(VerdictStatus status);

struct IntegralVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  Real value = 0;          // Convergent: partial sum plus extrapolated tail
  Real tail = 0;
  Real growth_rate = 0;    // fitted decay exponent p of the dyadic increments in log(1/x)
  Real partial_sum = 0;
  std::vector<Real> increments;  // I_k over [eps 2^-k-1, eps 2^-k]
  std::string rule;              // which test decided
};

/// Three-valued test for finiteness of integral_0^eps f(x) dx from K + 1
/// dyadic increments.
IntegralVerdict improper_integral_verdict(const std::function<Real(Real)>& f, Real eps, int levels = 60);

/// M(r) = delta(p + r eta_p; X_p).
Real tangential_gauge(const DomainOracle& oracle, const CPoint& p, Real r);

struct ShapeReport {
  std::vector<std::string> violations;
  std::size_t max_index = 0;
  std::vector<Real> values;
  bool ok() const { return violations.empty(); }
};

/// Midpoint concavity and monotonicity below the maximum of M on `radii`.
ShapeReport gauge_shape_check(const DomainOracle& oracle, const CPoint& p, const std::vector<Real>& radii);

struct ClassifyOptions {
  Real eps = 1e-2L;
  int levels = 60;
  Real neighborhood = 0.1L;  // radius of U
  int shell_points = 64;     // boundary offsets per side, log-spaced in Re z1
  int shell_octaves = 16;
  int direction_grid = 8;    // weakly gauge samples direction_grid^2 unit vectors
};

struct ClassificationReport {
  CPoint point;
  IntegralVerdict local;           // N-gauge over the neighborhood shell
  IntegralVerdict weakly;          // sup over the normal ray and sampled directions
  IntegralVerdict strongly_non;    // M-gauge
  bool weakly_goldilocks = false;
  bool strongly_non_goldilocks = false;
  bool non_goldilocks = false;
  std::string summary;
  int sampled_directions = 0;
  int shell_points = 0;
  std::vector<Real> radii;         // dyadic sample radii (decreasing)
  std::vector<Real> m_gauge, weakly_gauge, n_gauge;
};

ClassificationReport classify_point(const DomainOracle& oracle, const CPoint& p, const ClassifyOptions& opts = {});

/// delta(p' + r eta_{p'}; X / |X|) at a face point p'.
Real face_witness(const DomainOracle& oracle, const CPoint& face_point, const CVector& face_direction,
                  Real r = 1e-8L);

}  // namespace kobvis
