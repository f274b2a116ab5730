#pragma once

#include <functional>

#include "kobvis/curve.hpp"
#include "kobvis/distance_grid.hpp"
#include "kobvis/geometry.hpp"
#include "kobvis/metric.hpp"

namespace kobvis {

/// Multiplicative slack on certified lambda targets.
inline constexpr Real kCertificationSlack = 1.05L;
/// Depth at which a tangential construction counts as escaped.
inline constexpr Real kDefaultEscapeDepth = 0.3L;

struct TangentialOptions {
  CVector direction{0, 1, 0, 0};  // unit face direction, (i, 0) by default
  Real span = 1;
  CPoint base{};                  // gamma(t) = base + span t dir + (0, f)
  int half_nodes = 512;           // records 2 * half_nodes + 1 nodes
  Real rel_tol = 1e-12L;          // stepper tolerance on log f
  Real escape_depth = kDefaultEscapeDepth;
};

/// gamma(t) = base + span t dir + (0, f(t)) with f' = f / (c delta(gamma; span dir)),
/// f(0) = f0. Throws EscapedDepthCap when f passes the escape depth.
SampledCurve construct_tangential_geodesic(const DomainOracle& oracle, Real c, Real f0,
                                           const TangentialOptions& opts = {});

enum class DepthFlag { Reached, Escaped };
const char* to_string(DepthFlag flag);

struct TerminalDepth {
  Real f0 = 0, c = 0, span = 1;
  Real D = 0;  // escape depth when Escaped
  DepthFlag flag = DepthFlag::Reached;
};

/// Solves integral_{f0}^{D} Psi^{-1}(y) / y dy = span / c for D.
TerminalDepth predicted_terminal_depth(const ProfileFunction& profile, Real c, Real f0, Real span = 1,
                                       Real escape_depth = kDefaultEscapeDepth);

enum class CertificateStatus { Certified, Refuted, Inconclusive };
const char* to_string(CertificateStatus status);

struct GeodesicCertificate {
  Real lambda_target = 0;
  Real epsilon_target = 0;
  Real observed_sup_ratio = 0;
  int pair_grid_size = 0;
  CertificateStatus status = CertificateStatus::Inconclusive;
  Real witness_t1 = 0, witness_t2 = 0;
  Real slack = kCertificationSlack;
  Real refutation_ratio = 0;  // max (length lower - eps) / distance upper
};

/// Checks length <= lambda k + eps over a triangular pair grid. `grid` (may be
/// null) supplies distance upper bounds for refutation.
GeodesicCertificate certify_lambda_geodesic(const DomainOracle& oracle, const SampledCurve& curve, Real lambda,
                                            Real epsilon, int pair_grid, const DistanceGrid* grid = nullptr);

Real max_boundary_distance(const DomainOracle& oracle, const SampledCurve& curve);

/// (a|b)_o as an enclosure, for a fixed base point o.
using GromovFn = std::function<BoundInterval(const CPoint&, const CPoint&)>;

struct BalancedPoint {
  Real tau = 0;
  CPoint x;
  Real h_at_start = 0, h_at_end = 0, h_at_tau = 0;
  BoundInterval gromov_zx, gromov_wx;
};

/// Finds tau with h(tau) = (z|gamma(tau))_o / (w|gamma(tau))_o close to 1,
/// using interval midpoints. The curve is treated as the polyline through
/// its nodes.
BalancedPoint find_balanced_parameter(const SampledCurve& curve, const CPoint& z, const CPoint& w,
                                      const GromovFn& gromov, Real tol = 1e-3L, Real balance_tol = 1e-9L);

/// Same, with Gromov bounds from kdist_lower and grid upper distances.
BalancedPoint find_balanced_parameter(const DomainOracle& oracle, const SampledCurve& curve, const CPoint& z,
                                      const CPoint& w, const CPoint& o, const DistanceGrid& grid,
                                      Real tol = 1e-3L);

/// Point of the polyline at parameter t.
CPoint curve_point(const SampledCurve& curve, Real t);

}  // namespace kobvis
