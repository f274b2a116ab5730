#pragma once

#include <algorithm>
#include <utility>

#include "kobvis/curve.hpp"
#include "kobvis/geometry.hpp"

namespace kobvis {

/// Enclosure [lower, upper] of a nonnegative quantity; upper may be infinite.
struct BoundInterval {
  Real lower = 0;
  Real upper = 0;

  bool contains(Real x, Real tol = 0) const { return x >= lower - tol && x <= upper + tol; }
  Real width() const { return upper - lower; }
  Real midpoint() const { return (lower + upper) / 2; }
};

struct KappaOptions {
  /// Use the exact half-plane value when the complex line is a z2-line.
  bool slice_refinement = true;
  /// Tighten the upper bound with the normal/tangential split at the
  /// projection (the metric is a norm on convex domains).
  bool decomposition = false;
};

/// Sandwich of the Kobayashi-Royden metric from delta(z; v).
BoundInterval kappa_bounds(const DomainOracle& oracle, const CPoint& z, const CVector& v, KappaOptions opts = {});

/// Upper bound min(1/delta(z; v), kappa_U(v_n) + kappa_U(v_t)). With
/// `include_direct` false only the split sum is used (no generic solve for v).
Real kappa_upper_decomposed(const DomainOracle& oracle, const CPoint& z, const CVector& v, bool include_direct = true);

/// (v_normal, v_tangential) relative to the frame at the projection of z.
std::pair<CVector, CVector> decompose_tangential_normal(const DomainOracle& oracle, const CPoint& z,
                                                        const CVector& v);

/// Midpoint-rule bounds on the kappa-length of the segment [a, b].
BoundInterval segment_kappa_length_bounds(const DomainOracle& oracle, const CPoint& a, const CPoint& b,
                                          KappaOptions opts = {});

BoundInterval curve_kappa_length_bounds(const DomainOracle& oracle, const SampledCurve& curve,
                                        KappaOptions opts = {});

/// |log(delta(z) / delta(w))| / 2 (Convex) or / 4 (CConvex).
Real kdist_lower(const DomainOracle& oracle, const CPoint& z, const CPoint& w);

/// Poincare distance of the right half-plane, for metric |dz| / (2 Re z).
Real exact_halfplane_distance(Complex z, Complex w);

/// Gromov product enclosure from distance enclosures of the three pairs.
inline BoundInterval gromov_from_distances(const BoundInterval& zo, const BoundInterval& wo,
                                           const BoundInterval& zw) {
  BoundInterval g;
  g.lower = std::max(Real(0), (zo.lower + wo.lower - zw.upper) / 2);
  g.upper = (zo.upper + wo.upper - zw.lower) / 2;
  if (g.upper < g.lower) g.upper = g.lower;
  return g;
}

class DistanceGrid;

/// Gromov product (z|w)_o with lower distances from kdist_lower and upper
/// distances from the grid.
BoundInterval gromov_product_bounds(const DomainOracle& oracle, const CPoint& z, const CPoint& w, const CPoint& o,
                                    const DistanceGrid& grid);

}  // namespace kobvis
