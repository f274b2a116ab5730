#include "kobvis/metric.hpp"

namespace kobvis {

namespace {

Real lower_factor(ConvexityClass cls) { return cls == ConvexityClass::Convex ? Real(0.5) : Real(0.25); }

bool is_z2_line(const CVector& v) { return v.re1 == 0 && v.im1 == 0; }

// Upper bound for one component; exact on z2-lines.
Real component_upper(const DomainOracle& oracle, const CPoint& z, const CVector& u) {
  if (u.norm() == 0) return 0;
  const Real d = oracle.directional_distance(z, u);
  return is_z2_line(u) ? 1 / (2 * d) : 1 / d;
}

}  // namespace

BoundInterval kappa_bounds(const DomainOracle& oracle, const CPoint& z, const CVector& v, KappaOptions opts) {
  const Real d = oracle.directional_distance(z, v);
  BoundInterval out;
  if (opts.slice_refinement && is_z2_line(v)) {
    out.lower = out.upper = 1 / (2 * d);
    return out;
  }
  out.upper = 1 / d;
  out.lower = lower_factor(oracle.convexity_class()) * out.upper;
  if (opts.decomposition) out.upper = std::min(out.upper, kappa_upper_decomposed(oracle, z, v, false));
  return out;
}

std::pair<CVector, CVector> decompose_tangential_normal(const DomainOracle& oracle, const CPoint& z,
                                                        const CVector& v) {
  const Frame f = oracle.normal_tangent_frame(oracle.boundary_project(z));
  const CVector vn = hermitian(v, f.eta) * f.eta;
  const CVector vt = hermitian(v, f.X) * f.X;
  return {vn, vt};
}

Real kappa_upper_decomposed(const DomainOracle& oracle, const CPoint& z, const CVector& v, bool include_direct) {
  if (!oracle.contains(z)) throw Error(ErrorCode::PointOutsideDomain, "point is not in the domain");
  if (v.norm() == 0) throw Error(ErrorCode::ZeroDirection, "direction must be nonzero");
  Real direct = include_direct ? component_upper(oracle, z, v) : kInfinity;
  try {
    const auto [vn, vt] = decompose_tangential_normal(oracle, z, v);
    return std::min(direct, component_upper(oracle, z, vn) + component_upper(oracle, z, vt));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonSmoothPoint) throw;
    return include_direct ? direct : component_upper(oracle, z, v);
  }
}

BoundInterval segment_kappa_length_bounds(const DomainOracle& oracle, const CPoint& a, const CPoint& b,
                                          KappaOptions opts) {
  const CVector step = b - a;
  if (step.norm() == 0) return {0, 0};
  if (!oracle.contains(a) || !oracle.contains(b))
    throw Error(ErrorCode::PointOutsideDomain, "curve node outside the domain");
  return kappa_bounds(oracle, midpoint(a, b), step, opts);
}

BoundInterval curve_kappa_length_bounds(const DomainOracle& oracle, const SampledCurve& curve, KappaOptions opts) {
  BoundInterval total{0, 0};
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!oracle.contains(curve.points[i])) throw Error(ErrorCode::PointOutsideDomain, "curve node outside the domain");
    if (i > 0 && !(curve.params[i] > curve.params[i - 1]))
      throw Error(ErrorCode::BadParameters, "curve parameters must increase");
  }
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const BoundInterval seg = segment_kappa_length_bounds(oracle, curve.points[i - 1], curve.points[i], opts);
    total.lower += seg.lower;
    total.upper += seg.upper;
  }
  return total;
}

Real kdist_lower(const DomainOracle& oracle, const CPoint& z, const CPoint& w) {
  const Real dz = oracle.boundary_distance(z);
  const Real dw = oracle.boundary_distance(w);
  return std::max(Real(0), lower_factor(oracle.convexity_class()) * std::fabs(std::log(dz / dw)));
}

Real exact_halfplane_distance(Complex z, Complex w) {
  if (!(z.real() > 0) || !(w.real() > 0)) throw Error(ErrorCode::OutsideHalfPlane, "needs Re z > 0 and Re w > 0");
  const Real r = std::abs(z - w) / std::abs(z + std::conj(w));
  if (r < 0.5L) return std::atanh(r);
  // Same value, without cancellation in 1 - r for far-apart points.
  const Real q = std::norm(z - w) / (2 * z.real() * w.real());
  return std::acosh(1 + q) / 2;
}

}  // namespace kobvis
