#include "kobvis/geodesics.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>

#include "kobvis/quadrature.hpp"

namespace kobvis {

const char* to_string(DepthFlag flag) { return flag == DepthFlag::Reached ? "Reached" : "Escaped"; }

const char* to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::Certified: return "Certified";
    case CertificateStatus::Refuted: return "Refuted";
    case CertificateStatus::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

namespace {

using State = std::array<Real, 1>;

struct Escaped {};

CPoint tangential_point(const TangentialOptions& o, Real t, Real f) {
  CPoint p = o.base + (o.span * t) * o.direction;
  p.re2 += f;
  return p;
}

}  // namespace

SampledCurve construct_tangential_geodesic(const DomainOracle& oracle, Real c, Real f0, const TangentialOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  const Real escape = std::min(opts.escape_depth, oracle.options().depth_cap);
  if (!(c > 0) || !(f0 > 0) || !(f0 < escape) || !(opts.span > 0) || opts.half_nodes < 1 ||
      opts.direction.norm() == 0)
    throw Error(ErrorCode::BadParameters, "need c > 0, 0 < f0 < escape depth, span > 0");
  const CVector step = opts.span * opts.direction;

  // Depth along the face direction at gamma(t).
  auto depth = [&](Real t, Real f) {
    const CPoint p = tangential_point(opts, t, f);
    if (!oracle.contains(p)) throw Error(ErrorCode::PointOutsideDomain, "curve left the domain");
    return oracle.directional_distance(p, step);
  };
  // Trial stages may overshoot; the right-hand side is continued flat past
  // the escape depth and escape is decided at the recorded nodes.
  auto rhs = [&](const State& u, State& du, Real t) {
    const Real f = std::min(std::exp(u[0]), escape);
    const Real d = depth(t, f);
    du[0] = std::isfinite(d) ? 1 / (c * d) : Real(0);
  };

  const int nodes = 2 * opts.half_nodes + 1;
  std::vector<Real> times(nodes);
  for (int k = 0; k < nodes; ++k) times[k] = static_cast<Real>(k) / (nodes - 1);

  SampledCurve curve;
  curve.kind = "tangential";
  curve.c = c;
  curve.f0 = f0;
  curve.span = opts.span;
  std::vector<Real> logs;
  auto observer = [&](const State& u, Real t) {
    const Real f = std::exp(u[0]);
    if (!(f <= escape)) throw Escaped{};
    curve.push_back(t, tangential_point(opts, t, f));
    logs.push_back(u[0]);
  };

  State u{std::log(f0)};
  using Stepper = odeint::runge_kutta_dopri5<State, Real, State, Real>;
  try {
    odeint::integrate_times(odeint::make_dense_output(opts.rel_tol, opts.rel_tol, Stepper()), rhs, u, times.begin(),
                            times.end(), Real(1e-4), observer);
  } catch (const Escaped&) {
    throw Error(ErrorCode::EscapedDepthCap, "tangential curve passed the escape depth");
  }
  if (curve.size() != times.size()) throw Error(ErrorCode::EscapedDepthCap, "integration stopped early");

  // Consistency: Simpson integral of u' over each node pair against the
  // integrated increment.
  std::vector<Real> g(nodes);
  for (int k = 0; k < nodes; ++k) g[k] = 1 / (c * depth(times[k], std::exp(logs[k])));
  Real worst = 0;
  for (int k = 0; k + 2 < nodes; k += 2) {
    const Real h = times[k + 2] - times[k];
    const Real simpson = h * (g[k] + 4 * g[k + 1] + g[k + 2]) / 6;
    const Real inc = logs[k + 2] - logs[k];
    worst = std::max(worst, std::fabs(simpson - inc) / std::max(std::fabs(inc), Real(1e-300)));
  }
  curve.max_residual = worst;
  return curve;
}

TerminalDepth predicted_terminal_depth(const ProfileFunction& profile, Real c, Real f0, Real span,
                                       Real escape_depth) {
  if (!(c > 0) || !(f0 > 0) || !(f0 < escape_depth) || !(span > 0))
    throw Error(ErrorCode::BadParameters, "need c > 0, 0 < f0 < escape depth, span > 0");
  TerminalDepth out;
  out.f0 = f0;
  out.c = c;
  out.span = span;
  const Real target = span / c;
  const Real u0 = std::log(f0);
  // In u = log y the integrand Psi^{-1}(e^u) is smooth and bounded.
  auto integrand = [&](Real u) { return profile.inverse(std::exp(u)); };
  auto F = [&](Real u1) { return integrate_adaptive(integrand, u0, u1, 1e-14L); };
  const Real u_cap = std::log(escape_depth);
  const Real total = F(u_cap);
  if (total < target) {
    out.D = escape_depth;
    out.flag = DepthFlag::Escaped;
    return out;
  }
  std::uintmax_t iters = 200;
  auto g = [&](Real u) { return F(u) - target; };
  auto r = boost::math::tools::toms748_solve(g, u0, u_cap, -target, total - target,
                                             boost::math::tools::eps_tolerance<Real>(60), iters);
  out.D = std::exp((r.first + r.second) / 2);
  out.flag = DepthFlag::Reached;
  return out;
}

GeodesicCertificate certify_lambda_geodesic(const DomainOracle& oracle, const SampledCurve& curve, Real lambda,
                                            Real epsilon, int pair_grid, const DistanceGrid* grid) {
  if (pair_grid < 8) throw Error(ErrorCode::BadParameters, "pair grid must be >= 8");
  if (curve.size() < 2) throw Error(ErrorCode::BadParameters, "curve needs at least two nodes");
  GeodesicCertificate cert;
  cert.lambda_target = lambda;
  cert.epsilon_target = epsilon;
  cert.pair_grid_size = pair_grid;

  const std::size_t n = curve.size();
  const KappaOptions opts{true, true};
  std::vector<Real> up(n, 0), low(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const BoundInterval seg = segment_kappa_length_bounds(oracle, curve.points[i - 1], curve.points[i], opts);
    up[i] = up[i - 1] + seg.upper;
    low[i] = low[i - 1] + seg.lower;
  }

  const int g = std::min<int>(pair_grid, static_cast<int>(n) - 1);
  std::vector<std::size_t> idx(g + 1);
  std::vector<Real> depth(g + 1);
  for (int k = 0; k <= g; ++k) {
    idx[k] = static_cast<std::size_t>(std::llround(static_cast<long double>(k) * (n - 1) / g));
    depth[k] = oracle.boundary_distance(curve.points[idx[k]]);
  }
  const Real factor = oracle.convexity_class() == ConvexityClass::Convex ? Real(0.5) : Real(0.25);

  Real sup = -kInfinity;
  for (int a = 0; a <= g; ++a)
    for (int b = a + 1; b <= g; ++b) {
      const Real kd = factor * std::fabs(std::log(depth[a] / depth[b]));
      const Real ratio = (up[idx[b]] - up[idx[a]] - epsilon) / std::max(kd, Real(1e-12));
      if (ratio > sup) {
        sup = ratio;
        cert.witness_t1 = curve.params[idx[a]];
        cert.witness_t2 = curve.params[idx[b]];
      }
    }
  cert.observed_sup_ratio = sup;
  if (sup <= lambda) {
    cert.status = CertificateStatus::Certified;
    return cert;
  }
  cert.status = CertificateStatus::Inconclusive;
  if (!grid) return cert;

  std::vector<DistanceGrid::Field> fields;
  fields.reserve(g + 1);
  for (int a = 0; a <= g; ++a) fields.push_back(grid->field(curve.points[idx[a]]));
  std::vector<const DistanceGrid::Field*> ptrs;
  for (const auto& f : fields) ptrs.push_back(&f);
  Real worst = 0;
  for (int b = 1; b <= g; ++b) {
    const auto dist = grid->distances(ptrs, curve.points[idx[b]]);
    for (int a = 0; a < b; ++a) {
      const Real upper = std::min(up[idx[b]] - up[idx[a]], dist[a]);
      if (!(upper > 0)) continue;
      worst = std::max(worst, (low[idx[b]] - low[idx[a]] - epsilon) / upper);
    }
  }
  cert.refutation_ratio = worst;
  if (worst > lambda) cert.status = CertificateStatus::Refuted;
  return cert;
}

Real max_boundary_distance(const DomainOracle& oracle, const SampledCurve& curve) {
  Real best = 0;
  for (const auto& p : curve.points) best = std::max(best, oracle.boundary_distance(p));
  return best;
}

CPoint curve_point(const SampledCurve& curve, Real t) {
  if (curve.empty()) throw Error(ErrorCode::BadParameters, "empty curve");
  if (t <= curve.params.front()) return curve.points.front();
  if (t >= curve.params.back()) return curve.points.back();
  const auto it = std::upper_bound(curve.params.begin(), curve.params.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - curve.params.begin()) - 1;
  const Real s = (t - curve.params[i]) / (curve.params[i + 1] - curve.params[i]);
  return curve.points[i] + s * (curve.points[i + 1] - curve.points[i]);
}

BalancedPoint find_balanced_parameter(const SampledCurve& curve, const CPoint& z, const CPoint& w,
                                      const GromovFn& gromov, Real tol, Real balance_tol) {
  if (curve.size() < 2) throw Error(ErrorCode::BadParameters, "curve needs at least two nodes");
  auto h = [&](const CPoint& x) {
    const Real num = gromov(z, x).midpoint();
    const Real den = gromov(w, x).midpoint();
    if (den <= 0) return num > 0 ? kInfinity : Real(1);
    return num / den;
  };
  BalancedPoint out;
  out.h_at_start = h(curve.points.front());
  out.h_at_end = h(curve.points.back());
  if (out.h_at_start < 1 - tol - balance_tol || out.h_at_end > 1 + tol + balance_tol)
    throw Error(ErrorCode::BalanceViolation, "h(0) >= 1 >= h(1) fails for the estimates");

  // Coarse scan over node indices, then bisection on nodes, then on the
  // polyline segment.
  const std::size_t n = curve.size();
  const std::size_t coarse = std::min<std::size_t>(32, n - 1);
  std::size_t lo = 0, hi = n - 1;
  Real prev = out.h_at_start;
  for (std::size_t k = 1; k <= coarse; ++k) {
    const std::size_t i = k * (n - 1) / coarse;
    const Real v = k == coarse ? out.h_at_end : h(curve.points[i]);
    if (v <= 1) {
      hi = i;
      break;
    }
    lo = i;
    prev = v;
  }
  (void)prev;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (h(curve.points[mid]) > 1)
      lo = mid;
    else
      hi = mid;
  }
  Real a = curve.params[lo], b = curve.params[hi];
  Real tau = b, value = h(curve.points[hi]);
  for (int it = 0; it < 80 && std::fabs(value - 1) > tol; ++it) {
    tau = (a + b) / 2;
    value = h(curve_point(curve, tau));
    if (value > 1)
      a = tau;
    else
      b = tau;
  }
  out.tau = tau;
  out.x = curve_point(curve, tau);
  out.h_at_tau = value;
  out.gromov_zx = gromov(z, out.x);
  out.gromov_wx = gromov(w, out.x);
  return out;
}

BalancedPoint find_balanced_parameter(const DomainOracle& oracle, const SampledCurve& curve, const CPoint& z,
                                      const CPoint& w, const CPoint& o, const DistanceGrid& grid, Real tol) {
  const auto fz = grid.field(z), fw = grid.field(w), fo = grid.field(o);
  const std::vector<const DistanceGrid::Field*> fields{&fz, &fw, &fo};
  const auto at_o = grid.distances(fields, o);
  const Real zo_up = at_o[0];
  const Real wo_up = at_o[1];
  const BoundInterval zo{kdist_lower(oracle, z, o), zo_up};
  const BoundInterval wo{kdist_lower(oracle, w, o), wo_up};
  // h(x) asks for (z|x) and (w|x) back to back; reuse the attachment.
  CPoint last{kInfinity, 0, 0, 0};
  std::vector<Real> d;
  auto gromov = [&](const CPoint& a, const CPoint& x) {
    if (!(x.re1 == last.re1 && x.im1 == last.im1 && x.re2 == last.re2 && x.im2 == last.im2)) {
      d = grid.distances(fields, x);
      last = x;
    }
    const BoundInterval xo{kdist_lower(oracle, x, o), d[2]};
    const bool is_z = a.re1 == z.re1 && a.im1 == z.im1 && a.re2 == z.re2 && a.im2 == z.im2;
    const BoundInterval ax{kdist_lower(oracle, a, x), is_z ? d[0] : d[1]};
    return gromov_from_distances(is_z ? zo : wo, xo, ax);
  };
  return find_balanced_parameter(curve, z, w, gromov, tol);
}

}  // namespace kobvis
