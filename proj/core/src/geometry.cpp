#include "kobvis/geometry.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <vector>

namespace kobvis {

const char* to_string(ConvexityClass cls) { return cls == ConvexityClass::Convex ? "Convex" : "CConvex"; }

namespace {

constexpr Real kRayRelTol = 1e-14L;

struct RelTol {
  bool operator()(Real a, Real b) const {
    return std::fabs(a - b) <= kRayRelTol * std::min(std::fabs(a), std::fabs(b));
  }
};

}  // namespace

DomainOracle::DomainOracle(ProfileFunction profile, ConvexityClass cls, OracleOptions options)
    : profile_(std::move(profile)), class_(cls), options_(options) {
  if (!(options_.depth_cap > 0) || !(options_.root_tol > 0) || options_.phase_grid_count < 8)
    throw Error(ErrorCode::BadParameters, "invalid oracle options");
  // The origin is the nearest point to (0, b) iff b <= (x^2 + Psi^2) / (2 Psi)
  // for every x, so the capture height is the infimum of that ratio.
  auto ratio = [this](Real x) {
    const Real p = profile_(x);
    if (!(p > 0)) return kInfinity;
    return (x * x + p * p) / (2 * p);
  };
  const int samples = 400;
  const Real lo = std::log(Real(1e-6)), hi = std::log(options_.depth_cap);
  Real best = kInfinity, best_s = lo;
  for (int i = 0; i <= samples; ++i) {
    const Real s = lo + (hi - lo) * i / samples;
    const Real r = ratio(std::exp(s));
    if (r < best) best = r, best_s = s;
  }
  if (std::isfinite(best)) {
    const Real step = (hi - lo) / samples;
    std::uintmax_t iters = 200;
    auto res = boost::math::tools::brent_find_minima([&](Real s) { return ratio(std::exp(s)); },
                                                     std::max(lo, best_s - step), std::min(hi, best_s + step), 50,
                                                     iters);
    best = std::min(best, res.second);
  }
  capture_height_ = best;
}

bool DomainOracle::contains(const CPoint& z) const {
  if (!z.finite()) return false;
  return z.re2 > profile_(z.re1);
}

bool DomainOracle::on_boundary(const CPoint& p) const {
  if (!p.finite()) return false;
  return std::fabs(p.re2 - profile_(p.re1)) <= options_.root_tol * std::max(Real(1), std::fabs(p.re2));
}

void DomainOracle::require_inside(const CPoint& z) const {
  if (!contains(z)) throw Error(ErrorCode::PointOutsideDomain, "point is not in the domain");
}

void DomainOracle::require_direction(const CVector& v) const {
  const Real n = v.norm();
  if (!(n > 0) || !std::isfinite(n)) throw Error(ErrorCode::ZeroDirection, "direction must be nonzero");
}

Real DomainOracle::nearest_abscissa(Real a, Real b) const {
  const Real reach = b - profile_(a);
  auto dist2 = [&](Real x) {
    const Real dy = profile_(x) - b;
    return (x - a) * (x - a) + dy * dy;
  };
  const int samples = 200;
  std::vector<Real> xs(samples + 1), ds(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    xs[i] = a - reach + 2 * reach * i / samples;
    ds[i] = dist2(xs[i]);
  }
  // Refine every discrete local minimum, then break ties deterministically.
  struct Candidate {
    Real x, d;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i <= samples; ++i) {
    const bool left_ok = i == 0 || ds[i] <= ds[i - 1];
    const bool right_ok = i == samples || ds[i] <= ds[i + 1];
    if (!(left_ok && right_ok)) continue;
    const Real l = xs[std::max(0, i - 1)], r = xs[std::min(samples, i + 1)];
    std::uintmax_t iters = 200;
    auto res = boost::math::tools::brent_find_minima(dist2, l, r, 60, iters);
    cands.push_back(res.second <= ds[i] ? Candidate{res.first, res.second} : Candidate{xs[i], ds[i]});
  }
  Real best = kInfinity;
  for (const auto& c : cands) best = std::min(best, c.d);
  const Real sign = a < 0 ? -1 : 1;
  const Candidate* pick = nullptr;
  for (const auto& c : cands) {
    if (c.d > best * (1 + 1e-12L)) continue;
    if (!pick) {
      pick = &c;
      continue;
    }
    const Real ac = std::fabs(c.x), ap = std::fabs(pick->x);
    if (ac < ap * (1 - 1e-12L) || (std::fabs(ac - ap) <= ap * 1e-12L && c.x * sign > pick->x * sign)) pick = &c;
  }
  return pick->x;
}

Real DomainOracle::boundary_distance(const CPoint& z) const {
  require_inside(z);
  if (z.re1 == 0 && z.re2 <= capture_height_) return z.re2;
  if (profile_.kind() == ProfileKind::TestStub && profile_.eval(1) == 0) return z.re2;
  const Real x = nearest_abscissa(z.re1, z.re2);
  return std::min(std::hypot(x - z.re1, profile_(x) - z.re2), z.re2 - profile_(z.re1));
}

CPoint DomainOracle::boundary_project(const CPoint& z) const {
  require_inside(z);
  if ((z.re1 == 0 && z.re2 <= capture_height_) || (profile_.kind() == ProfileKind::TestStub && profile_.eval(1) == 0))
    return {z.re1, z.im1, profile_(z.re1), z.im2};
  const Real x = nearest_abscissa(z.re1, z.re2);
  const Real vertical = z.re2 - profile_(z.re1);
  if (vertical <= std::hypot(x - z.re1, profile_(x) - z.re2)) return {z.re1, z.im1, profile_(z.re1), z.im2};
  return {x, z.im1, profile_(x), z.im2};
}

Real DomainOracle::ray_root(const CPoint& z, Real a, Real b, Real cap) const {
  auto g = [&](Real rho) { return z.re2 + rho * b - profile_(z.re1 + rho * a); };
  const Real gap = z.re2 - profile_(z.re1);
  if (a == 0) return b < 0 ? gap / (-b) : kInfinity;
  Real lo = 0, hi = gap / std::hypot(a, b);
  Real glo = gap, ghi = g(hi);
  if (ghi > 0) {
    while (ghi > 0) {
      lo = hi;
      glo = ghi;
      hi *= 2;
      if (hi > 2 * cap) return kInfinity;
      ghi = g(hi);
    }
  } else {
    Real mid = hi / 2, gm = g(mid);
    while (gm <= 0 && mid > 0) {
      hi = mid;
      ghi = gm;
      mid /= 2;
      gm = g(mid);
    }
    lo = mid;
    glo = gm;
  }
  if (ghi == 0) return hi;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, RelTol{}, iters);
  const Real root = (r.first + r.second) / 2;
  return root <= cap ? root : kInfinity;
}

Real DomainOracle::phase_radius(const CPoint& z, const CVector& v, Real theta, Real cap) const {
  const Real c = std::cos(theta), s = std::sin(theta);
  const Real a = c * v.re1 - s * v.im1;
  const Real b = c * v.re2 - s * v.im2;
  return ray_root(z, a, b, cap);
}

Real DomainOracle::directional_distance_generic(const CPoint& z, const CVector& v) const {
  require_inside(z);
  require_direction(v);
  const Real cap = 10 * options_.depth_cap;
  const int m = options_.phase_grid_count;
  const Real step = 2 * kPi / m;
  std::vector<Real> radius(m);
  int best = -1;
  for (int i = 0; i < m; ++i) {
    radius[i] = phase_radius(z, v, step * i, cap);
    if (std::isfinite(radius[i]) && (best < 0 || radius[i] < radius[best])) best = i;
  }
  if (best < 0) return kInfinity;
  auto f = [&](Real theta) {
    const Real r = phase_radius(z, v, theta, cap);
    return std::isfinite(r) ? r : std::numeric_limits<Real>::max();
  };
  std::uintmax_t iters = 100;
  auto res = boost::math::tools::brent_find_minima(f, step * (best - 1), step * (best + 1), 40, iters);
  return std::min(radius[best], res.second);
}

Real DomainOracle::directional_distance(const CPoint& z, const CVector& v) const {
  require_inside(z);
  require_direction(v);
  const Real n1 = std::hypot(v.re1, v.im1), n2 = std::hypot(v.re2, v.im2);
  if (n1 == 0) return (z.re2 - profile_(z.re1)) / n2;
  if (n2 == 0) {
    const Real cap = 10 * options_.depth_cap;
    if (z.re2 > profile_(cap)) return kInfinity;
    return (profile_.inverse(z.re2, cap) - std::fabs(z.re1)) / n1;
  }
  // Common phase in both components: the ray at phase theta is the real ray
  // scaled by 1 / |cos theta|, so only theta = 0 and pi matter.
  const Complex v1 = v.v1(), v2 = v.v2();
  if (std::fabs((v1 * std::conj(v2)).imag()) <= 1e-15L * n1 * n2) {
    const Real cap = 10 * options_.depth_cap;
    const Real b = (v2 * std::conj(v1 / n1)).real();
    return std::min(ray_root(z, n1, b, cap), ray_root(z, -n1, -b, cap));
  }
  return directional_distance_generic(z, v);
}

Frame DomainOracle::normal_tangent_frame(const CPoint& p) const {
  if (!on_boundary(p)) throw Error(ErrorCode::NotOnBoundary, "frame needs a boundary point");
  const auto [l, r] = profile_.one_sided_derivatives(p.re1);
  const Real scale = std::max(std::fabs(l), std::fabs(r));
  if (std::fabs(l - r) > 1e-6L * scale) throw Error(ErrorCode::NonSmoothPoint, "profile has a kink here");
  const Real m = (l + r) / 2;
  const Real n = std::sqrt(1 + m * m);
  return {CVector{-m / n, 0, 1 / n, 0}, CVector{1 / n, 0, m / n, 0}};
}

std::optional<FaceSegment> DomainOracle::flat_face_segment(const CPoint& p) const {
  if (!on_boundary(p)) throw Error(ErrorCode::NotOnBoundary, "face needs a boundary point");
  const auto piece = profile_.affine_piece(p.re1);
  if (!piece) return std::nullopt;
  auto [lo, hi] = *piece;
  hi = std::min(hi, options_.depth_cap);
  if (!(hi > lo)) return std::nullopt;
  // Mirror image on the negative side runs from -hi to -lo.
  const bool negative = p.re1 < 0;
  const Real start = negative ? -hi : lo;
  const Real end = negative ? -lo : hi;
  const Real rise = profile_(end) - profile_(start);
  const Real run = end - start;
  const Real len = std::hypot(run, rise);
  FaceSegment seg;
  seg.base = {start, p.im1, profile_(start), p.im2};
  seg.direction = {run / len, 0, rise / len, 0};
  seg.extent = len;
  return seg;
}

std::optional<FaceSegment> DomainOracle::face_segment(const CPoint& p) const {
  if (auto flat = flat_face_segment(p)) return flat;
  const Real m = profile_.derivative(p.re1);
  const Real n = std::sqrt(1 + m * m);
  FaceSegment seg;
  seg.base = p;
  seg.direction = {0, 1 / n, 0, m / n};
  seg.extent = options_.depth_cap;
  return seg;
}

}  // namespace kobvis
