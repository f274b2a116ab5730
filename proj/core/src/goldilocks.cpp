#include "kobvis/goldilocks.hpp"

#include <algorithm>
#include <sstream>

#include "kobvis/quadrature.hpp"

namespace kobvis {

const char* to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Convergent: return "Convergent";
    case VerdictStatus::Divergent: return "Divergent";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

namespace {

constexpr int kFitWindow = 20;
constexpr Real kGeometricRatio = 0.95L;
constexpr Real kConvergentExponent = 1.3L;
constexpr Real kDivergentExponent = 1.1L;
constexpr Real kDivergentSum = 1e3L;

}  // namespace

IntegralVerdict improper_integral_verdict(const std::function<Real(Real)>& f, Real eps, int levels) {
  if (!(eps > 0) || levels < kFitWindow) throw Error(ErrorCode::BadParameters, "need eps > 0 and enough levels");
  IntegralVerdict out;
  out.increments.reserve(levels + 1);
  const Real ln2 = std::log(Real(2));
  for (int k = 0; k <= levels; ++k) {
    const Real hi = std::log(eps) - k * ln2;
    const Real lo = hi - ln2;
    // x = e^s puts every level on an interval of the same length.
    const Real ik = integrate_adaptive(
        [&](Real s) {
          const Real x = std::exp(s);
          const Real v = f(x);
          if (!std::isfinite(v) || v < 0) throw Error(ErrorCode::NonFiniteIntegrand, "integrand not finite and >= 0");
          return v * x;
        },
        lo, hi, 1e-10L, 6);
    if (!std::isfinite(ik)) throw Error(ErrorCode::NonFiniteIntegrand, "dyadic increment not finite");
    out.increments.push_back(ik);
    out.partial_sum += ik;
  }
  const auto& inc = out.increments;
  const int first = levels + 1 - kFitWindow;

  if (out.partial_sum > kDivergentSum) {
    out.status = VerdictStatus::Divergent;
    out.rule = "partial sum above threshold";
    return out;
  }

  // Geometric decay of the increments.
  Real q = 0;
  bool all_zero = true;
  for (int k = first; k < levels; ++k) {
    if (inc[k] > 0) all_zero = false;
    q = std::max(q, inc[k] > 0 ? inc[k + 1] / inc[k] : Real(0));
  }
  if (all_zero && inc[levels] == 0) {
    out.status = VerdictStatus::Convergent;
    out.value = out.partial_sum;
    out.rule = "vanishing increments";
    return out;
  }
  if (q <= kGeometricRatio) {
    out.tail = inc[levels] * q / (1 - q);
    out.value = out.partial_sum + out.tail;
    out.growth_rate = -std::log(q) / ln2;
    out.status = VerdictStatus::Convergent;
    out.rule = "geometric decay";
    return out;
  }

  // Power decay in l = log(1/x): I_k ~ A l_k^-p. The window spans the upper
  // half of the levels in log(l) so that staircase gauges average out.
  auto ell_at = [&](Real k) { return -std::log(eps) + (k + 0.5L) * ln2; };
  const Real ell_split = std::sqrt(ell_at(0) * ell_at(levels));
  int fit_first = first;
  while (fit_first > 0 && ell_at(fit_first - 1) >= ell_split) --fit_first;
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = fit_first; k <= levels; ++k) {
    if (!(inc[k] > 0)) continue;
    const Real ell = ell_at(k);
    const Real x = std::log(ell), y = std::log(inc[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
  }
  if (n >= 3) {
    const Real slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const Real intercept = (sy - slope * sx) / n;
    const Real p = -slope;
    out.growth_rate = p;
    if (p >= kConvergentExponent) {
      const Real ell_end = -std::log(eps) + (levels + 1) * ln2;
      out.tail = std::exp(intercept) * std::pow(ell_end, 1 - p) / ((p - 1) * ln2);
      out.value = out.partial_sum + out.tail;
      out.status = VerdictStatus::Convergent;
      out.rule = "power decay in log(1/x)";
      return out;
    }
    if (p <= kDivergentExponent) {
      out.status = VerdictStatus::Divergent;
      out.rule = "increments decay no faster than 1/log(1/x)";
      return out;
    }
  }
  out.status = VerdictStatus::Inconclusive;
  out.rule = "no decay model fits";
  return out;
}

Real tangential_gauge(const DomainOracle& oracle, const CPoint& p, Real r) {
  const Frame f = oracle.normal_tangent_frame(p);
  return oracle.directional_distance(p + r * f.eta, f.X);
}

ShapeReport gauge_shape_check(const DomainOracle& oracle, const CPoint& p, const std::vector<Real>& radii) {
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0) || !(radii[i] < oracle.options().depth_cap) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw Error(ErrorCode::BadParameters, "radii must be increasing within (0, depth_cap)");
  ShapeReport rep;
  for (Real r : radii) rep.values.push_back(tangential_gauge(oracle, p, r));
  if (rep.values.empty()) return rep;
  rep.max_index = static_cast<std::size_t>(std::max_element(rep.values.begin(), rep.values.end()) - rep.values.begin());
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const Real mid = tangential_gauge(oracle, p, (radii[i] + radii[i + 1]) / 2);
    const Real chord = (rep.values[i] + rep.values[i + 1]) / 2;
    if (mid < chord - 1e-9L) {
      std::ostringstream os;
      os << "concavity fails on [" << static_cast<double>(radii[i]) << ", " << static_cast<double>(radii[i + 1]) << "]";
      rep.violations.push_back(os.str());
    }
    if (i < rep.max_index && rep.values[i + 1] < rep.values[i] - 1e-12L) {
      std::ostringstream os;
      os << "gauge decreases at r = " << static_cast<double>(radii[i + 1]);
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

namespace {

std::vector<CVector> sphere_directions(int n) {
  std::vector<CVector> dirs;
  for (int i = 0; i < n; ++i) {
    const Real a = (kPi / 2) * i / (n - 1);
    for (int m = 0; m < n; ++m) {
      if (i == 0 && m > 0) break;
      const Complex phase = std::polar(Real(1), 2 * kPi * m / n);
      dirs.push_back(CVector::from_complex(std::cos(a), std::sin(a) * phase));
    }
  }
  return dirs;
}

// Log-linear interpolation of samples taken at decreasing radii.
std::function<Real(Real)> interpolated(const std::vector<Real>& radii, const std::vector<Real>& values) {
  return [radii, values](Real r) {
    const std::size_t n = radii.size();
    if (r >= radii.front()) return values.front();
    if (r <= radii.back()) return values.back();
    std::size_t k = 0;
    while (k + 1 < n && radii[k + 1] > r) ++k;
    const Real t = std::log(radii[k] / r) / std::log(radii[k] / radii[k + 1]);
    return std::exp((1 - t) * std::log(values[k]) + t * std::log(values[k + 1]));
  };
}

void running_max_from_small(std::vector<Real>& v) {
  // v is ordered by decreasing radius.
  for (std::size_t k = v.size() - 1; k-- > 0;) v[k] = std::max(v[k], v[k + 1]);
}

}  // namespace

ClassificationReport classify_point(const DomainOracle& oracle, const CPoint& p, const ClassifyOptions& opts) {
  if (!oracle.on_boundary(p)) throw Error(ErrorCode::NotOnBoundary, "classification needs a boundary point");
  ClassificationReport rep;
  rep.point = p;
  const int nr = opts.levels + 2;
  for (int k = 0; k < nr; ++k) rep.radii.push_back(std::ldexp(opts.eps, -k));

  const Frame fp = oracle.normal_tangent_frame(p);
  const Complex i1(0, 1);
  const std::vector<CVector> frame_dirs{fp.X, i1 * fp.X, fp.eta};
  std::vector<CVector> ray_dirs = sphere_directions(opts.direction_grid);
  ray_dirs.insert(ray_dirs.end(), frame_dirs.begin(), frame_dirs.end());
  rep.sampled_directions = static_cast<int>(ray_dirs.size());

  auto finite_or_cap = [&](Real d) { return std::isfinite(d) ? d : 10 * oracle.options().depth_cap; };

  rep.m_gauge.resize(nr);
  rep.weakly_gauge.resize(nr);
  for (int k = 0; k < nr; ++k) {
    const CPoint z = p + rep.radii[k] * fp.eta;
    rep.m_gauge[k] = finite_or_cap(oracle.directional_distance(z, fp.X));
    Real best = 0;
    for (const auto& v : ray_dirs) best = std::max(best, finite_or_cap(oracle.directional_distance(z, v)));
    rep.weakly_gauge[k] = best;
  }
  running_max_from_small(rep.weakly_gauge);

  // Neighborhood shell: boundary points at log-spaced offsets in Re z1.
  rep.n_gauge = rep.weakly_gauge;
  std::vector<Real> offsets;
  if (opts.shell_points < 2) throw Error(ErrorCode::BadParameters, "need at least two shell points");
  for (int m = 0; m < opts.shell_points; ++m) {
    const Real x = opts.neighborhood * std::exp2(-static_cast<Real>(opts.shell_octaves) * m / (opts.shell_points - 1));
    offsets.push_back(x);
    offsets.push_back(-x);
  }
  const Real rs = 1 / std::sqrt(Real(2));
  for (Real dx : offsets) {
    const Real x = p.re1 + dx;
    const CPoint q{x, p.im1, oracle.profile()(x), p.im2};
    if (std::hypot(q.re1 - p.re1, q.re2 - p.re2) > opts.neighborhood) continue;
    Frame fq;
    try {
      fq = oracle.normal_tangent_frame(q);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonSmoothPoint) continue;
      throw;
    }
    ++rep.shell_points;
    const std::vector<CVector> dirs{fq.X, i1 * fq.X, fq.eta, rs * (fq.X + fq.eta), rs * (fq.X - fq.eta)};
    for (int k = 0; k < nr; ++k) {
      const CPoint z = q + rep.radii[k] * fq.eta;
      if (!oracle.contains(z)) continue;
      for (const auto& v : dirs) rep.n_gauge[k] = std::max(rep.n_gauge[k], finite_or_cap(oracle.directional_distance(z, v)));
    }
  }
  running_max_from_small(rep.n_gauge);

  auto over_r = [](std::function<Real(Real)> g) { return [g](Real r) { return g(r) / r; }; };
  rep.strongly_non = improper_integral_verdict(
      [&](Real r) { return finite_or_cap(oracle.directional_distance(p + r * fp.eta, fp.X)) / r; }, opts.eps,
      opts.levels);
  rep.weakly = improper_integral_verdict(over_r(interpolated(rep.radii, rep.weakly_gauge)), opts.eps, opts.levels);
  rep.local = improper_integral_verdict(over_r(interpolated(rep.radii, rep.n_gauge)), opts.eps, opts.levels);

  rep.strongly_non_goldilocks = rep.strongly_non.status == VerdictStatus::Divergent;
  rep.weakly_goldilocks = rep.weakly.status == VerdictStatus::Convergent;
  rep.non_goldilocks = rep.local.status == VerdictStatus::Divergent;
  std::vector<std::string> parts;
  if (rep.strongly_non_goldilocks) parts.push_back("strongly non-Goldilocks");
  if (rep.weakly_goldilocks) parts.push_back("weakly Goldilocks");
  if (rep.non_goldilocks) parts.push_back("non-Goldilocks");
  if (rep.local.status == VerdictStatus::Convergent) parts.push_back("local Goldilocks");
  if (parts.empty()) parts.push_back("undecided");
  for (std::size_t i = 0; i < parts.size(); ++i) rep.summary += (i ? " + " : "") + parts[i];
  return rep;
}

Real face_witness(const DomainOracle& oracle, const CPoint& face_point, const CVector& face_direction, Real r) {
  const Frame f = oracle.normal_tangent_frame(face_point);
  return oracle.directional_distance(face_point + r * f.eta, face_direction.normalized());
}

}  // namespace kobvis
