#include <algorithm>
#include <map>
#include <mutex>

#include "kobvis/profiles.hpp"
#include "kobvis/quadrature.hpp"

namespace kobvis {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::DisconnectedGrid: return "DisconnectedGrid";
    case ErrorCode::AttachmentFailure: return "AttachmentFailure";
    case ErrorCode::OutsideHalfPlane: return "OutsideHalfPlane";
    case ErrorCode::EscapedDepthCap: return "EscapedDepthCap";
    case ErrorCode::BalanceViolation: return "BalanceViolation";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    Real x = std::cos(kPi * (static_cast<Real>(i) + 0.75L) / (static_cast<Real>(n) + 0.5L));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const Real p2 = ((2 * static_cast<Real>(k) - 1) * x * p1 - (static_cast<Real>(k) - 1) * p0) / static_cast<Real>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p1 = x, p0 = 1;
      dp = static_cast<Real>(n) * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    Real p0 = 1, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const Real p2 = ((2 * static_cast<Real>(k) - 1) * x * p1 - (static_cast<Real>(k) - 1) * p0) / static_cast<Real>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<Real>(n) * (x * p1 - p0) / (x * x - 1);
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

constexpr Real kSupport = 0.9L;
constexpr int kTableIntervals = 2048;

Real bump(Real s) {
  const Real w = s / kSupport;
  if (std::fabs(w) >= 1) return 0;
  return std::exp(-1 / (1 - w * w));
}

Real bump_derivative(Real s) {
  const Real w = s / kSupport;
  if (std::fabs(w) >= 1) return 0;
  const Real q = 1 - w * w;
  return bump(s) * (-2 * w / (q * q)) / kSupport;
}

// Quintic Hermite on [0, 1] scaled by h.
Real hermite5(Real t, Real h, Real f0, Real d0, Real s0, Real f1, Real d1, Real s1) {
  const Real t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const Real h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const Real h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const Real h2 = (t2 - 3 * t3 + 3 * t4 - t5) / 2;
  const Real h3 = (t3 - 2 * t4 + t5) / 2;
  const Real h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const Real h5 = 10 * t3 - 15 * t4 + 6 * t5;
  return f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + h * h * s1 * h3 + h * d1 * h4 + f1 * h5;
}

}  // namespace

const Mollifier& Mollifier::standard() {
  static const Mollifier instance;
  return instance;
}

Mollifier::Mollifier() : radius_(kSupport), normalization_(1), intervals_(kTableIntervals) {
  const Real h = 2 * radius_ / intervals_;
  cdf_.assign(intervals_ + 1, 0);
  first_moment_.assign(intervals_ + 1, 0);
  Real mass = 0, moment = 0;
  for (int i = 0; i < intervals_; ++i) {
    const Real a = -radius_ + i * h;
    mass += integrate_fixed(bump, a, a + h, 16);
    moment += integrate_fixed([](Real s) { return s * bump(s); }, a, a + h, 16);
    cdf_[i + 1] = mass;
    first_moment_[i + 1] = moment;
  }
  normalization_ = 1 / mass;
  for (int i = 0; i <= intervals_; ++i) {
    cdf_[i] *= normalization_;
    first_moment_[i] *= normalization_;
  }
  cdf_[intervals_] = 1;
  // G(a) vanishes by symmetry; remove the accumulated rounding.
  const Real drift = first_moment_[intervals_];
  for (int i = 0; i <= intervals_; ++i) first_moment_[i] -= drift * static_cast<Real>(i) / intervals_;
  density_.resize(intervals_ + 1);
  density_slope_.resize(intervals_ + 1);
  for (int i = 0; i <= intervals_; ++i) {
    const Real x = -radius_ + i * h;
    density_[i] = rho(x);
    density_slope_[i] = normalization_ * bump_derivative(x);
  }
}

Real Mollifier::rho(Real s) const { return normalization_ * bump(s); }

Real Mollifier::interpolate(const std::vector<Real>& values, int order, Real s) const {
  const Real h = 2 * radius_ / intervals_;
  const Real pos = (s + radius_) / h;
  int i = static_cast<int>(std::floor(pos));
  i = std::clamp(i, 0, intervals_ - 1);
  const Real t = pos - i;
  auto d1 = [&](int k) {
    const Real x = -radius_ + k * h;
    return order == 0 ? density_[k] : x * density_[k];
  };
  auto d2 = [&](int k) {
    const Real x = -radius_ + k * h;
    return order == 0 ? density_slope_[k] : density_[k] + x * density_slope_[k];
  };
  return hermite5(t, h, values[i], d1(i), d2(i), values[i + 1], d1(i + 1), d2(i + 1));
}

Real Mollifier::cdf(Real s) const {
  if (s <= -radius_) return 0;
  if (s >= radius_) return 1;
  return interpolate(cdf_, 0, s);
}

Real Mollifier::smoothed_abs(Real u) const {
  if (std::fabs(u) >= radius_) return std::fabs(u);
  return u * (2 * cdf(u) - 1) - 2 * interpolate(first_moment_, 1, u);
}

Real Mollifier::smoothed_abs_derivative(Real u) const {
  if (u >= radius_) return 1;
  if (u <= -radius_) return -1;
  return 2 * cdf(u) - 1;
}

Real Mollifier::mass() const {
  Real total = 0;
  const int panels = 64;
  const Real h = 2 * radius_ / panels;
  for (int i = 0; i < panels; ++i) {
    const Real a = -radius_ + i * h;
    total += integrate_fixed([this](Real s) { return rho(s); }, a, a + h, 32);
  }
  return total;
}

}  // namespace kobvis
