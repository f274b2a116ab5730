#include "kobvis/profiles.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cfloat>
#include <functional>
#include <sstream>

namespace kobvis {

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::ExpPower: return "ExpPower";
    case ProfileKind::PiecewiseMax: return "PiecewiseMax";
    case ProfileKind::Mollified: return "Mollified";
    case ProfileKind::TestStub: return "TestStub";
  }
  return "Unknown";
}

struct ProfileFunction::Impl {
  ProfileKind kind = ProfileKind::TestStub;

  // ExpPower
  Real alpha = 0, c = 0;
  bool convexify = false;
  Real join = kInfinity;
  Real join_value = 0, join_d1 = 0, join_d2 = 0;

  // TestStub: slope * |x| (slope 0 is the flat stub)
  Real slope = 0;

  // PiecewiseMax / Mollified
  std::optional<ProfileFunction> parent;
  int j_max = 0;
  std::vector<Real> node_value;  // base(t_j), j = 0..j_max+1
  std::vector<Chord> chords;
  std::vector<int> chord_at;  // chord slot for index n, -1 if none
  std::vector<SmoothedKink> kinks;
  std::vector<int> kink_at;  // kink slot for node j, -1 if none
};

namespace {

using Impl = ProfileFunction::Impl;

Real node(int j) { return std::ldexp(Real(1), -j); }

Real exp_power_raw(Real alpha, Real c, Real x) {
  if (x == 0) return 0;
  return std::exp(-c * std::pow(x, -alpha));
}

Real exp_power_raw_d1(Real alpha, Real c, Real x) {
  if (x == 0) return 0;
  return exp_power_raw(alpha, c, x) * c * alpha * std::pow(x, -alpha - 1);
}

Real exp_power_raw_d2(Real alpha, Real c, Real x) {
  if (x == 0) return 0;
  const Real xa = std::pow(x, -alpha);
  return exp_power_raw(alpha, c, x) * c * alpha * std::pow(x, -alpha - 2) * (c * alpha * xa - (alpha + 1));
}

Real bisect_inverse(const std::function<Real(Real)>& f, Real y, Real lo, Real hi) {
  // f increasing on [lo, hi] with f(lo) <= y <= f(hi).
  std::uintmax_t iters = 200;
  auto g = [&](Real x) { return f(x) - y; };
  const Real glo = g(lo), ghi = g(hi);
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<Real>(62), iters);
  return (r.first + r.second) / 2;
}

Real eval_impl(const Impl& p, Real x);
Real right_derivative_pos(const Impl& p, Real x);
Real left_derivative_pos(const Impl& p, Real x);

// ExpPower on x >= 0.
Real exp_power_eval(const Impl& p, Real x) {
  if (x <= p.join) return exp_power_raw(p.alpha, p.c, x);
  const Real d = x - p.join;
  return p.join_value + p.join_d1 * d + p.join_d2 * d * d / 2;
}

Real exp_power_d1(const Impl& p, Real x) {
  if (x <= p.join) return exp_power_raw_d1(p.alpha, p.c, x);
  return p.join_d1 + p.join_d2 * (x - p.join);
}

Real exp_power_inverse(const Impl& p, Real y) {
  if (y == 0) return 0;
  if (y <= p.join_value || !p.convexify) {
    if (y >= 1) throw Error(ErrorCode::OutOfRange, "ExpPower inverse needs y < 1");
    return std::pow(p.c / std::log(1 / y), 1 / p.alpha);
  }
  const Real b = p.join_d1, a = p.join_d2 / 2, cc = p.join_value - y;
  // Stable root of a d^2 + b d + cc = 0 with d >= 0.
  const Real disc = b * b - 4 * a * cc;
  const Real d = (-2 * cc) / (b + std::sqrt(disc));
  return p.join + d;
}

// Chord slot covering x > 0; `left` selects the piece on the left of x when x
// is a node.
int chord_slot(const Impl& p, Real x, bool left) {
  if (x <= 0) return -1;
  int e = std::ilogb(x);
  int n = -e - 1;
  if (left && std::frexp(x, &e) == Real(0.5)) n += 1;
  if (n < 0 || n >= static_cast<int>(p.chord_at.size())) return -1;
  return p.chord_at[n];
}

Real piecewise_eval(const Impl& p, Real x) {
  const int slot = chord_slot(p, x, false);
  if (slot >= 0) return p.chords[slot](x);
  return p.parent->eval(x);
}

Real piecewise_side_derivative(const Impl& p, Real x, bool left) {
  const int slot = chord_slot(p, x, left);
  if (slot >= 0) return p.chords[slot].slope;
  const auto [l, r] = p.parent->one_sided_derivatives(x);
  return left ? l : r;
}

Real piecewise_inverse(const Impl& p, Real y, Real x_max) {
  for (const Chord& ch : p.chords) {
    if (y >= ch.value_left && y <= ch.value_right) {
      if (ch.slope == 0) return ch.left;
      return std::clamp(ch.left + (y - ch.value_left) / ch.slope, ch.left, ch.right);
    }
  }
  return p.parent->inverse(y, x_max);
}

const SmoothedKink* kink_for(const Impl& p, Real x) {
  if (x <= 0) return nullptr;
  const int j0 = -std::ilogb(x);
  for (int j : {j0, j0 - 1, j0 + 1}) {
    if (j < 0 || j >= static_cast<int>(p.kink_at.size()) || p.kink_at[j] < 0) continue;
    const SmoothedKink& k = p.kinks[p.kink_at[j]];
    if (std::fabs(x - k.center) < k.scale * Mollifier::standard().support_radius()) return &k;
  }
  return nullptr;
}

Real mollified_eval(const Impl& p, Real x) {
  const Real base = p.parent->eval(x);
  const SmoothedKink* k = kink_for(p, x);
  if (!k) return base;
  const Real u = (x - k->center) / k->scale;
  return base + k->half_jump * k->scale * (Mollifier::standard().smoothed_abs(u) - std::fabs(u));
}

Real mollified_side_derivative(const Impl& p, Real x, bool left) {
  const SmoothedKink* k = kink_for(p, x);
  const auto [l, r] = p.parent->one_sided_derivatives(x);
  Real d = left ? l : r;
  if (!k) return d;
  const Real u = (x - k->center) / k->scale;
  const Real sgn = u > 0 ? 1 : (u < 0 ? -1 : (left ? -1 : 1));
  return d + k->half_jump * (Mollifier::standard().smoothed_abs_derivative(u) - sgn);
}

Real eval_impl(const Impl& p, Real x) {
  x = std::fabs(x);
  switch (p.kind) {
    case ProfileKind::ExpPower: return exp_power_eval(p, x);
    case ProfileKind::TestStub: return p.slope * x;
    case ProfileKind::PiecewiseMax: return piecewise_eval(p, x);
    case ProfileKind::Mollified: return mollified_eval(p, x);
  }
  return 0;
}

Real side_derivative_pos(const Impl& p, Real x, bool left) {
  switch (p.kind) {
    case ProfileKind::ExpPower: return exp_power_d1(p, x);
    case ProfileKind::TestStub: return (x == 0 && left) ? -p.slope : p.slope;
    case ProfileKind::PiecewiseMax: return piecewise_side_derivative(p, x, left);
    case ProfileKind::Mollified: return mollified_side_derivative(p, x, left);
  }
  return 0;
}

Real right_derivative_pos(const Impl& p, Real x) { return side_derivative_pos(p, x, false); }
Real left_derivative_pos(const Impl& p, Real x) { return side_derivative_pos(p, x, true); }

std::shared_ptr<Impl> derived_impl(ProfileKind kind, const ProfileFunction& parent, int j_max) {
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->parent = parent;
  impl->j_max = j_max;
  return impl;
}

}  // namespace

ProfileFunction ProfileFunction::exp_power(Real alpha, Real c, bool convexify) {
  if (!(alpha > 0) || !(c > 0) || !std::isfinite(alpha) || !std::isfinite(c))
    throw Error(ErrorCode::BadParameters, "ExpPower needs alpha > 0 and c > 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::ExpPower;
  impl->alpha = alpha;
  impl->c = c;
  impl->convexify = convexify;
  if (convexify) {
    const Real inflection = std::pow(c * alpha / (alpha + 1), 1 / alpha);
    auto neg_d2 = [&](Real s) { return -exp_power_raw_d2(alpha, c, std::exp(s)); };
    std::uintmax_t iters = 200;
    const auto peak = boost::math::tools::brent_find_minima(neg_d2, std::log(inflection) - 12, std::log(inflection),
                                                            40, iters);
    const Real join = std::max(Real(0.9) * inflection, std::exp(peak.first));
    impl->join = join;
    impl->join_value = exp_power_raw(alpha, c, join);
    impl->join_d1 = exp_power_raw_d1(alpha, c, join);
    impl->join_d2 = exp_power_raw_d2(alpha, c, join);
  }
  return ProfileFunction(impl);
}

ProfileFunction ProfileFunction::flat_stub() {
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::TestStub;
  impl->slope = 0;
  return ProfileFunction(impl);
}

ProfileFunction ProfileFunction::wedge_stub(Real slope) {
  if (!(slope >= 0) || !std::isfinite(slope)) throw Error(ErrorCode::BadParameters, "wedge slope must be >= 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::TestStub;
  impl->slope = slope;
  return ProfileFunction(impl);
}

ProfileKind ProfileFunction::kind() const { return impl_->kind; }

std::string ProfileFunction::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (impl_->kind) {
    case ProfileKind::ExpPower:
      os << "ExpPower(alpha=" << static_cast<double>(impl_->alpha) << ", c=" << static_cast<double>(impl_->c)
         << (impl_->convexify ? "" : ", raw") << ")";
      break;
    case ProfileKind::TestStub:
      if (impl_->slope == 0)
        os << "TestStub(flat)";
      else
        os << "TestStub(wedge, slope=" << static_cast<double>(impl_->slope) << ")";
      break;
    case ProfileKind::PiecewiseMax:
      os << "PiecewiseMax(" << impl_->parent->describe() << ", j_max=" << impl_->j_max << ")";
      break;
    case ProfileKind::Mollified:
      os << "Mollified(" << impl_->parent->describe() << ")";
      break;
  }
  return os.str();
}

Real ProfileFunction::eval(Real x) const {
  if (!std::isfinite(x)) throw Error(ErrorCode::BadParameters, "profile argument must be finite");
  return eval_impl(*impl_, x);
}

std::pair<Real, Real> ProfileFunction::one_sided_derivatives(Real x) const {
  if (x >= 0) {
    const Real l = x == 0 ? -right_derivative_pos(*impl_, 0) : left_derivative_pos(*impl_, x);
    return {l, right_derivative_pos(*impl_, x)};
  }
  const Real ax = -x;
  return {-right_derivative_pos(*impl_, ax), -left_derivative_pos(*impl_, ax)};
}

Real ProfileFunction::derivative(Real x) const {
  const auto [l, r] = one_sided_derivatives(x);
  return (l + r) / 2;
}

Real ProfileFunction::inverse(Real y, Real x_max) const {
  if (!(y >= 0) || !std::isfinite(y)) throw Error(ErrorCode::OutOfRange, "inverse needs finite y >= 0");
  if (y == 0) return 0;
  if (y > eval(x_max)) throw Error(ErrorCode::OutOfRange, "value exceeds the profile on the working box");
  const Impl& p = *impl_;
  switch (p.kind) {
    case ProfileKind::ExpPower: return exp_power_inverse(p, y);
    case ProfileKind::TestStub: return y / p.slope;
    case ProfileKind::PiecewiseMax: return piecewise_inverse(p, y, x_max);
    case ProfileKind::Mollified: {
      // Psi_inf >= Psi_0, so the root lies below the Psi_0 inverse.
      Real hi = p.parent->inverse(y, x_max);
      if (!kink_for(p, hi) && eval(hi) == y) return hi;
      while (eval(hi) < y) hi *= 1 + 1e-15L;
      Real lo = hi * Real(0.7);
      while (eval(lo) > y) lo *= Real(0.5);
      return bisect_inverse([this](Real x) { return eval(x); }, y, lo, hi);
    }
  }
  return 0;
}

std::optional<std::pair<Real, Real>> ProfileFunction::affine_piece(Real x) const {
  const Impl& p = *impl_;
  const Real ax = std::fabs(x);
  switch (p.kind) {
    case ProfileKind::ExpPower: return std::nullopt;
    case ProfileKind::TestStub: return std::make_pair(Real(0), kInfinity);
    case ProfileKind::PiecewiseMax: {
      const int slot = chord_slot(p, ax, false) >= 0 ? chord_slot(p, ax, false) : chord_slot(p, ax, true);
      if (slot < 0) return std::nullopt;
      return std::make_pair(p.chords[slot].left, p.chords[slot].right);
    }
    case ProfileKind::Mollified: {
      const int slot = chord_slot(*p.parent->impl_, ax, false);
      if (slot < 0) return std::nullopt;
      const Chord& ch = p.parent->impl_->chords[slot];
      const Real a = Mollifier::standard().support_radius() / 4;
      const Real lo = ch.left * (1 + a), hi = ch.right * (1 - a);
      if (ax < lo || ax > hi) return std::nullopt;
      return std::make_pair(lo, hi);
    }
  }
  return std::nullopt;
}

const std::vector<Chord>& ProfileFunction::chords() const {
  if (impl_->kind == ProfileKind::Mollified) return impl_->parent->chords();
  return impl_->chords;
}

const std::vector<SmoothedKink>& ProfileFunction::kinks() const { return impl_->kinks; }

const ProfileFunction* ProfileFunction::parent() const { return impl_->parent ? &*impl_->parent : nullptr; }

int ProfileFunction::chord_levels() const { return impl_->j_max; }

Real ProfileFunction::alpha() const { return impl_->alpha; }
Real ProfileFunction::c() const { return impl_->c; }
Real ProfileFunction::join_point() const { return impl_->join; }

ProfileFunction build_piecewise_max(const ProfileFunction& base, int j_max) {
  if (j_max < 2) throw Error(ErrorCode::BadParameters, "j_max must be >= 2");
  if (base.kind() == ProfileKind::PiecewiseMax || base.kind() == ProfileKind::Mollified)
    throw Error(ErrorCode::BadParameters, "base must be a smooth profile");
  // Keep every node value comfortably above the extended-precision floor.
  const Real floor = LDBL_MIN * Real(1e20);
  while (j_max > 2 && !(base(node(j_max + 1)) > floor)) --j_max;
  if (!(base(node(j_max + 1)) > floor)) throw Error(ErrorCode::BadParameters, "base underflows at t_3");

  auto impl = derived_impl(ProfileKind::PiecewiseMax, base, j_max);
  impl->node_value.resize(j_max + 2);
  for (int j = 0; j <= j_max + 1; ++j) impl->node_value[j] = base(node(j));
  impl->chord_at.assign(j_max + 2, -1);
  for (int n = 2; n <= j_max; n += 2) {
    Chord ch;
    ch.index = n;
    ch.left = node(n + 1);
    ch.right = node(n);
    ch.value_left = impl->node_value[n + 1];
    ch.value_right = impl->node_value[n];
    ch.slope = (ch.value_right - ch.value_left) / (ch.right - ch.left);
    impl->chord_at[n] = static_cast<int>(impl->chords.size());
    impl->chords.push_back(ch);
  }
  return ProfileFunction(impl);
}

ProfileFunction mollify(const ProfileFunction& psi0, int j_max) {
  if (psi0.kind() != ProfileKind::PiecewiseMax) throw Error(ErrorCode::BadParameters, "mollify needs a PiecewiseMax");
  j_max = std::min(j_max, psi0.chord_levels());
  if (j_max < 2) throw Error(ErrorCode::BadParameters, "j_max must be >= 2");
  auto impl = derived_impl(ProfileKind::Mollified, psi0, j_max);
  impl->kink_at.assign(j_max + 3, -1);
  for (int j = 2; j <= j_max + 1; ++j) {
    const Real t = node(j);
    const auto [l, r] = psi0.one_sided_derivatives(t);
    if (r == l) continue;
    SmoothedKink k;
    k.node = j;
    k.center = t;
    k.scale = t / 4;
    k.half_jump = (r - l) / 2;
    impl->kink_at[j] = static_cast<int>(impl->kinks.size());
    impl->kinks.push_back(k);
  }
  return ProfileFunction(impl);
}

}  // namespace kobvis
