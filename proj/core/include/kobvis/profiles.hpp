#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kobvis/types.hpp"

namespace kobvis {

inline constexpr Real kDefaultDepthCap = 10;
inline constexpr int kDefaultChordLevels = 40;

enum class ProfileKind { ExpPower, PiecewiseMax, Mollified, TestStub };

const char* to_string(ProfileKind kind);

/// Symmetric bump rho(s) = C exp(-1 / (1 - (s/a)^2)) on |s| < a with a = 0.9,
/// normalized to unit mass.
class Mollifier {
 public:
  static const Mollifier& standard();

  Real support_radius() const { return radius_; }
  Real rho(Real s) const;
  Real rho_scaled(Real s, Real eps) const { return rho(s / eps) / eps; }

  /// Cumulative mass F(s) = integral of rho over (-inf, s].
  Real cdf(Real s) const;

  /// m(u) = (|.| * rho)(u), the mollified absolute value at unit scale.
  Real smoothed_abs(Real u) const;
  Real smoothed_abs_derivative(Real u) const;

  Real mass() const;

 private:
  Mollifier();

  // Tables on a uniform grid over [-a, a] used for quintic Hermite
  // interpolation of F and G(s) = integral of t rho(t) up to s.
  Real radius_;
  Real normalization_;
  int intervals_;
  std::vector<Real> cdf_;
  std::vector<Real> first_moment_;
  std::vector<Real> density_, density_slope_;  // rho and rho' at the nodes

  Real interpolate(const std::vector<Real>& values, int order, Real s) const;
};

/// One chord L_n of the piecewise-max construction: affine on [left, right].
struct Chord {
  int index = 0;  // n, chord spans [t_{n+1}, t_n]
  Real left = 0, right = 0;
  Real value_left = 0, value_right = 0;
  Real slope = 0;

  Real operator()(Real x) const { return value_left + slope * (x - left); }
};

/// Kink of the piecewise-max profile at a node t_j and its mollification band.
struct SmoothedKink {
  int node = 0;
  Real center = 0;     // t_j
  Real scale = 0;      // t_j / 4
  Real half_jump = 0;  // (right slope - left slope) / 2
};

/// Even convex profile Psi with Psi(0) = 0, increasing on [0, inf).
/// Immutable and cheap to copy.
class ProfileFunction {
 public:
  /// exp(-c / |x|^alpha). With `convexify`, continued beyond the join point
  /// (90% of the inflection radius, or the peak of Psi'' if larger) by its
  /// second-order Taylor polynomial so the profile is convex on all of R.
  static ProfileFunction exp_power(Real alpha, Real c, bool convexify = true);
  /// Psi == 0.
  static ProfileFunction flat_stub();
  /// Psi(x) = slope * |x|.
  static ProfileFunction wedge_stub(Real slope);

  ProfileKind kind() const;
  std::string describe() const;

  Real operator()(Real x) const { return eval(x); }
  Real eval(Real x) const;

  /// One-sided derivatives (left, right) at x.
  std::pair<Real, Real> one_sided_derivatives(Real x) const;
  Real derivative(Real x) const;

  /// The unique x >= 0 with Psi(x) = y. Throws OutOfRange when y > Psi(x_max).
  Real inverse(Real y, Real x_max = kDefaultDepthCap) const;

  /// Maximal interval [a, b] in x >= 0 containing |x| on which Psi is affine.
  std::optional<std::pair<Real, Real>> affine_piece(Real x) const;

  // Construction data for the piecewise kinds; empty otherwise.
  const std::vector<Chord>& chords() const;
  const std::vector<SmoothedKink>& kinks() const;
  /// Underlying profile for PiecewiseMax (the base) and Mollified (Psi_0).
  const ProfileFunction* parent() const;
  int chord_levels() const;

  // ExpPower parameters (zero for other kinds).
  Real alpha() const;
  Real c() const;
  Real join_point() const;

  struct Impl;

 private:
  explicit ProfileFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend ProfileFunction build_piecewise_max(const ProfileFunction& base, int j_max);
  friend ProfileFunction mollify(const ProfileFunction& psi0, int j_max);
};

/// Psi_0 = max(Psi, L_n : n even, 2 <= n <= j_max), where L_n is the chord of
/// Psi over [t_{n+1}, t_n] and t_j = 2^-j. j_max is capped so that
/// Psi(t_{j_max+1}) stays representable.
ProfileFunction build_piecewise_max(const ProfileFunction& base, int j_max = kDefaultChordLevels);

/// Psi_inf: each kink of Psi_0 at t_j is convolved with rho_{t_j/4}; equal to
/// Psi_0 outside the bands [3 t_j / 4, 5 t_j / 4].
ProfileFunction mollify(const ProfileFunction& psi0, int j_max = kDefaultChordLevels);

}  // namespace kobvis
