#pragma once

#include <optional>

#include "kobvis/profiles.hpp"
#include "kobvis/types.hpp"

namespace kobvis {

enum class ConvexityClass { Convex, CConvex };

const char* to_string(ConvexityClass cls);

struct OracleOptions {
  Real depth_cap = kDefaultDepthCap;
  Real root_tol = 1e-10L;
  int phase_grid_count = 128;
};

/// Segment p + s X, s in [0, extent], contained in the boundary.
struct FaceSegment {
  CPoint base;
  CVector direction;
  Real extent = 0;

  CPoint at(Real s) const { return base + s * direction; }
};

/// Inner unit normal and unit complex-tangent vector at a boundary point.
struct Frame {
  CVector eta;
  CVector X;
};

/// The model domain {Re z2 > Psi(Re z1)} in C^2. Immutable.
class DomainOracle {
 public:
  explicit DomainOracle(ProfileFunction profile, ConvexityClass cls = ConvexityClass::Convex,
                        OracleOptions options = {});

  const ProfileFunction& profile() const { return profile_; }
  ConvexityClass convexity_class() const { return class_; }
  const OracleOptions& options() const { return options_; }

  bool contains(const CPoint& z) const;
  /// |Re z2 - Psi(Re z1)| <= root_tol (relative for large values).
  bool on_boundary(const CPoint& p) const;

  /// Euclidean distance to the boundary.
  Real boundary_distance(const CPoint& z) const;

  /// delta(z; v) = inf |alpha| over boundary hits of z + alpha v; kInfinity if
  /// none within 10 * depth_cap.
  Real directional_distance(const CPoint& z, const CVector& v) const;
  /// Same quantity, always through the phase-grid solver.
  Real directional_distance_generic(const CPoint& z, const CVector& v) const;

  /// A nearest boundary point.
  CPoint boundary_project(const CPoint& z) const;

  Frame normal_tangent_frame(const CPoint& p) const;

  /// A boundary segment through p if p lies on a non-trivial face. Every point
  /// of a tube domain lies on the translation face p + i R X, so this only
  /// returns None when p is off the boundary (which throws). Prefers the flat
  /// real face when the profile is affine near Re p1.
  std::optional<FaceSegment> face_segment(const CPoint& p) const;
  /// The face coming from an affine piece of the profile, if any.
  std::optional<FaceSegment> flat_face_segment(const CPoint& p) const;

  /// Largest b for which (0, b) has the origin as nearest boundary point.
  Real origin_capture_height() const { return capture_height_; }

 private:
  ProfileFunction profile_;
  ConvexityClass class_;
  OracleOptions options_;
  Real capture_height_ = 0;

  void require_inside(const CPoint& z) const;
  void require_direction(const CVector& v) const;
  Real ray_root(const CPoint& z, Real a, Real b, Real cap) const;
  Real phase_radius(const CPoint& z, const CVector& v, Real theta, Real cap) const;
  /// Nearest graph abscissa for (a, b) in the real plane.
  Real nearest_abscissa(Real a, Real b) const;
};

}  // namespace kobvis
