#pragma once

#include <memory>
#include <vector>

#include "kobvis/geometry.hpp"
#include "kobvis/metric.hpp"

namespace kobvis {

/// A point (s, y) of a 2-real-dimensional slice; y > 0 is the depth coordinate.
struct SlicePoint {
  Real s = 0;
  Real y = 0;
};

/// Upper bound on the kappa-length of straight segments in a slice.
class SliceMetric {
 public:
  virtual ~SliceMetric() = default;
  virtual Real segment_upper(const SlicePoint& a, const SlicePoint& b) const = 0;
  virtual bool valid(const SlicePoint& p) const { return p.y > 0 && std::isfinite(p.s) && std::isfinite(p.y); }
};

/// Right half-plane y + i s with metric |dz| / (2 y); segment lengths exact.
class HalfPlaneSlice : public SliceMetric {
 public:
  Real segment_upper(const SlicePoint& a, const SlicePoint& b) const override;
};

/// The slice {(re1, s i, y, im2)} of a model domain through a fixed anchor
/// (re1, im2). Weights integrate the split upper bound of the metric.
class ModelSlice : public SliceMetric {
 public:
  explicit ModelSlice(DomainOracle oracle, Real re1 = 0, Real im2 = 0, int gauss_points = 16);

  Real segment_upper(const SlicePoint& a, const SlicePoint& b) const override;
  bool valid(const SlicePoint& p) const override;

  CPoint point(const SlicePoint& p) const { return {re1_, p.s, p.y, im2_}; }
  /// Throws AttachmentFailure if z is not in this slice.
  SlicePoint coordinates(const CPoint& z) const;
  const DomainOracle& oracle() const { return oracle_; }

 private:
  DomainOracle oracle_;
  Real re1_, im2_;
  int gauss_points_;
  bool fast_column_;
  Real fast_height_;
};

struct GridSpec {
  Real h = 0.05;  // spacing in s and in log(y) / 2
  Real y_min = 1e-4L, y_max = 1;
  Real s_min = -1, s_max = 1;
  int window = 6;           // edge offsets (di, dj) coprime with |di|, |dj| <= window
  Real attach_radius = 0;   // physical attachment radius; 0 selects window * h
};

/// Shortest-path upper bound for the Kobayashi distance on a log-spaced grid
/// of a slice. Rows y_i = y_max exp(-2 h i), columns s_j = s_min + j h, so
/// halving h nests the grids. Immutable after construction.
class DistanceGrid {
 public:
  DistanceGrid(std::shared_ptr<const SliceMetric> slice, GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  const SliceMetric& slice() const { return *slice_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  SlicePoint node(int i, int j) const;

  /// Upper bound on the distance between two slice points.
  Real distance(const SlicePoint& a, const SlicePoint& b) const;
  /// Distances from one source to several targets with a single search.
  std::vector<Real> distances(const SlicePoint& source, const std::vector<SlicePoint>& targets) const;
  /// Shortest-path value between two grid nodes.
  Real node_distance(int i1, int j1, int i2, int j2) const;

  /// All-node shortest-path values from one source, reusable for many
  /// targets.
  struct Field {
    SlicePoint source;
    std::vector<Real> dist;
  };
  Field field(const SlicePoint& source) const;
  Field field(const CPoint& source) const { return field(map(source)); }
  /// Distances from each field's source to one target, attaching it once.
  std::vector<Real> distances(const std::vector<const Field*>& fields, const SlicePoint& target) const;
  std::vector<Real> distances(const std::vector<const Field*>& fields, const CPoint& target) const {
    return distances(fields, map(target));
  }

  /// Convenience for model slices: maps CPoints through the slice.
  Real distance(const CPoint& a, const CPoint& b) const;
  std::vector<Real> distances(const CPoint& source, const std::vector<CPoint>& targets) const;

 private:
  struct Offset {
    int di, dj;
  };
  struct Attachment {
    int node;
    Real weight;
  };

  std::shared_ptr<const SliceMetric> slice_;
  GridSpec spec_;
  int rows_ = 0, cols_ = 0;
  std::vector<Offset> offsets_;
  std::vector<Real> weights_;  // rows_ x offsets_, kInfinity when leaving the grid

  Real weight(int row, int k) const { return weights_[static_cast<std::size_t>(row) * offsets_.size() + k]; }
  std::vector<Attachment> attach(const SlicePoint& p) const;
  bool near(const SlicePoint& a, const SlicePoint& b) const;
  std::vector<Real> search(const std::vector<Attachment>& sources, const std::vector<char>& wanted,
                           std::size_t wanted_count) const;

 public:
  SlicePoint map(const CPoint& z) const;
};

}  // namespace kobvis
