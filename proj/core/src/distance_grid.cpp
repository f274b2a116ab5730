#include "kobvis/distance_grid.hpp"

#include <numeric>
#include <queue>

#include "kobvis/quadrature.hpp"

namespace kobvis {

Real HalfPlaneSlice::segment_upper(const SlicePoint& a, const SlicePoint& b) const {
  const Real len = std::hypot(b.s - a.s, b.y - a.y);
  if (len == 0) return 0;
  const Real dy = b.y - a.y;
  // Integral of 1 / (2 y) along the straight segment, in closed form.
  if (std::fabs(dy) <= 1e-12L * std::max(a.y, b.y)) return len / (a.y + b.y);
  return len * std::log(b.y / a.y) / (2 * dy);
}

ModelSlice::ModelSlice(DomainOracle oracle, Real re1, Real im2, int gauss_points)
    : oracle_(std::move(oracle)), re1_(re1), im2_(im2), gauss_points_(gauss_points) {
  fast_column_ = re1_ == 0;
  fast_height_ = oracle_.origin_capture_height();
}

bool ModelSlice::valid(const SlicePoint& p) const {
  return SliceMetric::valid(p) && oracle_.contains(point(p));
}

SlicePoint ModelSlice::coordinates(const CPoint& z) const {
  const Real tol = 1e-12L;
  if (std::fabs(z.re1 - re1_) > tol || std::fabs(z.im2 - im2_) > tol)
    throw Error(ErrorCode::AttachmentFailure, "point is not in the grid slice");
  return {z.im1, z.re2};
}

Real ModelSlice::segment_upper(const SlicePoint& a, const SlicePoint& b) const {
  const Real ds = b.s - a.s, dy = b.y - a.y;
  if (ds == 0 && dy == 0) return 0;
  if (!valid(a) || !valid(b)) throw Error(ErrorCode::PointOutsideDomain, "segment endpoint outside the domain");
  auto y_at = [&](Real t) { return a.y + t * dy; };
  if (fast_column_ && std::max(a.y, b.y) <= fast_height_) {
    // Projection is the origin column: exact normal part plus the tangential
    // closed form.
    Real normal = 0;
    if (dy != 0) normal = std::fabs(dy) <= 1e-12L * std::max(a.y, b.y) ? std::fabs(dy) / (a.y + b.y)
                                                                        : std::fabs(dy) * std::log(b.y / a.y) / (2 * dy);
    Real tangential = 0;
    if (ds != 0) {
      const CVector dir{0, 1, 0, 0};
      tangential = std::fabs(ds) * integrate_fixed(
                                       [&](Real t) {
                                         const Real d = oracle_.directional_distance(point({a.s, y_at(t)}), dir);
                                         return std::isfinite(d) ? 1 / d : Real(0);
                                       },
                                       0, 1, gauss_points_);
    }
    return std::fabs(normal) + tangential;
  }
  const CVector v{0, ds, dy, 0};
  return integrate_fixed(
      [&](Real t) { return kappa_upper_decomposed(oracle_, point({a.s + t * ds, y_at(t)}), v, false); }, 0, 1,
      gauss_points_);
}

DistanceGrid::DistanceGrid(std::shared_ptr<const SliceMetric> slice, GridSpec spec)
    : slice_(std::move(slice)), spec_(spec) {
  if (!slice_ || !(spec_.h > 0) || !(spec_.y_min > 0) || !(spec_.y_max > spec_.y_min) ||
      !(spec_.s_max >= spec_.s_min) || spec_.window < 1)
    throw Error(ErrorCode::BadParameters, "invalid grid specification");
  if (spec_.attach_radius <= 0) spec_.attach_radius = spec_.window * spec_.h;
  rows_ = 1 + static_cast<int>(std::ceil(std::log(spec_.y_max / spec_.y_min) / (2 * spec_.h) - 1e-9L));
  cols_ = 1 + static_cast<int>(std::ceil((spec_.s_max - spec_.s_min) / spec_.h - 1e-9L));

  const int k = spec_.window;
  for (int di = -k; di <= k; ++di)
    for (int dj = -k; dj <= k; ++dj)
      if ((di != 0 || dj != 0) && std::gcd(std::abs(di), std::abs(dj)) == 1) offsets_.push_back({di, dj});

  weights_.assign(static_cast<std::size_t>(rows_) * offsets_.size(), kInfinity);
  for (int i = 0; i < rows_; ++i) {
    for (std::size_t o = 0; o < offsets_.size(); ++o) {
      const int ti = i + offsets_[o].di;
      if (ti < 0 || ti >= rows_) continue;
      // Weights are translation invariant in s; evaluate from column 0 or the
      // mirrored column so the segment stays inside the slice box.
      const int j0 = offsets_[o].dj >= 0 ? 0 : -offsets_[o].dj;
      if (j0 + offsets_[o].dj >= cols_ || j0 >= cols_) continue;
      const Real w = slice_->segment_upper(node(i, j0), node(ti, j0 + offsets_[o].dj));
      if (!(w > 0) || !std::isfinite(w)) throw Error(ErrorCode::DisconnectedGrid, "non-positive edge weight");
      weights_[static_cast<std::size_t>(i) * offsets_.size() + o] = w;
    }
  }
}

SlicePoint DistanceGrid::node(int i, int j) const {
  return {spec_.s_min + j * spec_.h, spec_.y_max * std::exp(-2 * spec_.h * i)};
}

bool DistanceGrid::near(const SlicePoint& a, const SlicePoint& b) const {
  const Real du = std::fabs(std::log(a.y / b.y)) / 2;
  return du <= spec_.attach_radius && std::fabs(a.s - b.s) <= spec_.attach_radius;
}

std::vector<DistanceGrid::Attachment> DistanceGrid::attach(const SlicePoint& p) const {
  if (!slice_->valid(p)) throw Error(ErrorCode::AttachmentFailure, "point outside the slice domain");
  const Real r = std::log(spec_.y_max / p.y) / (2 * spec_.h);
  const Real c = (p.s - spec_.s_min) / spec_.h;
  if (r < -1 || r > rows_ || c < -1 || c > cols_)
    throw Error(ErrorCode::AttachmentFailure, "point is more than one cell outside the grid");
  const Real a = spec_.attach_radius / spec_.h;
  const int j_lo = std::max(0, static_cast<int>(std::ceil(c - a - 1e-9L)));
  const int j_hi = std::min(cols_ - 1, static_cast<int>(std::floor(c + a + 1e-9L)));
  const int i_max = std::min(rows_ - 1, static_cast<int>(std::floor(r + a + 1e-9L)));
  if (j_lo > j_hi || i_max < 0) throw Error(ErrorCode::AttachmentFailure, "no grid node within the attachment radius");
  const int width = j_hi - j_lo + 1;
  std::vector<Real> best(static_cast<std::size_t>(i_max + 1) * width, kInfinity);

  // Climb the point's own vertical line through every row above it, then
  // leave it by a straight segment to any node within the radius.
  auto relax_from = [&](const SlicePoint& q, Real base, Real rq) {
    const int i_lo = std::max(0, static_cast<int>(std::ceil(rq - a - 1e-9L)));
    const int i_hi = std::min(i_max, static_cast<int>(std::floor(rq + a + 1e-9L)));
    for (int i = i_lo; i <= i_hi; ++i)
      for (int j = j_lo; j <= j_hi; ++j) {
        Real& slot = best[static_cast<std::size_t>(i) * width + (j - j_lo)];
        slot = std::min(slot, base + slice_->segment_upper(q, node(i, j)));
      }
  };
  relax_from(p, 0, r);
  for (int i = std::min(rows_ - 1, static_cast<int>(std::floor(r))); i >= 0; --i) {
    const SlicePoint q{p.s, node(i, 0).y};
    if (q.y <= p.y) continue;
    relax_from(q, slice_->segment_upper(p, q), i);
  }

  std::vector<Attachment> out;
  for (int i = 0; i <= i_max; ++i)
    for (int j = j_lo; j <= j_hi; ++j) {
      const Real w = best[static_cast<std::size_t>(i) * width + (j - j_lo)];
      if (std::isfinite(w)) out.push_back({i * cols_ + j, w});
    }
  if (out.empty()) throw Error(ErrorCode::AttachmentFailure, "no grid node within the attachment radius");
  return out;
}

std::vector<Real> DistanceGrid::search(const std::vector<Attachment>& sources, const std::vector<char>& wanted,
                                       std::size_t wanted_count) const {
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  std::vector<Real> dist(n, kInfinity);
  std::vector<char> done(n, 0);
  using Item = std::pair<Real, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (const auto& s : sources) {
    if (s.weight < dist[s.node]) {
      dist[s.node] = s.weight;
      queue.push({s.weight, s.node});
    }
  }
  std::size_t settled_wanted = 0;
  while (!queue.empty() && settled_wanted < wanted_count) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (wanted[u]) ++settled_wanted;
    const int i = u / cols_, j = u % cols_;
    for (std::size_t o = 0; o < offsets_.size(); ++o) {
      const Real w = weight(i, static_cast<int>(o));
      if (!std::isfinite(w)) continue;
      const int tj = j + offsets_[o].dj;
      if (tj < 0 || tj >= cols_) continue;
      const int v = (i + offsets_[o].di) * cols_ + tj;
      if (d + w < dist[v]) {
        dist[v] = d + w;
        queue.push({dist[v], v});
      }
    }
  }
  return dist;
}

std::vector<Real> DistanceGrid::distances(const SlicePoint& source, const std::vector<SlicePoint>& targets) const {
  const auto src = attach(source);
  std::vector<std::vector<Attachment>> tgt;
  tgt.reserve(targets.size());
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  std::vector<char> wanted(n, 0);
  std::size_t count = 0;
  for (const auto& t : targets) {
    tgt.push_back(attach(t));
    for (const auto& a : tgt.back())
      if (!wanted[a.node]) wanted[a.node] = 1, ++count;
  }
  const auto dist = search(src, wanted, count);
  std::vector<Real> out(targets.size(), kInfinity);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const SlicePoint& t = targets[k];
    if (t.s == source.s && t.y == source.y) {
      out[k] = 0;
      continue;
    }
    Real best = (near(source, t) || t.s == source.s) ? slice_->segment_upper(source, t) : kInfinity;
    for (const auto& a : tgt[k]) best = std::min(best, dist[a.node] + a.weight);
    if (!std::isfinite(best)) throw Error(ErrorCode::DisconnectedGrid, "target unreachable");
    out[k] = best;
  }
  return out;
}

DistanceGrid::Field DistanceGrid::field(const SlicePoint& source) const {
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  std::vector<char> wanted(n, 1);
  return {source, search(attach(source), wanted, n)};
}

std::vector<Real> DistanceGrid::distances(const std::vector<const Field*>& fields, const SlicePoint& target) const {
  const auto att = attach(target);
  std::vector<Real> out;
  out.reserve(fields.size());
  for (const Field* f : fields) {
    const SlicePoint& s = f->source;
    if (s.s == target.s && s.y == target.y) {
      out.push_back(0);
      continue;
    }
    Real best = (near(s, target) || s.s == target.s) ? slice_->segment_upper(s, target) : kInfinity;
    for (const auto& a : att) best = std::min(best, f->dist[a.node] + a.weight);
    if (!std::isfinite(best)) throw Error(ErrorCode::DisconnectedGrid, "target unreachable");
    out.push_back(best);
  }
  return out;
}

Real DistanceGrid::distance(const SlicePoint& a, const SlicePoint& b) const { return distances(a, {b}).front(); }

Real DistanceGrid::node_distance(int i1, int j1, int i2, int j2) const {
  if (i1 < 0 || i1 >= rows_ || i2 < 0 || i2 >= rows_ || j1 < 0 || j1 >= cols_ || j2 < 0 || j2 >= cols_)
    throw Error(ErrorCode::OutOfRange, "node index outside the grid");
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  std::vector<char> wanted(n, 0);
  const int target = i2 * cols_ + j2;
  wanted[target] = 1;
  const auto dist = search({{i1 * cols_ + j1, 0}}, wanted, 1);
  if (!std::isfinite(dist[target])) throw Error(ErrorCode::DisconnectedGrid, "node unreachable");
  return dist[target];
}

SlicePoint DistanceGrid::map(const CPoint& z) const {
  const auto* model = dynamic_cast<const ModelSlice*>(slice_.get());
  if (!model) return {z.im1, z.re2};
  return model->coordinates(z);
}

Real DistanceGrid::distance(const CPoint& a, const CPoint& b) const { return distance(map(a), map(b)); }

std::vector<Real> DistanceGrid::distances(const CPoint& source, const std::vector<CPoint>& targets) const {
  std::vector<SlicePoint> t;
  t.reserve(targets.size());
  for (const auto& p : targets) t.push_back(map(p));
  return distances(map(source), t);
}

BoundInterval gromov_product_bounds(const DomainOracle& oracle, const CPoint& z, const CPoint& w, const CPoint& o,
                                    const DistanceGrid& grid) {
  auto enclose = [&](const CPoint& a, const CPoint& b) {
    return BoundInterval{kdist_lower(oracle, a, b), grid.distance(a, b)};
  };
  return gromov_from_distances(enclose(z, o), enclose(w, o), enclose(z, w));
}

}  // namespace kobvis
