#pragma once

// Brute-force planar rasterization of ball-body expressions.
//
// Every raster lives on the global lattice {cell * (i, j)}; membership is
// decided per cell center straight from the set definitions (intersection of
// disks, K^c as the set within distance 1 of all of K, Minkowski sums of
// convex hulls, images under motions). No support function is consulted, so
// these results are an independent check on the kernel.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ballbody/body.hpp"
#include "ballbody/error.hpp"
#include "ballbody/geometry.hpp"

namespace ballbody {

struct Box {
  Point2 lo;
  Point2 hi;
};

class RasterBody {
 public:
  RasterBody() = default;
  RasterBody(double cell, long i0, long j0, long nx, long ny)
      : cell_(cell), i0_(i0), j0_(j0), nx_(nx), ny_(ny), bits_(static_cast<std::size_t>(nx * ny), 0) {}

  double cell() const { return cell_; }
  long i0() const { return i0_; }
  long j0() const { return j0_; }
  long nx() const { return nx_; }
  long ny() const { return ny_; }

  bool same_grid(const RasterBody& other) const {
    return cell_ == other.cell_ && i0_ == other.i0_ && j0_ == other.j0_ && nx_ == other.nx_ && ny_ == other.ny_;
  }

  bool in_range(long i, long j) const { return i >= i0_ && j >= j0_ && i < i0_ + nx_ && j < j0_ + ny_; }

  bool at(long i, long j) const {
    return in_range(i, j) && bits_[static_cast<std::size_t>((j - j0_) * nx_ + (i - i0_))] != 0;
  }

  void set(long i, long j) { bits_[static_cast<std::size_t>((j - j0_) * nx_ + (i - i0_))] = 1; }

  Point2 center(long i, long j) const { return {cell_ * static_cast<double>(i), cell_ * static_cast<double>(j)}; }

  /// Membership of an arbitrary point: the cell whose center is nearest.
  bool contains(const Point2& p) const {
    return at(std::lround(p.x() / cell_), std::lround(p.y() / cell_));
  }

  std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }
  double area() const { return static_cast<double>(count()) * cell_ * cell_; }

  std::vector<Point2> occupied() const {
    std::vector<Point2> out;
    for (long j = j0_; j < j0_ + ny_; ++j)
      for (long i = i0_; i < i0_ + nx_; ++i)
        if (at(i, j)) out.push_back(center(i, j));
    return out;
  }

  /// Occupied cells with at least one unoccupied 4-neighbour.
  std::vector<Point2> boundary() const {
    std::vector<Point2> out;
    for (long j = j0_; j < j0_ + ny_; ++j)
      for (long i = i0_; i < i0_ + nx_; ++i)
        if (at(i, j) && (!at(i + 1, j) || !at(i - 1, j) || !at(i, j + 1) || !at(i, j - 1))) out.push_back(center(i, j));
    return out;
  }

 private:
  double cell_ = 0.0;
  long i0_ = 0, j0_ = 0, nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> bits_;
};

namespace raster_detail {

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Inside test for a counter-clockwise convex polygon, with a small slack.
// Degenerate polygons (points, segments) count points within `slack`.
inline bool in_polygon(const std::vector<Point2>& poly, const Point2& p, double slack) {
  if (poly.size() == 1) return (p - poly[0]).norm() <= slack;
  if (poly.size() == 2) {
    const Point2 d = poly[1] - poly[0];
    const double t = std::clamp((p - poly[0]).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (poly[0] + t * d)).norm() <= slack;
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    if (cross(a, b, p) < -slack * (b - a).norm()) return false;
  }
  return true;
}

inline Box polygon_box(const std::vector<Point2>& poly) {
  Box box{poly.front(), poly.front()};
  for (const auto& p : poly) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

// Empty raster covering the box on the global lattice.
inline RasterBody blank(double cell, const Box& box) {
  const long i0 = static_cast<long>(std::floor(box.lo.x() / cell)) - 1;
  const long j0 = static_cast<long>(std::floor(box.lo.y() / cell)) - 1;
  const long i1 = static_cast<long>(std::ceil(box.hi.x() / cell)) + 1;
  const long j1 = static_cast<long>(std::ceil(box.hi.y() / cell)) + 1;
  return RasterBody(cell, i0, j0, std::max(1L, i1 - i0 + 1), std::max(1L, j1 - j0 + 1));
}

// Marks every cell whose center satisfies `inside`; when none does, marks the
// single cell minimizing `excess` provided that excess is within `slack`.
template <typename Inside, typename Excess>
RasterBody fill(double cell, const Box& box, Inside inside, Excess excess, double slack) {
  RasterBody out = blank(cell, box);
  bool any = false;
  for (long j = out.j0(); j < out.j0() + out.ny(); ++j) {
    for (long i = out.i0(); i < out.i0() + out.nx(); ++i) {
      if (inside(out.center(i, j))) {
        out.set(i, j);
        any = true;
      }
    }
  }
  if (any) return out;
  double best = std::numeric_limits<double>::infinity();
  long bi = 0, bj = 0;
  for (long j = out.j0(); j < out.j0() + out.ny(); ++j) {
    for (long i = out.i0(); i < out.i0() + out.nx(); ++i) {
      const double e = excess(out.center(i, j));
      if (e < best) {
        best = e;
        bi = i;
        bj = j;
      }
    }
  }
  if (!(best <= slack)) throw Error(ErrorKind::EmptyRaster, "no cell inside the body; refine the cell size");
  out.set(bi, bj);
  return out;
}

inline std::vector<Point2> hull_of(const RasterBody& r) { return convex_hull(r.boundary()); }

inline RasterBody polygon_raster(const std::vector<Point2>& poly, double cell) {
  const double eps = 1e-9 * cell;
  Point2 centroid = Point2::Zero();
  for (const auto& p : poly) centroid += p;
  centroid /= static_cast<double>(poly.size());
  return fill(
      cell, polygon_box(poly), [&](const Point2& z) { return in_polygon(poly, z, eps); },
      [&](const Point2& z) { return (z - centroid).norm(); }, cell);
}

// z is in K^c iff |z - y| <= 1 for every y in K; the farthest y is a hull
// vertex of the occupied cells.
inline RasterBody cdual_raster(const RasterBody& inner) {
  const auto hull = hull_of(inner);
  if (hull.empty()) throw Error(ErrorKind::EmptyRaster, "raster has no occupied cells");
  Box box{Point2::Constant(-std::numeric_limits<double>::infinity()),
          Point2::Constant(std::numeric_limits<double>::infinity())};
  for (const auto& v : hull) {
    box.lo = box.lo.cwiseMax(v - Point2::Ones());
    box.hi = box.hi.cwiseMin(v + Point2::Ones());
  }
  box.hi = box.hi.cwiseMax(box.lo);
  auto reach = [&](const Point2& z) {
    double worst = 0.0;
    for (const auto& v : hull) worst = std::max(worst, (z - v).squaredNorm());
    return std::sqrt(worst) - 1.0;
  };
  const double cell = inner.cell();
  return fill(
      cell, box, [&](const Point2& z) { return reach(z) <= 1e-12; }, reach, cell * std::sqrt(2.0));
}

inline RasterBody rasterize_node(const BallBodyExpr& body, double cell) {
  switch (body.kind()) {
    case NodeKind::Generators:
    case NodeKind::Balls: {
      const auto& centers = body.centers();
      const auto& radii = body.radii();
      Box box{Point2::Constant(-std::numeric_limits<double>::infinity()),
              Point2::Constant(std::numeric_limits<double>::infinity())};
      for (std::size_t k = 0; k < centers.size(); ++k) {
        const Point2 c(centers[k][0], centers[k][1]);
        box.lo = box.lo.cwiseMax(c - Point2::Constant(radii[k]));
        box.hi = box.hi.cwiseMin(c + Point2::Constant(radii[k]));
      }
      box.hi = box.hi.cwiseMax(box.lo);
      auto excess = [&](const Point2& z) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < centers.size(); ++k) {
          worst = std::max(worst, (z - Point2(centers[k][0], centers[k][1])).norm() - radii[k]);
        }
        return worst;
      };
      return fill(
          cell, box, [&](const Point2& z) { return excess(z) <= 0.0; }, excess, cell * std::sqrt(0.5));
    }
    case NodeKind::CDual:
      return cdual_raster(rasterize_node(body.child(), cell));
    case NodeKind::Combine: {
      const double l = body.lambda();
      const auto ha = hull_of(rasterize_node(body.child(), cell));
      const auto hb = hull_of(rasterize_node(body.second(), cell));
      std::vector<Point2> sums;
      sums.reserve(ha.size() * hb.size());
      for (const auto& a : ha)
        for (const auto& b : hb) sums.push_back((1.0 - l) * a + l * b);
      return polygon_raster(convex_hull(std::move(sums)), cell);
    }
    case NodeKind::Motion: {
      const auto& g = body.rigid_motion();
      const Eigen::Matrix2d q = g.rotation.topLeftCorner<2, 2>();
      const Point2 t(g.translation[0], g.translation[1]);
      std::vector<Point2> image;
      for (const auto& v : hull_of(rasterize_node(body.child(), cell))) image.push_back(q * v + t);
      return polygon_raster(convex_hull(std::move(image)), cell);
    }
    case NodeKind::Dilate: {
      std::vector<Point2> image;
      for (const auto& v : hull_of(rasterize_node(body.child(), cell))) image.push_back(body.scale() * v);
      return polygon_raster(convex_hull(std::move(image)), cell);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown node kind");
}

}  // namespace raster_detail

/// Rasterizes a planar body on the lattice of spacing `cell`.
inline RasterBody rasterize(const BallBodyExpr& body, double cell) {
  if (body.dim() != 2) throw Error(ErrorKind::InvalidArgument, "raster oracle is planar only");
  if (!(cell > 0.0) || !std::isfinite(cell)) throw Error(ErrorKind::InvalidArgument, "cell must be positive");
  return raster_detail::rasterize_node(body, cell);
}

/// Rasterizes onto the fixed extent `bounds`, so rasters of different bodies
/// share one grid. The bounds must contain the body.
inline RasterBody rasterize(const BallBodyExpr& body, double cell, const Box& bounds) {
  const RasterBody own = rasterize(body, cell);
  RasterBody out = raster_detail::blank(cell, bounds);
  for (long j = own.j0(); j < own.j0() + own.ny(); ++j) {
    for (long i = own.i0(); i < own.i0() + own.nx(); ++i) {
      if (!own.at(i, j)) continue;
      if (!out.in_range(i, j)) throw Error(ErrorKind::InvalidArgument, "raster bounds do not contain the body");
      out.set(i, j);
    }
  }
  return out;
}

/// c-dual computed directly from an occupancy grid.
inline RasterBody raster_cdual(const RasterBody& r) { return raster_detail::cdual_raster(r); }

/// Box containing the body with a margin, from its tree norm bound.
inline Box bounding_box(const SupportEval& body, double margin = 0.05) {
  const double r = body.norm_bound() + margin;
  return {Point2::Constant(-r), Point2::Constant(r)};
}

/// Hausdorff distance between the occupied cell-center clouds.
inline double raster_hausdorff(const RasterBody& a, const RasterBody& b) {
  if (a.cell() != b.cell()) throw Error(ErrorKind::GridMismatch, "rasters use different cell sizes");
  const auto edge_a = a.boundary();
  const auto edge_b = b.boundary();
  auto directed = [](const std::vector<Point2>& from, const RasterBody& to, const std::vector<Point2>& to_edge) {
    double worst = 0.0;
    for (const auto& p : from) {
      if (to.contains(p)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to_edge) best = std::min(best, (p - q).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(edge_a, b, edge_b), directed(edge_b, a, edge_a));
}

/// Minimal enclosing disk of the occupied cells.
inline Ball raster_circumball(const RasterBody& r) {
  std::vector<Vector> pts;
  for (const auto& p : raster_detail::hull_of(r)) pts.push_back(Vector(p));
  if (pts.empty()) throw Error(ErrorKind::EmptyRaster, "raster has no occupied cells");
  return minimal_enclosing_ball(pts);
}

}  // namespace ballbody
