#pragma once

// Numerical substrate: vectors, sphere nets, minimal enclosing balls,
// orthogonal Procrustes fitting and planar winding numbers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ballbody/error.hpp"

namespace ballbody {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;

inline Vector make_vector(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return v;
}

inline void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
}

/// Normalizes directions that are within 1e-6 of unit length; anything else
/// is rejected.
inline Vector unit_direction(const Vector& u) {
  const double norm = u.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
    throw Error(ErrorKind::InvalidArgument, "direction is not a unit vector (norm " + std::to_string(norm) + ")");
  }
  return u / norm;
}

// ---------------------------------------------------------------------------
// Sphere nets
// ---------------------------------------------------------------------------

/// Finite set of unit directions together with a certified covering radius
/// (chordal): every unit vector lies within `mesh` of some listed direction.
struct SphereNet {
  int dim = 0;
  std::vector<Vector> directions;
  double mesh = 0.0;

  std::size_t size() const { return directions.size(); }

  /// cos of the angular covering radius; multiplicative slack for maxima of
  /// support functions sampled on the net. Zero when the net is too coarse.
  double cos_covering_angle() const { return std::max(0.0, 1.0 - 0.5 * mesh * mesh); }

  /// Typical angular spacing, used as initial step for local refinement.
  double angular_step() const { return 2.0 * std::asin(std::min(1.0, 0.5 * mesh)); }
};

namespace detail {

// Directions through the centers of a k^(n-1) grid on every facet of the cube
// [-1,1]^n. Returns the covering radius alongside, computed per cell as the
// largest chord from the cell's center direction to its corner directions
// (a spherical cell is the geodesic hull of its corners).
inline std::pair<std::vector<Vector>, double> cube_net(int n, int k) {
  const int m = n - 1;
  long long cells = 1;
  for (int i = 0; i < m; ++i) cells *= k;

  auto face_point = [&](int axis, double sign, const std::vector<double>& local) {
    Vector p(n);
    int j = 0;
    for (int d = 0; d < n; ++d) p[d] = (d == axis) ? sign : local[static_cast<std::size_t>(j++)];
    return p;
  };

  std::vector<Vector> dirs;
  dirs.reserve(static_cast<std::size_t>(2 * n * cells));
  double covering = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::vector<double> local(static_cast<std::size_t>(m));
  for (int axis = 0; axis < n; ++axis) {
    for (double sign : {1.0, -1.0}) {
      for (long long c = 0; c < cells; ++c) {
        long long rem = c;
        for (int j = 0; j < m; ++j) {
          idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % k);
          rem /= k;
          local[static_cast<std::size_t>(j)] = -1.0 + (2.0 * idx[static_cast<std::size_t>(j)] + 1.0) / k;
        }
        Vector center = face_point(axis, sign, local).normalized();
        // All facets are congruent; measuring corners on the first one suffices.
        if (axis == 0 && sign > 0) {
          std::vector<double> corner(static_cast<std::size_t>(m));
          for (int mask = 0; mask < (1 << m); ++mask) {
            for (int j = 0; j < m; ++j) {
              const double lo = -1.0 + 2.0 * idx[static_cast<std::size_t>(j)] / k;
              corner[static_cast<std::size_t>(j)] = (mask >> j & 1) ? lo + 2.0 / k : lo;
            }
            covering = std::max(covering, (face_point(0, 1.0, corner).normalized() - center).norm());
          }
        }
        dirs.push_back(std::move(center));
      }
    }
  }
  return {std::move(dirs), covering};
}

}  // namespace detail

/// Builds a deterministic net on S^{n-1} with covering radius <= mesh.
/// n == 2 gives m equally spaced directions with 2 sin(pi/m) <= mesh; higher
/// dimensions use the radially projected subdivided cube.
inline SphereNet make_sphere_net(int n, double mesh) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "sphere net needs n >= 2");
  if (!(mesh > 0.0) || !std::isfinite(mesh)) throw Error(ErrorKind::InvalidArgument, "mesh must be positive");
  SphereNet net;
  net.dim = n;
  if (n == 2) {
    int m = 2;
    while (2.0 * std::sin(kPi / m) > mesh) ++m;
    net.directions.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * kPi * j / m;
      net.directions.push_back(make_vector({std::cos(a), std::sin(a)}));
    }
    net.mesh = 2.0 * std::sin(kPi / (2.0 * m));
    return net;
  }
  for (int k = 1;; ++k) {
    auto [dirs, covering] = detail::cube_net(n, k);
    if (covering <= mesh) {
      net.directions = std::move(dirs);
      net.mesh = covering;
      return net;
    }
    if (k > 4096) throw Error(ErrorKind::InvalidArgument, "mesh too fine for dimension " + std::to_string(n));
  }
}

// ---------------------------------------------------------------------------
// Balls and minimal enclosing ball
// ---------------------------------------------------------------------------

struct Ball {
  Vector center;
  double radius = 0.0;

  bool contains(const Vector& p, double slack = 0.0) const { return (p - center).norm() <= radius + slack; }
};

namespace detail {

// Move-to-front Welzl recursion; the boundary set never exceeds n+1 points, so
// recursion depth is bounded by the dimension.
class MinimalBallBuilder {
 public:
  explicit MinimalBallBuilder(std::span<const Vector> points)
      : points_(points), dim_(static_cast<int>(points.front().size())) {
    for (std::size_t i = 0; i < points_.size(); ++i) order_.push_back(i);
    center_ = Vector::Zero(dim_);
  }

  Ball run() {
    boundary_.clear();
    radius2_ = -1.0;
    extend(order_.end());
    return Ball{center_, std::sqrt(std::max(0.0, radius2_))};
  }

 private:
  bool outside(const Vector& p) const {
    if (radius2_ < 0) return true;
    return (p - center_).squaredNorm() > radius2_ * (1.0 + 1e-13) + 1e-28;
  }

  // Smallest ball with every boundary point on its surface: the circumsphere
  // inside the affine hull of the boundary.
  void fit_boundary() {
    const Vector& p0 = points_[boundary_.front()];
    const auto k = static_cast<Eigen::Index>(boundary_.size()) - 1;
    if (k == 0) {
      center_ = p0;
      radius2_ = 0.0;
      return;
    }
    Matrix span(dim_, k);
    for (Eigen::Index j = 0; j < k; ++j) span.col(j) = points_[boundary_[static_cast<std::size_t>(j + 1)]] - p0;
    const Matrix gram = span.transpose() * span;
    Vector rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) rhs[j] = 0.5 * span.col(j).squaredNorm();
    const Vector alpha = gram.completeOrthogonalDecomposition().solve(rhs);
    center_ = p0 + span * alpha;
    radius2_ = 0.0;
    for (std::size_t b : boundary_) radius2_ = std::max(radius2_, (points_[b] - center_).squaredNorm());
  }

  void extend(std::list<std::size_t>::iterator end) {
    if (static_cast<int>(boundary_.size()) == dim_ + 1) return;
    for (auto it = order_.begin(); it != end;) {
      auto current = it++;
      if (outside(points_[*current])) {
        boundary_.push_back(*current);
        fit_boundary();
        extend(current);
        boundary_.pop_back();
        order_.splice(order_.begin(), order_, current);
      }
    }
  }

  std::span<const Vector> points_;
  int dim_;
  std::list<std::size_t> order_;
  std::vector<std::size_t> boundary_;
  Vector center_;
  double radius2_ = -1.0;
};

}  // namespace detail

/// Smallest Euclidean ball containing every point (exact combinatorial
/// algorithm up to floating point).
inline Ball minimal_enclosing_ball(std::span<const Vector> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "minimal_enclosing_ball of an empty set");
  const auto n = points.front().size();
  for (const auto& p : points) {
    if (p.size() != n) throw Error(ErrorKind::DimensionMismatch, "points of different dimensions");
    require_finite(p, "point");
  }
  return detail::MinimalBallBuilder(points).run();
}

// ---------------------------------------------------------------------------
// Rigid motions and Procrustes
// ---------------------------------------------------------------------------

/// x -> rotation * x + translation with an orthogonal rotation; reflections
/// are allowed.
struct RigidMotion {
  Matrix rotation;
  Vector translation;

  static RigidMotion identity(int n) { return {Matrix::Identity(n, n), Vector::Zero(n)}; }

  int dim() const { return static_cast<int>(translation.size()); }

  Vector apply(const Vector& x) const { return rotation * x + translation; }

  RigidMotion inverse() const {
    Matrix rt = rotation.transpose();
    Vector t = -(rt * translation);
    return {std::move(rt), std::move(t)};
  }

  /// (this o other)(x) = this(other(x)).
  RigidMotion compose(const RigidMotion& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  double orthogonality_defect() const {
    return (rotation.transpose() * rotation - Matrix::Identity(rotation.rows(), rotation.cols())).cwiseAbs().maxCoeff();
  }

  void validate(double tolerance = 1e-9) const {
    if (rotation.rows() != rotation.cols() || rotation.rows() != translation.size()) {
      throw Error(ErrorKind::DimensionMismatch, "rotation and translation sizes disagree");
    }
    if (!rotation.allFinite() || !translation.allFinite()) {
      throw Error(ErrorKind::InvalidArgument, "rigid motion has non-finite entries");
    }
    if (orthogonality_defect() > tolerance) {
      throw Error(ErrorKind::InvalidArgument, "rotation is not orthogonal (defect " +
                                                  std::to_string(orthogonality_defect()) + ")");
    }
  }
};

struct ProcrustesFit {
  RigidMotion motion;
  double residual = 0.0;  // root-mean-square error of the fitted map
};

/// Least-squares orthogonal-plus-translation fit mapping sources onto targets.
/// The orthogonal factor is unconstrained in sign of determinant.
inline ProcrustesFit procrustes_fit(std::span<const Vector> sources, std::span<const Vector> targets) {
  if (sources.size() != targets.size()) {
    throw Error(ErrorKind::InvalidArgument, "procrustes_fit: source and target counts differ");
  }
  if (sources.empty()) throw Error(ErrorKind::Degenerate, "procrustes_fit: no correspondences");
  const auto n = sources.front().size();
  const auto count = static_cast<Eigen::Index>(sources.size());
  if (count < n + 1) {
    throw Error(ErrorKind::Degenerate, "procrustes_fit: need at least n+1 correspondences, got " + std::to_string(count));
  }
  Matrix src(n, count), dst(n, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto& s = sources[static_cast<std::size_t>(i)];
    const auto& t = targets[static_cast<std::size_t>(i)];
    if (s.size() != n || t.size() != n) throw Error(ErrorKind::DimensionMismatch, "procrustes_fit: mixed dimensions");
    src.col(i) = s;
    dst.col(i) = t;
  }
  const Vector src_mean = src.rowwise().mean();
  const Vector dst_mean = dst.rowwise().mean();
  src.colwise() -= src_mean;
  dst.colwise() -= dst_mean;

  Eigen::JacobiSVD<Matrix> src_svd(src);
  const double smallest = src_svd.singularValues()(n - 1);
  if (smallest <= 1e-9) {
    throw Error(ErrorKind::Degenerate, "procrustes_fit: sources are affinely dependent (smallest singular value " +
                                           std::to_string(smallest) + ")");
  }
  Eigen::JacobiSVD<Matrix> svd(dst * src.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix rotation = svd.matrixU() * svd.matrixV().transpose();
  Vector translation = dst_mean - rotation * src_mean;
  const double sq = (rotation * src - dst).colwise().squaredNorm().sum();
  return {RigidMotion{std::move(rotation), std::move(translation)}, std::sqrt(sq / static_cast<double>(count))};
}

// ---------------------------------------------------------------------------
// Planar winding numbers
// ---------------------------------------------------------------------------

struct CurveSample {
  double angle = 0.0;
  Eigen::Vector2d value;
};

/// Winding number of a closed planar curve about the origin. Samples must be
/// at strictly increasing angles in [0, 2pi) and consecutive normalized
/// values (including last -> first) must turn by less than pi/2.
inline int winding_number(std::span<const CurveSample> samples) {
  if (samples.size() < 3) throw Error(ErrorKind::InsufficientResolution, "winding_number needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = samples[i].angle;
    if (!(a >= 0.0 && a < 2.0 * kPi)) throw Error(ErrorKind::InvalidArgument, "sample angle outside [0, 2pi)");
    if (i > 0 && !(a > samples[i - 1].angle)) throw Error(ErrorKind::InvalidArgument, "sample angles not increasing");
    if (samples[i].value.norm() < 1e-12) {
      throw Error(ErrorKind::CurveHitsOrigin, "curve value at angle " + std::to_string(a) + " is at the origin");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Eigen::Vector2d& p = samples[i].value;
    const Eigen::Vector2d& q = samples[(i + 1) % samples.size()].value;
    const double turn = std::atan2(p.x() * q.y() - p.y() * q.x(), p.dot(q));
    if (std::abs(turn) >= 0.5 * kPi) {
      throw Error(ErrorKind::InsufficientResolution,
                  "angular step " + std::to_string(turn) + " at angle " + std::to_string(samples[i].angle));
    }
    total += turn;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

struct AdaptiveWinding {
  int winding = 0;
  double min_norm = 0.0;  // smallest |value| among the samples
  std::vector<CurveSample> samples;
};

/// Samples `curve` on [0, 2pi), bisecting every step that turns by pi/4 or
/// more until the angular-step contract of winding_number holds with margin.
inline AdaptiveWinding adaptive_winding(const std::function<Eigen::Vector2d(double)>& curve, int initial = 64,
                                        std::size_t budget = 1u << 18) {
  std::vector<CurveSample> samples;
  samples.reserve(static_cast<std::size_t>(initial));
  for (int i = 0; i < initial; ++i) {
    const double a = 2.0 * kPi * i / initial;
    samples.push_back({a, curve(a)});
  }
  auto turn = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    return std::abs(std::atan2(p.x() * q.y() - p.y() * q.x(), p.dot(q)));
  };
  for (;;) {
    std::vector<CurveSample> refined;
    refined.reserve(samples.size() * 2);
    bool changed = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      refined.push_back(samples[i]);
      const auto& p = samples[i];
      const bool last = i + 1 == samples.size();
      const auto& q = samples[last ? 0 : i + 1];
      if (p.value.norm() < 1e-12 || q.value.norm() < 1e-12) {
        throw Error(ErrorKind::CurveHitsOrigin, "curve passes through the origin near angle " + std::to_string(p.angle));
      }
      if (turn(p.value, q.value) >= 0.25 * kPi) {
        const double end = last ? 2.0 * kPi : q.angle;
        const double mid = 0.5 * (p.angle + end);
        if (!(mid > p.angle && mid < end)) {
          throw Error(ErrorKind::ResolutionExhausted, "angular resolution exhausted near " + std::to_string(p.angle));
        }
        refined.push_back({mid, curve(mid)});
        changed = true;
      }
    }
    samples = std::move(refined);
    if (!changed) break;
    if (samples.size() > budget) {
      throw Error(ErrorKind::ResolutionExhausted, "winding refinement exceeded " + std::to_string(budget) + " samples");
    }
  }
  AdaptiveWinding out;
  out.winding = winding_number(samples);
  out.min_norm = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) out.min_norm = std::min(out.min_norm, s.value.norm());
  out.samples = std::move(samples);
  return out;
}

// ---------------------------------------------------------------------------
// Local maximization on the sphere
// ---------------------------------------------------------------------------

namespace detail {

// Orthonormal basis of the tangent space at unit u.
inline std::vector<Vector> tangent_basis(const Vector& u) {
  const auto n = u.size();
  std::vector<Vector> basis;
  for (Eigen::Index i = 0; i < n && static_cast<Eigen::Index>(basis.size()) < n - 1; ++i) {
    Vector v = Vector::Unit(n, i);
    v -= v.dot(u) * u;
    for (const auto& b : basis) v -= v.dot(b) * b;
    if (v.norm() > 1e-6) basis.push_back(v.normalized());
  }
  return basis;
}

}  // namespace detail

/// Compass search on S^{n-1} starting at `start`; returns the best direction
/// and value found. Every evaluated direction is a genuine sample, so the
/// result never exceeds the true maximum.
inline std::pair<Vector, double> refine_max_on_sphere(const std::function<double(const Vector&)>& fn, Vector start,
                                                      double start_value, double step, int max_evals = 400) {
  Vector best = std::move(start);
  double best_value = start_value;
  int evals = 0;
  auto basis = detail::tangent_basis(best);
  while (step > 1e-11 && evals < max_evals) {
    bool improved = false;
    for (const auto& t : basis) {
      for (double s : {1.0, -1.0}) {
        Vector cand = (best + s * step * t).normalized();
        const double v = fn(cand);
        ++evals;
        if (v > best_value) {
          best_value = v;
          best = std::move(cand);
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
    if (improved) {
      basis = detail::tangent_basis(best);
    } else {
      step *= 0.5;
    }
  }
  return {std::move(best), best_value};
}

}  // namespace ballbody
