#pragma once

// Ball bodies as immutable expression trees with a support-function oracle.
//
// A leaf is an intersection of Euclidean balls (unit balls for genuine
// generator bodies); interior nodes apply c-duality, Minkowski averaging or a
// rigid motion. Every node evaluates h_K(u) exactly up to floating point and
// also returns a point of K attaining it.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballbody/error.hpp"
#include "ballbody/geometry.hpp"

namespace ballbody {

enum class NodeKind {
  Generators,  // intersection of unit balls about the centers
  Balls,       // intersection of balls with individual radii (reconstructions)
  CDual,
  Combine,
  Motion,
  Dilate,  // s*K; leaves S_n, only produced by test maps
};

inline constexpr int kDefaultMaxDepth = 16;

/// Slack on the minimal-enclosing-ball radius of generator centers within
/// which a set counts as boundary-tight (its body is a single point).
inline constexpr double kBoundaryTolerance = 1e-9;

class BallBodyExpr {
 public:
  struct Node {
    NodeKind kind = NodeKind::Generators;
    int dim = 0;
    int depth = 1;
    bool in_sn = true;
    bool boundary = false;
    std::vector<Vector> centers;
    std::vector<double> radii;
    Vector tight_point;  // MEB center of a boundary-tight generator set
    double lambda = 0.0;
    double scale = 1.0;
    RigidMotion motion;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };

  static BallBodyExpr generators(std::vector<Vector> centers) {
    if (centers.empty()) throw Error(ErrorKind::InvalidArgument, "generator body needs at least one center");
    const auto dim = centers.front().size();
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "zero-dimensional center");
    for (const auto& c : centers) {
      if (c.size() != dim) throw Error(ErrorKind::DimensionMismatch, "generator centers of different dimensions");
      require_finite(c, "generator center");
    }
    const Ball meb = minimal_enclosing_ball(centers);
    if (meb.radius > 1.0 + kBoundaryTolerance) {
      throw Error(ErrorKind::EmptyBody, "generator centers do not fit in a unit ball (enclosing radius " +
                                            std::to_string(meb.radius) + "); the intersection is empty");
    }
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Generators;
    node->dim = static_cast<int>(dim);
    node->boundary = meb.radius >= 1.0 - kBoundaryTolerance;
    node->tight_point = meb.center;
    node->centers = std::move(centers);
    node->radii.assign(node->centers.size(), 1.0);
    return BallBodyExpr(std::move(node));
  }

  static BallBodyExpr unit_ball(Vector center) { return generators({std::move(center)}); }

  /// The singleton {p}, written as the c-dual of p + B.
  static BallBodyExpr point(Vector p) { return cdual(unit_ball(std::move(p))); }

  /// Intersection of balls with arbitrary nonnegative radii. Nonemptiness is
  /// established lazily by the support solver.
  static BallBodyExpr balls(std::vector<Vector> centers, std::vector<double> radii) {
    if (centers.empty() || centers.size() != radii.size()) {
      throw Error(ErrorKind::InvalidArgument, "ball intersection needs matching, nonempty centers and radii");
    }
    const auto dim = centers.front().size();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (centers[i].size() != dim) throw Error(ErrorKind::DimensionMismatch, "ball centers of different dimensions");
      require_finite(centers[i], "ball center");
      if (!(radii[i] >= 0.0) || !std::isfinite(radii[i])) throw Error(ErrorKind::InvalidArgument, "negative radius");
    }
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Balls;
    node->dim = static_cast<int>(dim);
    node->in_sn = std::all_of(radii.begin(), radii.end(), [](double r) { return r == 1.0; });
    node->centers = std::move(centers);
    node->radii = std::move(radii);
    return BallBodyExpr(std::move(node));
  }

  static BallBodyExpr cdual(const BallBodyExpr& of, int max_depth = kDefaultMaxDepth) {
    if (!of.in_sn()) throw Error(ErrorKind::InvalidArgument, "c-duality is only defined on ball bodies");
    auto node = wrap(NodeKind::CDual, of, max_depth);
    return BallBodyExpr(std::move(node));
  }

  static BallBodyExpr combine(double lambda, const BallBodyExpr& a, const BallBodyExpr& b,
                              int max_depth = kDefaultMaxDepth) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "combination weight " + std::to_string(lambda) + " outside [0,1]");
    }
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "combining bodies of different dimensions");
    auto node = wrap(NodeKind::Combine, a, max_depth);
    node->depth = 1 + std::max(a.depth(), b.depth());
    if (node->depth > max_depth) throw Error(ErrorKind::InvalidArgument, "expression depth exceeds bound");
    node->in_sn = a.in_sn() && b.in_sn();
    node->lambda = lambda;
    node->b = b.node_;
    return BallBodyExpr(std::move(node));
  }

  static BallBodyExpr motion(RigidMotion g, const BallBodyExpr& of, int max_depth = kDefaultMaxDepth) {
    g.validate();
    if (g.dim() != of.dim()) throw Error(ErrorKind::DimensionMismatch, "motion and body dimensions differ");
    auto node = wrap(NodeKind::Motion, of, max_depth);
    node->motion = std::move(g);
    return BallBodyExpr(std::move(node));
  }

  static BallBodyExpr dilate(double factor, const BallBodyExpr& of, int max_depth = kDefaultMaxDepth) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::InvalidArgument, "dilation factor must be > 0");
    auto node = wrap(NodeKind::Dilate, of, max_depth);
    node->in_sn = of.in_sn() && factor == 1.0;
    node->scale = factor;
    return BallBodyExpr(std::move(node));
  }

  NodeKind kind() const { return node_->kind; }
  int dim() const { return node_->dim; }
  int depth() const { return node_->depth; }
  bool in_sn() const { return node_->in_sn; }
  bool boundary() const { return node_->boundary; }
  const Node& node() const { return *node_; }

  const std::vector<Vector>& centers() const { return node_->centers; }
  const std::vector<double>& radii() const { return node_->radii; }
  double lambda() const { return node_->lambda; }
  double scale() const { return node_->scale; }
  const RigidMotion& rigid_motion() const { return node_->motion; }
  BallBodyExpr child() const { return BallBodyExpr(node_->a); }
  BallBodyExpr second() const { return BallBodyExpr(node_->b); }

 private:
  explicit BallBodyExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<Node> wrap(NodeKind kind, const BallBodyExpr& of, int max_depth) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->dim = of.dim();
    node->depth = of.depth() + 1;
    node->in_sn = of.in_sn();
    node->a = of.node_;
    if (node->depth > max_depth) {
      throw Error(ErrorKind::InvalidArgument,
                  "expression depth " + std::to_string(node->depth) + " exceeds bound " + std::to_string(max_depth));
    }
    return node;
  }

  std::shared_ptr<const Node> node_;
};

inline BallBodyExpr c_dual(const BallBodyExpr& body) { return BallBodyExpr::cdual(body); }

inline BallBodyExpr combine(double lambda, const BallBodyExpr& a, const BallBodyExpr& b) {
  return BallBodyExpr::combine(lambda, a, b);
}

inline BallBodyExpr apply_motion(const RigidMotion& g, const BallBodyExpr& body) {
  return BallBodyExpr::motion(g, body);
}

/// Rewrites the tree so every motion sitting directly on a leaf is absorbed
/// into the leaf's centers. The result denotes the same body.
inline BallBodyExpr push_motions_into_leaves(const BallBodyExpr& body) {
  switch (body.kind()) {
    case NodeKind::Generators:
    case NodeKind::Balls: return body;
    case NodeKind::CDual: return BallBodyExpr::cdual(push_motions_into_leaves(body.child()));
    case NodeKind::Combine:
      return BallBodyExpr::combine(body.lambda(), push_motions_into_leaves(body.child()),
                                   push_motions_into_leaves(body.second()));
    case NodeKind::Dilate: return BallBodyExpr::dilate(body.scale(), push_motions_into_leaves(body.child()));
    case NodeKind::Motion: {
      const auto& g = body.rigid_motion();
      const auto inner = body.child();
      if (inner.kind() == NodeKind::Generators || inner.kind() == NodeKind::Balls) {
        std::vector<Vector> moved;
        for (const auto& c : inner.centers()) moved.push_back(g.apply(c));
        return inner.kind() == NodeKind::Generators ? BallBodyExpr::generators(std::move(moved))
                                                    : BallBodyExpr::balls(std::move(moved), inner.radii());
      }
      return BallBodyExpr::motion(g, push_motions_into_leaves(inner));
    }
  }
  return body;
}

// ---------------------------------------------------------------------------
// Support evaluation
// ---------------------------------------------------------------------------

struct SupportValue {
  double value = 0.0;
  Vector point;  // a point of the body with <point, u> == value
};

namespace detail {

struct BallConstraints {
  const std::vector<Vector>& centers;
  const std::vector<double>& radii;

  double violation(const Vector& y, std::size_t j) const {
    return (y - centers[j]).norm() - radii[j] - 1e-10 * (1.0 + radii[j]);
  }
};

// Maximizers of <y,u> on the sphere intersection of the balls in `subset`.
// The intersection of k spheres is a lower-dimensional sphere (center c,
// radius rho) orthogonal to the span of center differences. When the face is a
// 0-sphere both of its points are returned so degenerate (point-like) bodies
// without interior are still found.
inline void face_candidates(const BallConstraints& cons, const std::vector<std::size_t>& subset, const Vector& u,
                            std::vector<Vector>& out) {
  const Vector& x0 = cons.centers[subset[0]];
  const double r0 = cons.radii[subset[0]];
  const auto n = x0.size();
  const auto k = static_cast<Eigen::Index>(subset.size());
  if (k == 1) {
    out.push_back(x0 + r0 * u);
    return;
  }
  Matrix span(n, k - 1);
  Vector rhs(k - 1);
  for (Eigen::Index j = 1; j < k; ++j) {
    const Vector d = cons.centers[subset[static_cast<std::size_t>(j)]] - x0;
    const double rj = cons.radii[subset[static_cast<std::size_t>(j)]];
    span.col(j - 1) = d;
    rhs[j - 1] = 0.5 * (d.squaredNorm() + r0 * r0 - rj * rj);
  }
  const Matrix gram = span.transpose() * span;
  Eigen::FullPivLU<Matrix> lu(gram);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return;
  const Vector alpha = lu.solve(rhs);
  const Vector c = x0 + span * alpha;
  const double rho2 = r0 * r0 - (c - x0).squaredNorm();
  if (rho2 < -1e-12 * (1.0 + r0 * r0)) return;
  const double rho = std::sqrt(std::max(0.0, rho2));
  const Vector pu = u - span * lu.solve(span.transpose() * u);
  const double pu_norm = pu.norm();
  if (pu_norm > 1e-12) {
    const Vector w = pu / pu_norm;
    out.push_back(c + rho * w);
    if (k == n && rho > 0.0) out.push_back(c - rho * w);
  } else if (rho <= 1e-9) {
    out.push_back(c);
  }
}

// Maximizes <y,u> over the intersection of balls by constraint generation:
// solve the relaxation over a working set exactly (enumerating faces of at
// most n active spheres), add the most violated constraint, repeat. Each
// relaxation value is an upper bound; termination yields a feasible optimum.
inline SupportValue max_over_balls(const std::vector<Vector>& centers, const std::vector<double>& radii,
                                   const Vector& u) {
  const BallConstraints cons{centers, radii};
  const auto n = static_cast<std::size_t>(u.size());
  const std::size_t m = centers.size();

  std::size_t first = 0;
  double best_single = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double v = centers[i].dot(u) + radii[i];
    if (v < best_single) {
      best_single = v;
      first = i;
    }
  }
  std::vector<std::size_t> working{first};
  std::vector<std::size_t> subset;
  std::vector<Vector> candidates;
  const std::size_t budget = std::min<std::size_t>(m, 96);

  for (;;) {
    double best_value = -std::numeric_limits<double>::infinity();
    std::optional<Vector> best;
    // Enumerate subsets of the working set of size <= n.
    const auto enumerate = [&](auto&& self, std::size_t start) -> void {
      if (!subset.empty()) {
        candidates.clear();
        face_candidates(cons, subset, u, candidates);
        for (auto& y : candidates) {
          const double v = y.dot(u);
          if (v <= best_value) continue;
          bool feasible = true;
          for (std::size_t j : working) {
            if (cons.violation(y, j) > 0.0) {
              feasible = false;
              break;
            }
          }
          if (feasible) {
            best_value = v;
            best = std::move(y);
          }
        }
      }
      if (subset.size() == n) return;
      for (std::size_t i = start; i < working.size(); ++i) {
        subset.push_back(working[i]);
        self(self, i + 1);
        subset.pop_back();
      }
    };
    enumerate(enumerate, 0);
    if (!best) throw Error(ErrorKind::Infeasible, "ball intersection is empty");

    std::size_t worst = m;
    double worst_violation = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = cons.violation(*best, j);
      if (v > worst_violation) {
        worst_violation = v;
        worst = j;
      }
    }
    if (worst == m) return {best_value, std::move(*best)};
    if (working.size() >= budget) {
      throw Error(ErrorKind::NoConvergence, "support solver exceeded its working-set budget");
    }
    working.push_back(worst);
  }
}

inline SupportValue evaluate_support(const BallBodyExpr::Node& node, const Vector& u) {
  switch (node.kind) {
    case NodeKind::Generators:
      if (node.boundary) {
        try {
          return max_over_balls(node.centers, node.radii, u);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Infeasible) throw;
          return {node.tight_point.dot(u), node.tight_point};
        }
      }
      return max_over_balls(node.centers, node.radii, u);
    case NodeKind::Balls: return max_over_balls(node.centers, node.radii, u);
    case NodeKind::CDual: {
      // h_{K^c}(u) = 1 - h_K(-u); the K-point in direction -u shifted by u
      // lies in K^c and attains it.
      SupportValue inner = evaluate_support(*node.a, -u);
      return {1.0 - inner.value, inner.point + u};
    }
    case NodeKind::Combine: {
      SupportValue sa = evaluate_support(*node.a, u);
      SupportValue sb = evaluate_support(*node.b, u);
      const double l = node.lambda;
      return {(1.0 - l) * sa.value + l * sb.value, (1.0 - l) * sa.point + l * sb.point};
    }
    case NodeKind::Motion: {
      const auto& g = node.motion;
      SupportValue inner = evaluate_support(*node.a, g.rotation.transpose() * u);
      return {inner.value + g.translation.dot(u), g.apply(inner.point)};
    }
    case NodeKind::Dilate: {
      SupportValue inner = evaluate_support(*node.a, u);
      return {node.scale * inner.value, node.scale * inner.point};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown node kind");
}

// Upper bound on max_{y in K} |y - z| read off the tree.
inline double norm_bound_about(const BallBodyExpr::Node& node, const Vector& z) {
  switch (node.kind) {
    case NodeKind::Generators:
    case NodeKind::Balls: {
      if (node.boundary) return (node.tight_point - z).norm() + std::sqrt(2.0 * kBoundaryTolerance);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < node.centers.size(); ++i) {
        best = std::min(best, (node.centers[i] - z).norm() + node.radii[i]);
      }
      return best;
    }
    case NodeKind::CDual: return 1.0 + norm_bound_about(*node.a, z);
    case NodeKind::Combine:
      return (1.0 - node.lambda) * norm_bound_about(*node.a, z) + node.lambda * norm_bound_about(*node.b, z);
    case NodeKind::Motion: {
      const auto& g = node.motion;
      return norm_bound_about(*node.a, g.rotation.transpose() * (z - g.translation));
    }
    case NodeKind::Dilate: return node.scale * norm_bound_about(*node.a, z / node.scale);
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline constexpr double kDefaultSupportTol = 1e-6;

/// A body bundled with the accuracy of its support evaluations and a bound R
/// with K inside the origin-centered ball of radius R.
class SupportEval {
 public:
  explicit SupportEval(BallBodyExpr body, double tol = kDefaultSupportTol) : body_(std::move(body)), tol_(tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "support tolerance must be positive");
    norm_bound_ = detail::norm_bound_about(body_.node(), Vector::Zero(body_.dim()));
  }

  const BallBodyExpr& body() const { return body_; }
  double tol() const { return tol_; }
  double norm_bound() const { return norm_bound_; }
  int dim() const { return body_.dim(); }

  double norm_bound_about(const Vector& z) const { return detail::norm_bound_about(body_.node(), z); }

  SupportValue evaluate(const Vector& u) const {
    if (u.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "direction dimension differs from body");
    return detail::evaluate_support(body_.node(), unit_direction(u));
  }

  double support(const Vector& u) const { return evaluate(u).value; }

 private:
  BallBodyExpr body_;
  double tol_;
  double norm_bound_ = 0.0;
};

inline double support(const SupportEval& body, const Vector& u) { return body.support(u); }

// ---------------------------------------------------------------------------
// Hausdorff distance
// ---------------------------------------------------------------------------

/// Certified Hausdorff distance: the true value lies in
/// [value - 2(tol_K + tol_T), value + error_bound].
struct HausdorffResult {
  double value = 0.0;
  double error_bound = 0.0;
  Vector direction;  // direction attaining `value`

  double lower() const { return value; }
  double upper() const { return value + error_bound; }
};

namespace detail {

inline void check_net(const SphereNet& net, int dim) {
  if (net.dim != dim) throw Error(ErrorKind::DimensionMismatch, "sphere net dimension differs from body");
  if (net.directions.empty()) throw Error(ErrorKind::InvalidArgument, "empty sphere net");
}

// Indices of the `count` largest entries, in decreasing order.
inline std::vector<std::size_t> top_indices(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });
  idx.resize(count);
  return idx;
}

// Max over the sphere of fn, sampled on the net and polished locally around
// the best few net directions.
inline std::pair<Vector, double> sphere_max(const std::function<double(const Vector&)>& fn,
                                            const std::vector<double>& net_values, const SphereNet& net,
                                            std::size_t polish = 3) {
  Vector best_dir = net.directions.front();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : top_indices(net_values, polish)) {
    auto [dir, value] = refine_max_on_sphere(fn, net.directions[i], net_values[i], 0.5 * net.angular_step());
    if (value > best) {
      best = value;
      best_dir = std::move(dir);
    }
  }
  return {std::move(best_dir), best};
}

// Certified bound on max_{y in K} |y - z| from net samples of h_K - <z,.>.
inline double sampled_radius_bound(double net_max, double tol, const SphereNet& net, double fallback) {
  const double c = net.cos_covering_angle();
  if (c < 0.25) return fallback;
  return std::min(fallback, std::max(0.0, net_max + tol) / c);
}

}  // namespace detail

inline HausdorffResult hausdorff(const SupportEval& k, const SupportEval& t, const SphereNet& net) {
  if (k.dim() != t.dim()) throw Error(ErrorKind::DimensionMismatch, "hausdorff: bodies of different dimensions");
  detail::check_net(net, k.dim());
  const std::size_t count = net.size();
  std::vector<SupportValue> sk, st;
  sk.reserve(count);
  st.reserve(count);
  std::vector<double> diff(count);
  Vector z = Vector::Zero(k.dim());
  for (std::size_t i = 0; i < count; ++i) {
    sk.push_back(k.evaluate(net.directions[i]));
    st.push_back(t.evaluate(net.directions[i]));
    diff[i] = std::abs(sk.back().value - st.back().value);
    z += sk.back().point + st.back().point;
  }
  z /= 2.0 * static_cast<double>(count);

  auto gap = [&](const Vector& u) { return std::abs(k.support(u) - t.support(u)); };
  auto [dir, value] = detail::sphere_max(gap, diff, net);

  // h_K - h_T is Lipschitz on the sphere with constant R_K(z) + R_T(z) for
  // any common reference point z.
  double gk = -std::numeric_limits<double>::infinity(), gt = gk;
  for (std::size_t i = 0; i < count; ++i) {
    gk = std::max(gk, sk[i].value - z.dot(net.directions[i]));
    gt = std::max(gt, st[i].value - z.dot(net.directions[i]));
  }
  const double rk = detail::sampled_radius_bound(gk, k.tol(), net, k.norm_bound_about(z));
  const double rt = detail::sampled_radius_bound(gt, t.tol(), net, t.norm_bound_about(z));
  const double lipschitz = std::min(rk + rt, 2.0 * std::max(k.norm_bound(), t.norm_bound()));
  return {value, lipschitz * net.mesh + 2.0 * (k.tol() + t.tol()), std::move(dir)};
}

// ---------------------------------------------------------------------------
// Circumball, membership, reconstruction
// ---------------------------------------------------------------------------

struct CircumballResult {
  Ball ball;                 // center c(K), radius estimate r(K)
  double lower_bound = 0.0;  // radius of the enclosing ball of sampled boundary points
  double upper_bound = 0.0;  // certified: r(K) <= upper_bound
};

/// Outball of K: the center minimizes max_u (h_K(u) - <z,u>). It is located
/// as the minimal ball around support points of K, starting from the net
/// directions and adding the point farthest from the current center until
/// that point is already covered. The radius is the polished farthest
/// distance from the final center.
inline CircumballResult circumball(const SupportEval& k, const SphereNet& net) {
  detail::check_net(net, k.dim());
  std::vector<Vector> points;
  points.reserve(net.size());
  std::vector<double> values;
  values.reserve(net.size());
  for (const auto& u : net.directions) {
    auto s = k.evaluate(u);
    values.push_back(s.value);
    points.push_back(std::move(s.point));
  }
  std::vector<double> reach(net.size());
  double net_max = 0.0;
  Ball sampled;
  double polished = 0.0;
  for (int round = 0; round < 64; ++round) {
    sampled = minimal_enclosing_ball(points);
    const Vector z = sampled.center;
    net_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.size(); ++i) {
      reach[i] = values[i] - z.dot(net.directions[i]);
      net_max = std::max(net_max, reach[i]);
    }
    auto farthest = [&](const Vector& u) { return k.support(u) - z.dot(u); };
    auto [dir, value] = detail::sphere_max(farthest, reach, net);
    polished = value;
    if (polished <= sampled.radius + 1e-12) break;
    points.push_back(k.evaluate(dir).point);
  }
  const Vector& z = sampled.center;
  const double radius = std::max({sampled.radius, polished, 0.0});
  const double upper = detail::sampled_radius_bound(net_max, k.tol(), net, k.norm_bound_about(z));
  return {Ball{z, radius}, sampled.radius, std::max(upper, radius)};
}

struct Containment {
  bool inside = false;
  double margin = 0.0;  // >= 0 inside; magnitude roughly the distance to the boundary
};

/// Net-based membership: <y,u> <= h_K(u) + tol for all net directions.
inline Containment contains_point_net(const SupportEval& k, const Vector& y, const SphereNet& net) {
  detail::check_net(net, k.dim());
  if (y.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from body");
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& u : net.directions) margin = std::min(margin, k.support(u) + k.tol() - y.dot(u));
  return {margin >= 0.0, margin};
}

/// Membership test; generator leaves use the exact test max_i |y - x_i| <= 1.
inline Containment contains_point(const SupportEval& k, const Vector& y, const SphereNet& net) {
  const auto& body = k.body();
  if (body.kind() == NodeKind::Generators && !body.boundary()) {
    if (y.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from body");
    double worst = 0.0;
    for (const auto& c : body.centers()) worst = std::max(worst, (y - c).norm());
    const double margin = 1.0 + k.tol() - worst;
    return {margin >= 0.0, margin};
  }
  return contains_point_net(k, y, net);
}

/// delta({x}, K) = max_{y in K} |x - y|.
inline HausdorffResult distance_to_point(const SupportEval& k, const Vector& x, const SphereNet& net) {
  return hausdorff(SupportEval(BallBodyExpr::point(x), k.tol()), k, net);
}

struct Probe {
  Vector x;
  double distance = 0.0;
};

/// Intersection of the balls x + d_x B over the probes. When every d_x is the
/// true distance from x to a ball body K, the result contains K and tends to K
/// as the probes refine.
inline SupportEval reconstruct(const std::vector<Probe>& probes, const SphereNet& net,
                               double tol = kDefaultSupportTol) {
  if (probes.empty()) throw Error(ErrorKind::InvalidArgument, "reconstruct needs at least one probe");
  std::vector<Vector> centers;
  std::vector<double> radii;
  for (const auto& p : probes) {
    if (!(p.distance >= 0.0)) throw Error(ErrorKind::InvalidArgument, "probe distance must be nonnegative");
    centers.push_back(p.x);
    radii.push_back(p.distance);
  }
  SupportEval out(BallBodyExpr::balls(std::move(centers), std::move(radii)), tol);
  detail::check_net(net, out.dim());
  try {
    out.support(net.directions.front());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) throw Error(ErrorKind::EmptyBody, "empty reconstruction");
    throw;
  }
  return out;
}

}  // namespace ballbody
