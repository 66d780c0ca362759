#pragma once

// Black-box maps on ball bodies and the classifier that recovers their normal
// form K -> gK or K -> gK^c.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ballbody/body.hpp"
#include "ballbody/error.hpp"
#include "ballbody/geometry.hpp"
#include "ballbody/random.hpp"

namespace ballbody {

struct BlackBoxMap {
  int dim = 0;
  std::function<BallBodyExpr(const BallBodyExpr&)> evaluate;

  BallBodyExpr operator()(const BallBodyExpr& k) const {
    if (k.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "map applied to a body of the wrong dimension");
    return evaluate(k);
  }
};

inline BlackBoxMap identity_map(int dim) {
  return {dim, [](const BallBodyExpr& k) { return k; }};
}

inline BlackBoxMap motion_map(RigidMotion g) {
  g.validate();
  const int dim = g.dim();
  return {dim, [g = std::move(g)](const BallBodyExpr& k) { return apply_motion(g, k); }};
}

inline BlackBoxMap cdual_map(int dim) {
  return {dim, [](const BallBodyExpr& k) { return c_dual(k); }};
}

/// Maps every body to `image`.
inline BlackBoxMap constant_map(BallBodyExpr image) {
  const int dim = image.dim();
  return {dim, [image = std::move(image)](const BallBodyExpr&) { return image; }};
}

/// K -> factor * K. Leaves S_n unless factor is 1; used as a negative control.
inline BlackBoxMap scale_map(int dim, double factor) {
  return {dim, [factor](const BallBodyExpr& k) { return BallBodyExpr::dilate(factor, k); }};
}

/// Composition in mathematical order: maps.front() is applied last.
inline BlackBoxMap compose_maps(std::vector<BlackBoxMap> maps) {
  if (maps.empty()) throw Error(ErrorKind::InvalidArgument, "compose needs at least one map");
  const int dim = maps.front().dim;
  for (const auto& m : maps) {
    if (m.dim != dim) throw Error(ErrorKind::DimensionMismatch, "composed maps differ in dimension");
  }
  return {dim, [maps = std::move(maps)](const BallBodyExpr& k) {
            BallBodyExpr out = k;
            for (auto it = maps.rbegin(); it != maps.rend(); ++it) out = (*it)(out);
            return out;
          }};
}

// ---------------------------------------------------------------------------
// Isometry defect
// ---------------------------------------------------------------------------

struct BodyPair {
  BallBodyExpr first;
  BallBodyExpr second;
};

struct DefectReport {
  double estimate = 0.0;  // max |delta(TK,TL) - delta(K,L)| from the point values
  double lower = 0.0;     // certified: the true defect is at least this
  double upper = 0.0;     // worst-case endpoint of the certified intervals
  std::size_t worst_pair = 0;
};

inline DefectReport isometry_defect(const BlackBoxMap& t, const std::vector<BodyPair>& probes, const SphereNet& net,
                                    double tol = kDefaultSupportTol) {
  DefectReport out;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    try {
      const auto& [k, l] = probes[i];
      const auto before = hausdorff(SupportEval(k, tol), SupportEval(l, tol), net);
      const auto after = hausdorff(SupportEval(t(k), tol), SupportEval(t(l), tol), net);
      const double estimate = std::abs(after.value - before.value);
      const double upper = std::max(after.upper() - before.lower(), before.upper() - after.lower());
      const double lower = std::max({0.0, after.lower() - before.upper(), before.lower() - after.upper()});
      if (estimate > out.estimate) {
        out.estimate = estimate;
        out.worst_pair = i;
      }
      out.upper = std::max(out.upper, upper);
      out.lower = std::max(out.lower, lower);
    } catch (const Error& e) {
      throw Error(e.kind(), "probe pair " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

/// Seeded screening pairs mixing points, unit balls and generator bodies.
inline std::vector<BodyPair> screening_pairs(int dim, std::uint64_t seed, int count = 12) {
  BodyFactory f(dim, seed);
  std::vector<BodyPair> out;
  for (int i = 0; i < count; ++i) {
    switch (i % 4) {
      case 0: {
        auto a = f.generator_body();
        auto b = f.generator_body();
        out.push_back({std::move(a), std::move(b)});
        break;
      }
      case 1: {
        auto a = BallBodyExpr::point(f.uniform_vector(-2, 2));
        auto b = BallBodyExpr::unit_ball(f.uniform_vector(-2, 2));
        out.push_back({std::move(a), std::move(b)});
        break;
      }
      case 2: {
        auto a = BallBodyExpr::point(f.uniform_vector(-2, 2));
        auto b = BallBodyExpr::point(f.uniform_vector(-2, 2));
        out.push_back({std::move(a), std::move(b)});
        break;
      }
      default: {
        auto a = f.body(2);
        auto b = BallBodyExpr::unit_ball(f.uniform_vector(-1, 1));
        out.push_back({std::move(a), std::move(b)});
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classifier
// ---------------------------------------------------------------------------

enum class IsometryKind { Identity, CDual };

inline const char* to_string(IsometryKind k) { return k == IsometryKind::Identity ? "identity" : "cdual"; }

struct ClassifyConfig {
  double mesh = 0.0;  // 0 selects the dimension default
  double tol = kDefaultSupportTol;
  double r_tol = 1e-3;
  double defect_tol = 1e-3;
  double lattice_radius = 3.0;
  double lattice_spacing = 1.0;
  int test_bodies = 20;
  int screening = 12;
  std::uint64_t seed = 1;
};

inline double default_mesh(int dim) { return dim <= 2 ? 0.02 : 0.08; }

struct IsometryClassification {
  IsometryKind kind = IsometryKind::Identity;
  RigidMotion motion;
  double residual = 0.0;     // max over test bodies of delta(TK, gK) or delta(TK, gK^c)
  double error_bound = 0.0;  // largest certified error bound among those distances
  DefectReport defect;       // screening isometry defect
  double point_image_radius = 0.0;
  double ball_image_radius = 0.0;
  double fit_residual = 0.0;
  double r_tol = 0.0;
  std::size_t lattice_size = 0;
};

inline std::vector<Vector> lattice(int dim, double radius, double spacing) {
  const int steps = static_cast<int>(std::floor(radius / spacing + 1e-9));
  std::vector<Vector> out;
  std::vector<int> idx(static_cast<std::size_t>(dim), -steps);
  while (true) {
    Vector p(dim);
    for (int i = 0; i < dim; ++i) p[i] = spacing * idx[static_cast<std::size_t>(i)];
    out.push_back(std::move(p));
    int i = 0;
    while (i < dim && idx[static_cast<std::size_t>(i)] == steps) idx[static_cast<std::size_t>(i++)] = -steps;
    if (i == dim) break;
    ++idx[static_cast<std::size_t>(i)];
  }
  return out;
}

inline IsometryClassification classify_isometry(const BlackBoxMap& t, const ClassifyConfig& config = {}) {
  const int dim = t.dim;
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 2");
  const SphereNet net = make_sphere_net(dim, config.mesh > 0 ? config.mesh : default_mesh(dim));
  IsometryClassification out;
  out.r_tol = config.r_tol;

  out.defect = isometry_defect(t, screening_pairs(dim, config.seed, config.screening), net, config.tol);
  if (out.defect.lower > config.defect_tol) {
    throw Error(ErrorKind::NotAnIsometry, "screening defect at least " + std::to_string(out.defect.lower) +
                                              " exceeds " + std::to_string(config.defect_tol));
  }

  // Stage 1: which family of probes collapses to points under T.
  const auto sites = lattice(dim, config.lattice_radius, config.lattice_spacing);
  out.lattice_size = sites.size();
  std::vector<Vector> point_centers, ball_centers;
  for (const auto& x : sites) {
    const auto pi = circumball(SupportEval(t(BallBodyExpr::point(x)), config.tol), net);
    const auto bi = circumball(SupportEval(t(BallBodyExpr::unit_ball(x)), config.tol), net);
    out.point_image_radius = std::max(out.point_image_radius, pi.ball.radius);
    out.ball_image_radius = std::max(out.ball_image_radius, bi.ball.radius);
    point_centers.push_back(pi.ball.center);
    ball_centers.push_back(bi.ball.center);
  }
  const bool points_collapse = out.point_image_radius <= config.r_tol;
  const bool balls_collapse = out.ball_image_radius <= config.r_tol;
  if (points_collapse && balls_collapse) {
    throw Error(ErrorKind::Ambiguous, "both points and unit balls map to near-points");
  }
  if (!points_collapse && !balls_collapse) {
    throw Error(ErrorKind::NotAnIsometry, "neither points nor unit balls map to near-points (radii " +
                                              std::to_string(out.point_image_radius) + ", " +
                                              std::to_string(out.ball_image_radius) + ")");
  }
  out.kind = points_collapse ? IsometryKind::Identity : IsometryKind::CDual;

  // Stage 2: rigid motion from lattice correspondences.
  const auto fit = procrustes_fit(sites, points_collapse ? point_centers : ball_centers);
  out.motion = fit.motion;
  out.fit_residual = fit.residual;

  // Stage 3: compare T with the normal form on fresh bodies.
  BodyFactory f(dim, config.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < config.test_bodies; ++i) {
    const auto k = f.generator_body();
    const auto expected =
        apply_motion(out.motion, out.kind == IsometryKind::Identity ? k : c_dual(k));
    const auto d = hausdorff(SupportEval(t(k), config.tol), SupportEval(expected, config.tol), net);
    out.residual = std::max(out.residual, d.value);
    out.error_bound = std::max(out.error_bound, d.error_bound);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geodesic midpoint check
// ---------------------------------------------------------------------------

enum class GeodesicStatus { Pass, Violation, NotGeodesic };

inline const char* to_string(GeodesicStatus s) {
  switch (s) {
    case GeodesicStatus::Pass: return "pass";
    case GeodesicStatus::Violation: return "violation";
    case GeodesicStatus::NotGeodesic: return "not a geodesic triple";
  }
  return "?";
}

struct GeodesicCheck {
  HausdorffResult d01, d12, d02;
  double r0 = 0.0, r1 = 0.0, r2 = 0.0;
  double gap = 0.0;        // |d01 + d12 - d02|
  double tolerance = 0.0;  // sum of the three error bounds
  GeodesicStatus status = GeodesicStatus::Pass;
};

/// If K1 lies between K0 and K2 and neither endpoint is a point, K1 must not
/// be a point either.
inline GeodesicCheck geodesic_midpoint_check(const BallBodyExpr& k0, const BallBodyExpr& k1, const BallBodyExpr& k2,
                                             const SphereNet& net, double point_tol = 1e-3,
                                             double tol = kDefaultSupportTol) {
  const SupportEval e0(k0, tol), e1(k1, tol), e2(k2, tol);
  GeodesicCheck out;
  out.d01 = hausdorff(e0, e1, net);
  out.d12 = hausdorff(e1, e2, net);
  out.d02 = hausdorff(e0, e2, net);
  out.r0 = circumball(e0, net).ball.radius;
  out.r1 = circumball(e1, net).ball.radius;
  out.r2 = circumball(e2, net).ball.radius;
  out.gap = std::abs(out.d01.value + out.d12.value - out.d02.value);
  out.tolerance = out.d01.error_bound + out.d12.error_bound + out.d02.error_bound;
  if (out.gap > out.tolerance) {
    out.status = GeodesicStatus::NotGeodesic;
  } else if (out.r0 >= point_tol && out.r2 >= point_tol && out.r1 < point_tol) {
    out.status = GeodesicStatus::Violation;
  }
  return out;
}

/// Geodesic from the point 0 through the point u/2 to the ball u/2 + B/2:
/// K_t = {t u} for t <= 1/2 and u/2 + (t - 1/2) B afterwards.
inline BallBodyExpr point_then_ball_path(const Vector& u, double t) {
  if (t < 0.0 || t > 1.0) throw Error(ErrorKind::InvalidArgument, "path parameter must lie in [0, 1]");
  if (t <= 0.5) return BallBodyExpr::point(t * u);
  const double s = t - 0.5;
  return combine(s, BallBodyExpr::point(u / (2.0 * (1.0 - s))), BallBodyExpr::unit_ball(Vector::Zero(u.size())));
}

}  // namespace ballbody
