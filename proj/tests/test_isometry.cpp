#include <gtest/gtest.h>

#include <cmath>

#include "ballbody/isometry.hpp"
#include "ballbody/random.hpp"

using namespace ballbody;

namespace {

double operator_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()(0); }

void expect_motion_near(const RigidMotion& got, const RigidMotion& want, double tol) {
  EXPECT_LE(operator_norm(got.rotation - want.rotation), tol);
  EXPECT_LE((got.translation - want.translation).norm(), tol);
}

}  // namespace

TEST(Lattice, CoversBoxWithSpacing) {
  EXPECT_EQ(lattice(2, 3.0, 1.0).size(), 49u);
  EXPECT_EQ(lattice(3, 3.0, 1.0).size(), 343u);
  for (const auto& p : lattice(2, 1.0, 0.5)) EXPECT_LE(p.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Maps, CompositionAppliesLastListedFirst) {
  BodyFactory f(2, 4);
  const auto g = f.motion();
  const auto t = compose_maps({motion_map(g), cdual_map(2)});
  const auto k = f.generator_body();
  const auto net = make_sphere_net(2, 0.05);
  const auto d = hausdorff(SupportEval(t(k)), SupportEval(apply_motion(g, c_dual(k))), net);
  EXPECT_LE(d.value, 1e-6);
}

TEST(Maps, RejectWrongDimension) {
  const auto t = cdual_map(3);
  EXPECT_THROW(t(BallBodyExpr::unit_ball(make_vector({0, 0}))), Error);
}

TEST(IsometryDefect, IdentityAndDualityAreWithinBounds) {
  const auto net = make_sphere_net(2, 0.02);
  const auto pairs = screening_pairs(2, 3);
  for (const auto& t : {identity_map(2), cdual_map(2)}) {
    const auto d = isometry_defect(t, pairs, net);
    EXPECT_LE(d.estimate, 1e-5);
    EXPECT_EQ(d.lower, 0.0);
    EXPECT_GE(d.upper, d.estimate);
  }
}

TEST(IsometryDefect, ConstantMapDefectIsLargestProbeDistance) {
  const auto net = make_sphere_net(2, 0.02);
  const auto pairs = screening_pairs(2, 3);
  double widest = 0.0, slack = 0.0;
  for (const auto& [a, b] : pairs) {
    const auto d = hausdorff(SupportEval(a), SupportEval(b), net);
    widest = std::max(widest, d.value);
    slack = std::max(slack, d.error_bound);
  }
  const auto d = isometry_defect(constant_map(BallBodyExpr::unit_ball(make_vector({0, 0}))), pairs, net);
  EXPECT_NEAR(d.estimate, widest, 1e-9);
  EXPECT_GE(d.lower, widest - slack);
  EXPECT_GT(d.lower, 0.5);
}

TEST(IsometryDefect, ReportsOffendingPair) {
  const auto net = make_sphere_net(2, 0.1);
  std::vector<BodyPair> pairs{{BallBodyExpr::unit_ball(make_vector({0, 0})), BallBodyExpr::unit_ball(make_vector({1, 0}))}};
  try {
    isometry_defect(scale_map(2, 2.0), pairs, net);
  } catch (const Error&) {
    FAIL() << "scaling is representable and must not fail";
  }
  const BlackBoxMap dual_of_scaled{2, [](const BallBodyExpr& k) { return c_dual(BallBodyExpr::dilate(2.0, k)); }};
  try {
    isometry_defect(dual_of_scaled, pairs, net);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("probe pair 0"), std::string::npos);
  }
}

TEST(Classifier, RecoversPlantedMotions) {
  for (int trial = 0; trial < 4; ++trial) {
    const int dim = 2 + trial % 2;
    BodyFactory f(dim, 100 + static_cast<unsigned>(trial));
    const auto g = f.motion();
    ClassifyConfig config;
    config.seed = static_cast<unsigned>(trial);
    const auto c = classify_isometry(motion_map(g), config);
    EXPECT_EQ(c.kind, IsometryKind::Identity);
    expect_motion_near(c.motion, g, 1e-4);
    EXPECT_LE(c.residual, 5.0 * c.error_bound);
    EXPECT_LE(c.point_image_radius, config.r_tol);
    EXPECT_GT(c.ball_image_radius, 0.5);
  }
}

TEST(Classifier, RecoversPlantedDualMotions) {
  for (int trial = 0; trial < 4; ++trial) {
    const int dim = 2 + trial % 2;
    BodyFactory f(dim, 200 + static_cast<unsigned>(trial));
    const auto g = f.motion();
    const auto c = classify_isometry(compose_maps({motion_map(g), cdual_map(dim)}));
    EXPECT_EQ(c.kind, IsometryKind::CDual);
    expect_motion_near(c.motion, g, 1e-4);
    EXPECT_LE(c.residual, 5.0 * c.error_bound);
    EXPECT_LE(c.ball_image_radius, 1e-3);
  }
}

TEST(Classifier, PlainDualityHasIdentityMotion) {
  const auto c = classify_isometry(cdual_map(2));
  EXPECT_EQ(c.kind, IsometryKind::CDual);
  expect_motion_near(c.motion, RigidMotion::identity(2), 1e-6);
  EXPECT_LE(c.residual, 5.0 * c.error_bound);
}

TEST(Classifier, RejectsConstantAndScalingMaps) {
  for (const auto& t : {constant_map(BallBodyExpr::point(make_vector({0.5, 0.5}))), scale_map(2, 2.0),
                        scale_map(2, 0.5)}) {
    try {
      classify_isometry(t);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotAnIsometry);
      EXPECT_NE(std::string(e.what()).find("not an S_n-isometry"), std::string::npos);
    }
  }
}

TEST(Classifier, StageOneRejectsMapsCollapsingNothing) {
  // Passes a lax screening but sends points to unit balls and balls to
  // radius-1/2 balls.
  const BlackBoxMap t{2, [](const BallBodyExpr& k) {
                        return combine(0.5, k, BallBodyExpr::unit_ball(Vector::Zero(2)));
                      }};
  ClassifyConfig config;
  config.defect_tol = 1e3;
  try {
    classify_isometry(t, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnIsometry);
  }
}

TEST(Geodesic, MinkowskiSegmentsKeepMidpointsNonPoint) {
  const auto net = make_sphere_net(2, 0.02);
  BodyFactory f(2, 77);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto k0 = f.body(2);
    const auto k2 = f.body(2);
    const auto k1 = combine(f.uniform(0, 1), k0, k2);
    const auto r = geodesic_midpoint_check(k0, k1, k2, net);
    EXPECT_NE(r.status, GeodesicStatus::NotGeodesic) << "gap " << r.gap << " tol " << r.tolerance;
    EXPECT_NE(r.status, GeodesicStatus::Violation);
    if (r.r0 >= 0.05 && r.r2 >= 0.05) {
      ++checked;
      EXPECT_GE(r.r1, 1e-3);
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Geodesic, ConstantTripleIsTriviallyAdditive) {
  const auto net = make_sphere_net(2, 0.02);
  const auto k = BallBodyExpr::generators({make_vector({0, 0}), make_vector({0.6, 0.2})});
  const auto r = geodesic_midpoint_check(k, k, k, net);
  EXPECT_EQ(r.status, GeodesicStatus::Pass);
  EXPECT_LE(r.gap, 1e-9);
}

TEST(Geodesic, PointThenBallPathIsAdditiveWithPointEndpoint) {
  for (int dim : {2, 3}) {
    const auto net = make_sphere_net(dim, default_mesh(dim));
    Vector u = Vector::Zero(dim);
    u[0] = 0.6;
    u[1] = 0.8;
    const auto r = geodesic_midpoint_check(point_then_ball_path(u, 0.0), point_then_ball_path(u, 0.5),
                                           point_then_ball_path(u, 1.0), net);
    EXPECT_EQ(r.status, GeodesicStatus::Pass);
    EXPECT_NEAR(r.d01.value, 0.5, 1e-6);
    EXPECT_NEAR(r.d12.value, 0.5, 1e-6);
    EXPECT_NEAR(r.d02.value, 1.0, 1e-6);
    EXPECT_LE(r.r0, 1e-9);
    EXPECT_LE(r.r1, 1e-9);
    EXPECT_NEAR(r.r2, 0.5, 1e-6);
  }
}

TEST(Geodesic, PathIsLinearInParameter) {
  const auto net = make_sphere_net(2, 0.02);
  const Vector u = make_vector({0.0, 1.0});
  for (double s : {0.1, 0.3, 0.6, 0.9}) {
    for (double t : {0.0, 0.45, 0.7, 1.0}) {
      const auto d = hausdorff(SupportEval(point_then_ball_path(u, s)), SupportEval(point_then_ball_path(u, t)), net);
      EXPECT_NEAR(d.value, std::abs(s - t), 1e-6) << s << " " << t;
    }
  }
}

TEST(Geodesic, FlagsNonGeodesicTriples) {
  const auto net = make_sphere_net(2, 0.02);
  const auto a = BallBodyExpr::unit_ball(make_vector({0, 0}));
  const auto b = BallBodyExpr::unit_ball(make_vector({0, 1}));
  const auto c = BallBodyExpr::unit_ball(make_vector({1, 0}));
  EXPECT_EQ(geodesic_midpoint_check(a, b, c, net).status, GeodesicStatus::NotGeodesic);
}
