#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ballbody/body.hpp"
#include "ballbody/random.hpp"
#include "oracles.hpp"

using namespace ballbody;

namespace {

const SphereNet& net2() {
  static const SphereNet net = make_sphere_net(2, 0.02);
  return net;
}

const SphereNet& net3() {
  static const SphereNet net = make_sphere_net(3, 0.08);
  return net;
}

const SphereNet& net_for(int dim) { return dim == 2 ? net2() : net3(); }

BallBodyExpr lens() { return BallBodyExpr::generators({make_vector({0, 0}), make_vector({1, 0})}); }

double max_net_gap(const SupportEval& a, const SupportEval& b, const SphereNet& net) {
  double worst = 0.0;
  for (const auto& u : net.directions) worst = std::max(worst, std::abs(a.support(u) - b.support(u)));
  return worst;
}

}  // namespace

// --- support -----------------------------------------------------------------

TEST(Support, SingleUnitBall) {
  const SupportEval k(BallBodyExpr::unit_ball(make_vector({0.3, -2.0})));
  for (const auto& u : net2().directions) EXPECT_NEAR(k.support(u), make_vector({0.3, -2.0}).dot(u) + 1.0, 1e-12);
}

TEST(Support, LensMatchesClosedFormAndSampling) {
  const SupportEval k(lens());
  EXPECT_NEAR(k.support(make_vector({1, 0})), 1.0, 1e-12);
  EXPECT_NEAR(k.support(make_vector({0, 1})), std::sqrt(3.0) / 2.0, 1e-12);
  const std::vector<Eigen::Vector2d> centers{{0, 0}, {1, 0}};
  for (double a = 0.05; a < 2 * kPi; a += 0.37) {
    const Vector u = make_vector({std::cos(a), std::sin(a)});
    EXPECT_NEAR(k.support(u), oracle::sampled_support_2d(centers, Eigen::Vector2d(u[0], u[1]), 100000), 1e-4);
  }
}

TEST(Support, RandomPlanarGeneratorsMatchSampling) {
  BodyFactory factory(2, 17);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 15; ++trial) {
    const auto body = factory.generator_body();
    const SupportEval k(body);
    std::vector<Eigen::Vector2d> centers;
    for (const auto& c : body.centers()) centers.emplace_back(c[0], c[1]);
    for (int d = 0; d < 4; ++d) {
      const Vector u = oracle::random_unit(rng, 2);
      const double sampled = oracle::sampled_support_2d(centers, Eigen::Vector2d(u[0], u[1]), 50000);
      const double solved = k.support(u);
      EXPECT_LE(sampled, solved + 1e-9);
      EXPECT_NEAR(sampled, solved, 5e-4);
    }
  }
}

TEST(Support, ThreeDimensionalSolutionIsFeasibleAndUnbeaten) {
  BodyFactory factory(3, 23);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto body = factory.generator_body();
    const SupportEval k(body);
    for (int d = 0; d < 5; ++d) {
      const Vector u = oracle::random_unit(rng, 3);
      const auto s = k.evaluate(u);
      EXPECT_NEAR(s.point.dot(u), s.value, 1e-12);
      for (const auto& c : body.centers()) EXPECT_LE((s.point - c).norm(), 1.0 + 1e-9);
      // Feasible perturbations of the maximizer never do better.
      for (int p = 0; p < 2000; ++p) {
        const Vector y = s.point + 0.05 * oracle::random_unit(rng, 3) * std::uniform_real_distribution<>(0, 1)(rng);
        bool feasible = true;
        for (const auto& c : body.centers()) feasible = feasible && (y - c).norm() <= 1.0;
        if (feasible) {
          EXPECT_LE(y.dot(u), s.value + 1e-12);
        }
      }
    }
  }
}

TEST(Support, CDualOfUnitBallIsOrigin) {
  const SupportEval k(BallBodyExpr::cdual(BallBodyExpr::unit_ball(make_vector({0, 0}))));
  for (const auto& u : net2().directions) EXPECT_NEAR(k.support(u), 0.0, 1e-12);
}

TEST(Support, BoundaryTightGeneratorsArePoints) {
  const auto body = BallBodyExpr::generators({make_vector({-1, 0}), make_vector({1, 0})});
  EXPECT_TRUE(body.boundary());
  const SupportEval k(body);
  for (const auto& u : net2().directions) EXPECT_NEAR(k.support(u), 0.0, 1e-9);
  // Three centers on the unit circle pin the origin too.
  const auto tri = BallBodyExpr::generators({make_vector({1, 0}), make_vector({std::cos(2.0), std::sin(2.0)}),
                                             make_vector({std::cos(4.0), std::sin(4.0)})});
  const SupportEval t(tri);
  for (const auto& u : net2().directions) EXPECT_NEAR(t.support(u), 0.0, 1e-7);
}

TEST(Support, RejectsEmptyAndMalformedBodies) {
  try {
    BallBodyExpr::generators({make_vector({-1.1, 0}), make_vector({1.1, 0})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyBody);
  }
  EXPECT_THROW(BallBodyExpr::generators({}), Error);
  EXPECT_THROW(BallBodyExpr::generators({make_vector({0, 0}), make_vector({0, 0, 0})}), Error);
  const SupportEval k(lens());
  EXPECT_THROW(k.support(make_vector({2, 0})), Error);
  EXPECT_THROW(k.support(make_vector({1, 0, 0})), Error);
  EXPECT_NEAR(k.support(make_vector({1 + 5e-7, 0})), 1.0, 1e-12);
}

TEST(Support, DepthBoundIsEnforced) {
  auto body = BallBodyExpr::unit_ball(make_vector({0, 0}));
  for (int i = 1; i < kDefaultMaxDepth; ++i) body = BallBodyExpr::cdual(body);
  EXPECT_EQ(body.depth(), kDefaultMaxDepth);
  EXPECT_THROW(BallBodyExpr::cdual(body), Error);
}

TEST(Support, NormBoundHolds) {
  BodyFactory factory(2, 31);
  for (int trial = 0; trial < 30; ++trial) {
    const SupportEval k(factory.body(3));
    for (const auto& u : net2().directions) {
      const double h = k.support(u);
      EXPECT_LE(h, k.norm_bound() + 1e-12);
      EXPECT_GE(h, -k.norm_bound() - 1e-12);
    }
  }
}

TEST(Support, SampledSublinearityOfBodyAndItsDual) {
  std::mt19937_64 rng(8);
  for (int dim : {2, 3}) {
    BodyFactory factory(dim, 40 + dim);
    for (int trial = 0; trial < 20; ++trial) {
      const SupportEval k(factory.body(2));
      auto extended = [&](const Vector& v) { return v.norm() * k.support(v.normalized()); };
      auto dual = [&](const Vector& v) { return v.norm() * (1.0 - k.support(-v.normalized())); };
      for (int s = 0; s < 30; ++s) {
        const Vector u = oracle::random_unit(rng, dim);
        const Vector v = oracle::random_unit(rng, dim);
        if ((u + v).norm() < 1e-6) continue;
        EXPECT_LE(extended(u + v), extended(u) + extended(v) + 4 * k.tol());
        EXPECT_LE(dual(u + v), dual(u) + dual(v) + 4 * k.tol());
      }
    }
  }
}

// --- hausdorff ---------------------------------------------------------------

TEST(Hausdorff, SelfDistanceIsZero) {
  BodyFactory factory(2, 2);
  const SupportEval k(factory.body(2));
  const auto d = hausdorff(k, k, net2());
  EXPECT_LE(d.value, 2 * k.tol());
}

TEST(Hausdorff, PointsAndBalls) {
  const Vector x = make_vector({0.5, -1.0});
  const Vector y = make_vector({-1.0, 1.0});
  const SupportEval px(BallBodyExpr::point(x));
  const SupportEval py(BallBodyExpr::point(y));
  const auto pp = hausdorff(px, py, net2());
  EXPECT_NEAR(pp.value, (x - y).norm(), 1e-9);
  EXPECT_LE((x - y).norm(), pp.upper());

  const SupportEval by(BallBodyExpr::unit_ball(y));
  const auto pb = hausdorff(px, by, net2());
  EXPECT_NEAR(pb.value, 1.0 + (x - y).norm(), 1e-9);
  const SupportEval bx(BallBodyExpr::unit_ball(x));
  const auto self = hausdorff(px, bx, net2());
  EXPECT_NEAR(self.value, 1.0, 1e-9);
}

TEST(Hausdorff, ErrorBoundWithinNominalFormula) {
  BodyFactory factory(3, 12);
  for (int trial = 0; trial < 10; ++trial) {
    const SupportEval k(factory.body(2)), t(factory.body(2));
    const auto d = hausdorff(k, t, net3());
    EXPECT_LE(d.error_bound,
              2 * std::max(k.norm_bound(), t.norm_bound()) * net3().mesh + 2 * (k.tol() + t.tol()) + 1e-12);
  }
}

TEST(Hausdorff, RejectsDimensionMismatch) {
  const SupportEval a(lens());
  const SupportEval b(BallBodyExpr::unit_ball(make_vector({0, 0, 0})));
  EXPECT_THROW(hausdorff(a, b, net2()), Error);
  EXPECT_THROW(hausdorff(a, a, net3()), Error);
}

// --- c-duality, combination, motion -------------------------------------------

TEST(CDual, InvolutionAndSupportIdentity) {
  for (int dim : {2, 3}) {
    BodyFactory factory(dim, 100 + dim);
    for (int trial = 0; trial < 25; ++trial) {
      const auto body = factory.body(3);
      const SupportEval k(body);
      const SupportEval kc(c_dual(body));
      const SupportEval kcc(c_dual(c_dual(body)));
      for (const auto& u : net_for(dim).directions) {
        EXPECT_NEAR(kcc.support(u), k.support(u), 2e-6);
        EXPECT_NEAR(k.support(u) + kc.support(-u), 1.0, 2e-6);
      }
    }
  }
}

TEST(CDual, OfPointIsUnitBall) {
  const Vector p = make_vector({1.5, 0.25});
  const SupportEval k(c_dual(BallBodyExpr::point(p)));
  for (const auto& u : net2().directions) EXPECT_NEAR(k.support(u), p.dot(u) + 1.0, 1e-12);
}

TEST(CDual, IsAHausdorffIsometry) {
  for (int dim : {2, 3}) {
    BodyFactory factory(dim, 200 + dim);
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = factory.body(2), b = factory.body(2);
      const auto direct = hausdorff(SupportEval(a), SupportEval(b), net_for(dim));
      const auto dual = hausdorff(SupportEval(c_dual(a)), SupportEval(c_dual(b)), net_for(dim));
      EXPECT_LE(std::abs(direct.value - dual.value), direct.error_bound + dual.error_bound);
      EXPECT_NEAR(direct.value, dual.value, 1e-6);
    }
  }
}

TEST(Combine, EndpointsAndDualityCommute) {
  BodyFactory factory(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = factory.body(2), b = factory.body(2);
    const double lambda = factory.uniform(0, 1);
    EXPECT_LE(max_net_gap(SupportEval(combine(0.0, a, b)), SupportEval(a), net2()), 1e-12);
    EXPECT_LE(max_net_gap(SupportEval(combine(1.0, a, b)), SupportEval(b), net2()), 1e-12);
    EXPECT_LE(max_net_gap(SupportEval(c_dual(combine(lambda, a, b))),
                          SupportEval(combine(lambda, c_dual(a), c_dual(b))), net2()),
              2e-6);
  }
  EXPECT_THROW(combine(1.5, lens(), lens()), Error);
  EXPECT_THROW(combine(-0.1, lens(), lens()), Error);
}

TEST(Combine, MinkowskiSegmentsAreGeodesics) {
  BodyFactory factory(2, 6);
  for (int trial = 0; trial < 8; ++trial) {
    const auto a = factory.body(2), b = factory.body(2);
    const SupportEval ka(a), kb(b);
    const auto full = hausdorff(ka, kb, net2());
    for (double lambda : {0.25, 0.5, 0.8}) {
      const auto part = hausdorff(SupportEval(combine(lambda, a, b)), ka, net2());
      EXPECT_LE(std::abs(part.value - lambda * full.value), part.error_bound + lambda * full.error_bound);
      EXPECT_NEAR(part.value, lambda * full.value, 1e-6);
    }
    const double l = 0.2, m = 0.7;
    const auto between = hausdorff(SupportEval(combine(l, a, b)), SupportEval(combine(m, a, b)), net2());
    EXPECT_NEAR(between.value, (m - l) * full.value, 1e-6);
  }
}

TEST(Motion, IdentityTranslationAndPushDown) {
  const auto body = lens();
  const SupportEval k(body);
  EXPECT_LE(max_net_gap(SupportEval(apply_motion(RigidMotion::identity(2), body)), k, net2()), 1e-12);
  const Vector t = make_vector({0.7, -0.4});
  const SupportEval shifted(apply_motion(RigidMotion{Matrix::Identity(2, 2), t}, body));
  for (const auto& u : net2().directions) EXPECT_NEAR(shifted.support(u), k.support(u) + t.dot(u), 1e-12);

  BodyFactory factory(3, 77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = factory.motion();
    const auto moved = apply_motion(g, factory.body(2));
    EXPECT_LE(max_net_gap(SupportEval(moved), SupportEval(push_motions_into_leaves(moved)), net3()), 1e-9);
  }
}

TEST(Motion, PreservesHausdorffDistance) {
  BodyFactory factory(3, 78);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = factory.body(2), b = factory.body(2);
    const auto g = factory.motion();
    const auto before = hausdorff(SupportEval(a), SupportEval(b), net3());
    const auto after = hausdorff(SupportEval(apply_motion(g, a)), SupportEval(apply_motion(g, b)), net3());
    EXPECT_LE(std::abs(before.value - after.value), before.error_bound + after.error_bound);
  }
}

TEST(Motion, RejectsNonOrthogonalMatrix) {
  Matrix shear(2, 2);
  shear << 1, 0.5, 0, 1;
  EXPECT_THROW(apply_motion(RigidMotion{shear, Vector::Zero(2)}, lens()), Error);
}

// --- circumball, membership ---------------------------------------------------

TEST(Circumball, BallPointAndLens) {
  const Vector y = make_vector({1.0, -0.5});
  const auto ball = circumball(SupportEval(BallBodyExpr::unit_ball(y)), net2());
  EXPECT_NEAR((ball.ball.center - y).norm(), 0.0, 1e-9);
  EXPECT_NEAR(ball.ball.radius, 1.0, 1e-9);

  const auto point = circumball(SupportEval(BallBodyExpr::point(y)), net2());
  EXPECT_NEAR((point.ball.center - y).norm(), 0.0, 1e-12);
  EXPECT_NEAR(point.ball.radius, 0.0, 1e-12);

  const auto l = circumball(SupportEval(lens()), net2());
  EXPECT_NEAR((l.ball.center - make_vector({0.5, 0})).norm(), 0.0, 1e-9);
  EXPECT_NEAR(l.ball.radius, std::sqrt(3.0) / 2.0, 1e-9);
  EXPECT_LE(l.lower_bound, std::sqrt(3.0) / 2.0 + 1e-12);
  EXPECT_GE(l.upper_bound, std::sqrt(3.0) / 2.0);
}

TEST(Circumball, RadiusNeverExceedsOne) {
  for (int dim : {2, 3}) {
    BodyFactory factory(dim, 300 + dim);
    for (int trial = 0; trial < 20; ++trial) {
      const SupportEval k(factory.body(3));
      const auto c = circumball(k, net_for(dim));
      EXPECT_LE(c.ball.radius, 1.0 + 1e-6);
      EXPECT_TRUE(contains_point(k, c.ball.center, net_for(dim)).inside);
    }
  }
}

TEST(Circumball, UnitOutradiusOnlyForBalls) {
  BodyFactory factory(2, 9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = factory.motion();
    const auto body = apply_motion(g, c_dual(BallBodyExpr::point(factory.uniform_vector(-1, 1))));
    const SupportEval k(body);
    const auto c = circumball(k, net2());
    ASSERT_GE(c.ball.radius, 1.0 - 1e-6);
    const SupportEval fitted(BallBodyExpr::unit_ball(c.ball.center));
    EXPECT_LE(max_net_gap(k, fitted, net2()), 1e-6);
  }
}

TEST(Contains, ExactAndNetTestsAgree) {
  const auto body = BallBodyExpr::generators({make_vector({0.2, 0.1})});
  const SupportEval k(body);
  EXPECT_TRUE(contains_point(k, make_vector({0.2, 0.1}), net2()).inside);
  EXPECT_FALSE(contains_point(k, make_vector({0.2 + 1.001, 0.1}), net2()).inside);

  BodyFactory factory(2, 10);
  for (int trial = 0; trial < 10; ++trial) {
    const SupportEval g(factory.generator_body());
    for (int s = 0; s < 30; ++s) {
      const Vector y = factory.uniform_vector(-2.5, 2.5);
      const auto exact = contains_point(g, y, net2());
      const auto sampled = contains_point_net(g, y, net2());
      // The net test can only err on the inside, by at most the Lipschitz slack.
      if (exact.inside) {
        EXPECT_TRUE(sampled.inside);
      }
      if (sampled.inside && !exact.inside) {
        EXPECT_GT(exact.margin, -g.norm_bound() * net2().mesh);
      }
    }
  }
}

// --- reconstruction ----------------------------------------------------------

TEST(Reconstruct, SingleProbeIsABall) {
  const Vector x = make_vector({0.5, 0.5});
  const auto k = reconstruct({Probe{x, 0.75}}, net2());
  for (const auto& u : net2().directions) EXPECT_NEAR(k.support(u), x.dot(u) + 0.75, 1e-12);
}

TEST(Reconstruct, UnitBallFromGridProbes) {
  const SupportEval b(BallBodyExpr::unit_ball(make_vector({0, 0})));
  std::vector<Probe> probes;
  for (double px = -2; px <= 2 + 1e-9; px += 0.5) {
    for (double py = -2; py <= 2 + 1e-9; py += 0.5) {
      const Vector x = make_vector({px, py});
      probes.push_back({x, distance_to_point(b, x, net2()).value});
    }
  }
  for (const auto& p : probes) EXPECT_NEAR(p.distance, 1.0 + p.x.norm(), 1e-9);
  const auto hat = reconstruct(probes, net2());
  for (const auto& u : net2().directions) EXPECT_GE(hat.support(u), b.support(u) - b.tol());
  EXPECT_LE(hausdorff(b, hat, net2()).value, 0.05);
}

TEST(Reconstruct, PointShrinksWithRefinement) {
  const Vector p = make_vector({0.3, -0.2});
  const SupportEval k(BallBodyExpr::point(p));
  double previous = 1e9;
  for (double spacing : {1.0, 0.5, 0.25}) {
    std::vector<Probe> probes;
    for (double px = -2; px <= 2 + 1e-9; px += spacing)
      for (double py = -2; py <= 2 + 1e-9; py += spacing) {
        const Vector x = make_vector({px, py});
        probes.push_back({x, distance_to_point(k, x, net2()).value});
      }
    const auto hat = reconstruct(probes, net2());
    EXPECT_TRUE(contains_point(hat, p, net2()).inside);
    const double d = hausdorff(k, hat, net2()).value;
    EXPECT_LE(d, previous + 1e-9);
    previous = d;
  }
  EXPECT_LE(previous, 0.05);
}

TEST(Reconstruct, RejectsEmptyIntersection) {
  try {
    reconstruct({Probe{make_vector({0, 0}), 0.5}, Probe{make_vector({2, 0}), 0.5}}, net2());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyBody);
    EXPECT_NE(std::string(e.what()).find("empty reconstruction"), std::string::npos);
  }
}

// --- closed-form distance identities ---------------------------------------

TEST(Hausdorff, PointToBallIsAtLeastOne) {
  BodyFactory factory(3, 44);
  for (int trial = 0; trial < 40; ++trial) {
    const Vector x = factory.uniform_vector(-2, 2);
    const Vector y = trial % 5 == 0 ? x : factory.uniform_vector(-2, 2);
    const auto d = hausdorff(SupportEval(BallBodyExpr::point(x)), SupportEval(BallBodyExpr::unit_ball(y)), net3());
    EXPECT_GE(d.value, 1.0 - d.error_bound);
    EXPECT_NEAR(d.value, 1.0 + (x - y).norm(), d.error_bound);
    if (d.value <= 1.0 + 1e-9) {
      EXPECT_LE((x - y).norm(), 1e-9);
    }
  }
}
