#include <gtest/gtest.h>

#include <string>

#include "ballbody/io.hpp"
#include "ballbody/random.hpp"

using namespace ballbody;

namespace {

ErrorKind kind_of_failure(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Documents, SyntaxErrorsReportBytePosition) {
  try {
    // The second comma is the 43rd byte.
    parse_document(R"({"type": "generators", "centers": [[0, 0],, ]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("at byte 43"), std::string::npos) << e.what();
  }
}

TEST(Documents, SchemaErrorsNameThePath) {
  const auto j = parse_document(R"({"type":"combine","lambda":0.5,"a":{"type":"ball","center":[0,0]},"b":{"type":"cdual"}})");
  try {
    body_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("$/b"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("\"of\""), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of_failure([] { body_from_json(parse_document(R"({"type":"blob"})")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of_failure([] { body_from_json(parse_document(R"({"type":"generators","centers":[[0,"x"]]})")); }),
            ErrorKind::Parse);
}

TEST(Documents, InvariantViolationsAreNotParseErrors) {
  EXPECT_EQ(kind_of_failure([] {
              body_from_json(parse_document(R"({"type":"generators","centers":[[0,0],[3,0]]})"));
            }),
            ErrorKind::EmptyBody);
  EXPECT_EQ(kind_of_failure([] {
              body_from_json(parse_document(R"({"type":"generators","centers":[[0,0],[0,0,0]]})"));
            }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of_failure([] {
              body_from_json(parse_document(
                  R"({"type":"motion","rotation":[[1,1],[0,1]],"translation":[0,0],"of":{"type":"ball","center":[0,0]}})"));
            }),
            ErrorKind::InvalidArgument);
}

TEST(Documents, BodiesRoundTrip) {
  BodyFactory f(3, 12);
  const auto net = make_sphere_net(3, 0.2);
  for (int i = 0; i < 10; ++i) {
    const auto k = f.body(3);
    const auto back = body_from_json(parse_document(body_to_json(k).dump()));
    for (const auto& u : net.directions) EXPECT_DOUBLE_EQ(SupportEval(back).support(u), SupportEval(k).support(u));
  }
}

TEST(Documents, ShorthandBodies) {
  const auto p = body_from_json(parse_document(R"({"type":"point","at":[1,2]})"));
  const auto b = body_from_json(parse_document(R"({"type":"ball","center":[1,2]})"));
  const Vector u = make_vector({0.6, 0.8});
  EXPECT_NEAR(SupportEval(p).support(u), 2.2, 1e-9);
  EXPECT_NEAR(SupportEval(b).support(u), 3.2, 1e-9);
}

TEST(Documents, ComposedMapAppliesInMathematicalOrder) {
  const auto j = parse_document(R"({"map":"compose","of":[
      {"map":"motion","rotation":[[0,-1],[1,0]],"translation":[2,0]},
      {"map":"cdual"}]})");
  const auto t = map_from_json(j, 2);
  const auto k = BallBodyExpr::generators({make_vector({0, 0}), make_vector({0.5, 0})});
  RigidMotion g{Matrix(2, 2), make_vector({2, 0})};
  g.rotation << 0, -1, 1, 0;
  const auto net = make_sphere_net(2, 0.05);
  EXPECT_LE(hausdorff(SupportEval(t(k)), SupportEval(apply_motion(g, c_dual(k))), net).value, 1e-9);
}

TEST(Documents, MapDimensionMustMatchRun) {
  const auto j = parse_document(R"({"map":"motion","rotation":[[1,0],[0,1]],"translation":[0,0]})");
  EXPECT_EQ(kind_of_failure([&] { map_from_json(j, 3); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of_failure([] { map_from_json(parse_document(R"({"map":"warp"})"), 2); }), ErrorKind::Parse);
}

TEST(Documents, PlanarMaps) {
  EXPECT_TRUE(is_planar_map(parse_document(R"({"map":"planar_radial_hole"})")));
  EXPECT_FALSE(is_planar_map(parse_document(R"({"map":"cdual"})")));
  const auto f = planar_map_from_json(
      parse_document(R"({"map":"planar_rigid","angle":1.5707963267948966,"translation":[1,0]})"));
  EXPECT_NEAR((f(Point2(1, 0)) - Point2(1, 1)).norm(), 0.0, 1e-12);
  const auto a = planar_map_from_json(parse_document(R"({"map":"planar_perturbed","amplitude":0.2,"seed":7})"));
  const auto b = planar_perturbed(0.2, 7);
  EXPECT_EQ(a(Point2(0.3, -1.1)), b(Point2(0.3, -1.1)));
  EXPECT_EQ(kind_of_failure([] { planar_map_from_json(parse_document(R"({"map":"planar_perturbed","amplitude":0.2})")); }),
            ErrorKind::Parse);
}
