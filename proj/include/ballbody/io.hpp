#pragma once

// JSON documents for bodies, maps and motions.
//
// Bodies:
//   {"type":"generators","centers":[[...],...]}
//   {"type":"point","at":[...]}             {"type":"ball","center":[...]}
//   {"type":"cdual","of":<body>}
//   {"type":"combine","lambda":0.5,"a":<body>,"b":<body>}
//   {"type":"motion","rotation":[[...],...],"translation":[...],"of":<body>}
// Maps on bodies:
//   {"map":"identity"}  {"map":"cdual"}  {"map":"motion","rotation":...,"translation":...}
//   {"map":"compose","of":[<outermost>,...,<innermost>]}
//   {"map":"constant","body":<body>}  {"map":"scale","factor":2}
// Planar maps:
//   {"map":"planar_rigid","angle":0.3,"reflect":false,"translation":[x,y]}
//   {"map":"planar_perturbed","amplitude":0.2,"seed":7}
//   {"map":"planar_radial_hole"}

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "ballbody/body.hpp"
#include "ballbody/error.hpp"
#include "ballbody/geometry.hpp"
#include "ballbody/isometry.hpp"
#include "ballbody/planar.hpp"

namespace ballbody {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Parses text; syntax errors carry the byte offset.
inline Json parse_document(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, source + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline Json read_document(const std::string& path) {
  if (path == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return parse_document(text, "stdin");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

namespace io_detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

inline Vector vector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], where + "/" + std::to_string(i));
  return v;
}

inline Matrix matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector(j[static_cast<std::size_t>(r)], where + "/" + std::to_string(r));
    if (row.size() != rows) {
      throw Error(ErrorKind::DimensionMismatch, where + ": rotation must be square");
    }
    m.row(r) = row.transpose();
  }
  return m;
}

inline std::string kind_of(const Json& j, const char* key, const std::string& where) {
  const Json& t = field(j, key, where);
  if (!t.is_string()) fail(where + "/" + key, "expected a string");
  return t.get<std::string>();
}

}  // namespace io_detail

inline RigidMotion motion_from_json(const Json& j, const std::string& where = "$") {
  using namespace io_detail;
  RigidMotion g{matrix(field(j, "rotation", where), where + "/rotation"),
                vector(field(j, "translation", where), where + "/translation")};
  g.validate(1e-9);
  return g;
}

inline BallBodyExpr body_from_json(const Json& j, const std::string& where = "$") {
  using namespace io_detail;
  const std::string type = kind_of(j, "type", where);
  if (type == "generators") {
    const Json& cs = field(j, "centers", where);
    if (!cs.is_array() || cs.empty()) fail(where + "/centers", "expected a nonempty array of points");
    std::vector<Vector> centers;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      centers.push_back(vector(cs[i], where + "/centers/" + std::to_string(i)));
    }
    return BallBodyExpr::generators(std::move(centers));
  }
  if (type == "point") return BallBodyExpr::point(vector(field(j, "at", where), where + "/at"));
  if (type == "ball") return BallBodyExpr::unit_ball(vector(field(j, "center", where), where + "/center"));
  if (type == "cdual") return c_dual(body_from_json(field(j, "of", where), where + "/of"));
  if (type == "combine") {
    return combine(number(field(j, "lambda", where), where + "/lambda"),
                   body_from_json(field(j, "a", where), where + "/a"),
                   body_from_json(field(j, "b", where), where + "/b"));
  }
  if (type == "motion") {
    return apply_motion(motion_from_json(j, where), body_from_json(field(j, "of", where), where + "/of"));
  }
  fail(where + "/type", "unknown body type \"" + type + "\"");
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Json motion_to_json(const RigidMotion& g) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < g.rotation.rows(); ++r) rows.push_back(vector_to_json(g.rotation.row(r).transpose()));
  return Json{{"rotation", rows}, {"translation", vector_to_json(g.translation)}};
}

/// Inverse of body_from_json for ball-body expressions.
inline Json body_to_json(const BallBodyExpr& k) {
  switch (k.kind()) {
    case NodeKind::Generators: {
      Json cs = Json::array();
      for (const auto& c : k.centers()) cs.push_back(vector_to_json(c));
      return Json{{"type", "generators"}, {"centers", cs}};
    }
    case NodeKind::CDual: return Json{{"type", "cdual"}, {"of", body_to_json(k.child())}};
    case NodeKind::Combine:
      return Json{{"type", "combine"}, {"lambda", k.lambda()}, {"a", body_to_json(k.child())}, {"b", body_to_json(k.second())}};
    case NodeKind::Motion: {
      Json out = motion_to_json(k.rigid_motion());
      out["type"] = "motion";
      out["of"] = body_to_json(k.child());
      return out;
    }
    case NodeKind::Balls:
    case NodeKind::Dilate: break;
  }
  throw Error(ErrorKind::InvalidArgument, "body has no document form");
}

inline bool is_planar_map(const Json& j) {
  if (!j.is_object() || !j.contains("map") || !j["map"].is_string()) return false;
  return j["map"].get<std::string>().rfind("planar_", 0) == 0;
}

/// Map on bodies of dimension `dim`.
inline BlackBoxMap map_from_json(const Json& j, int dim, const std::string& where = "$") {
  using namespace io_detail;
  const std::string kind = kind_of(j, "map", where);
  auto check_dim = [&](int got) {
    if (got != dim) {
      throw Error(ErrorKind::DimensionMismatch, where + ": map has dimension " + std::to_string(got) +
                                                    " but the run uses " + std::to_string(dim));
    }
  };
  if (kind == "identity") return identity_map(dim);
  if (kind == "cdual") return cdual_map(dim);
  if (kind == "motion") {
    auto g = motion_from_json(j, where);
    check_dim(g.dim());
    return motion_map(std::move(g));
  }
  if (kind == "compose") {
    const Json& of = field(j, "of", where);
    if (!of.is_array() || of.empty()) fail(where + "/of", "expected a nonempty array of maps");
    std::vector<BlackBoxMap> maps;
    for (std::size_t i = 0; i < of.size(); ++i) maps.push_back(map_from_json(of[i], dim, where + "/of/" + std::to_string(i)));
    return compose_maps(std::move(maps));
  }
  if (kind == "constant") {
    auto k = body_from_json(field(j, "body", where), where + "/body");
    check_dim(k.dim());
    return constant_map(std::move(k));
  }
  if (kind == "scale") return scale_map(dim, number(field(j, "factor", where), where + "/factor"));
  fail(where + "/map", "unknown or non-body map \"" + kind + "\"");
}

inline PlanarMap planar_map_from_json(const Json& j, const std::string& where = "$") {
  using namespace io_detail;
  const std::string kind = kind_of(j, "map", where);
  if (kind == "planar_rigid") {
    const double angle = j.contains("angle") ? number(j["angle"], where + "/angle") : 0.0;
    bool reflect = false;
    if (j.contains("reflect")) {
      if (!j["reflect"].is_boolean()) fail(where + "/reflect", "expected a boolean");
      reflect = j["reflect"].get<bool>();
    }
    Point2 t = Point2::Zero();
    if (j.contains("translation")) {
      const Vector v = vector(j["translation"], where + "/translation");
      if (v.size() != 2) throw Error(ErrorKind::DimensionMismatch, where + "/translation: expected 2 entries");
      t = Point2(v[0], v[1]);
    }
    return planar_rigid(angle, reflect, t);
  }
  if (kind == "planar_perturbed") {
    const double a = number(field(j, "amplitude", where), where + "/amplitude");
    const Json& s = field(j, "seed", where);
    if (!s.is_number_integer()) fail(where + "/seed", "expected an integer");
    return planar_perturbed(a, s.get<std::uint64_t>());
  }
  if (kind == "planar_radial_hole") return planar_radial_hole();
  fail(where + "/map", "unknown planar map \"" + kind + "\"");
}

}  // namespace ballbody
