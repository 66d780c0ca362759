// ballbody: batch front end. Reads body and map documents (files or "-" for
// stdin), writes one JSON report per invocation to stdout or --out.
// Exit codes: 0 ok, 2 parse, 3 invariant, 4 not an isometry, 5 resolution.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ballbody/acceptance.hpp"
#include "ballbody/body.hpp"
#include "ballbody/error.hpp"
#include "ballbody/io.hpp"
#include "ballbody/isometry.hpp"
#include "ballbody/planar.hpp"
#include "ballbody/raster.hpp"

using namespace ballbody;

namespace {

struct RunConfig {
  int dim = 2;
  bool dim_given = false;
  double mesh = 0.0;  // 0: per-dimension default
  double tol = kDefaultSupportTol;
  std::uint64_t seed = 1;
  bool oracle = false;
  double cell = 0.01;
  std::string out = "-";

  double mesh_for(int n) const { return mesh > 0 ? mesh : default_mesh(n); }
};

OrderedJson vec(const Vector& v) {
  OrderedJson out = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

OrderedJson vec(const Point2& p) { return OrderedJson::array({p.x(), p.y()}); }

OrderedJson motion(const RigidMotion& g) {
  OrderedJson rows = OrderedJson::array();
  for (Eigen::Index r = 0; r < g.rotation.rows(); ++r) rows.push_back(vec(Vector(g.rotation.row(r).transpose())));
  return {{"rotation", rows}, {"translation", vec(g.translation)}};
}

OrderedJson distance(const HausdorffResult& d) {
  return {{"value", d.value}, {"error_bound", d.error_bound}, {"lower", d.lower()}, {"upper", d.upper()},
          {"direction", vec(d.direction)}};
}

class Cli {
 public:
  explicit Cli(RunConfig& cfg) : cfg_(cfg) {}

  BallBodyExpr body(const std::string& path) {
    auto k = body_from_json(read_document(path));
    settle_dim(k.dim(), path);
    return k;
  }

  // The first document fixes the dimension unless --dim was given.
  void settle_dim(int n, const std::string& source) {
    if (!fixed_) {
      if (cfg_.dim_given && n != cfg_.dim) {
        throw Error(ErrorKind::DimensionMismatch, source + " has dimension " + std::to_string(n) + " but --dim is " +
                                                      std::to_string(cfg_.dim));
      }
      cfg_.dim = n;
      fixed_ = true;
    } else if (n != cfg_.dim) {
      throw Error(ErrorKind::DimensionMismatch, source + " has dimension " + std::to_string(n) + ", expected " +
                                                    std::to_string(cfg_.dim));
    }
  }

  const SphereNet& net() {
    if (!net_) net_ = make_sphere_net(cfg_.dim, cfg_.mesh_for(cfg_.dim));
    return *net_;
  }

  void require_planar_oracle() const {
    if (cfg_.dim != 2) throw Error(ErrorKind::InvalidArgument, "the raster oracle is planar only");
  }

 private:
  RunConfig& cfg_;
  bool fixed_ = false;
  std::optional<SphereNet> net_;
};

OrderedJson config_json(const RunConfig& c, const std::string& command) {
  OrderedJson mesh;
  if (command == "selftest") {
    mesh = c.mesh > 0 ? OrderedJson(c.mesh)
                      : OrderedJson{{"plane", acceptance::kPlaneMesh}, {"space", acceptance::kSpaceMesh}};
  } else {
    mesh = c.mesh_for(c.dim);
  }
  OrderedJson out{{"dim", c.dim}, {"mesh", mesh}, {"tol", c.tol}, {"seed", c.seed}, {"oracle", c.oracle}};
  if (c.oracle) out["cell"] = c.cell;
  return out;
}

void emit(const OrderedJson& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

OrderedJson classification(const IsometryClassification& r) {
  return {{"kind", to_string(r.kind)},
          {"motion", motion(r.motion)},
          {"residual", r.residual},
          {"error_bound", r.error_bound},
          {"defect", {{"estimate", r.defect.estimate}, {"lower", r.defect.lower}, {"upper", r.defect.upper},
                      {"worst_pair", r.defect.worst_pair}}},
          {"point_image_radius", r.point_image_radius},
          {"ball_image_radius", r.ball_image_radius},
          {"fit_residual", r.fit_residual},
          {"r_tol", r.r_tol},
          {"lattice_size", r.lattice_size}};
}

OrderedJson surjectivity_json(const SurjectivityReport& r) {
  OrderedJson degrees = OrderedJson::array();
  for (const auto& d : r.degrees) {
    degrees.push_back({{"radius", d.radius}, {"winding", d.winding}, {"min_norm", d.min_norm}, {"samples", d.samples}});
  }
  OrderedJson out{{"target", vec(r.target)},
                  {"epsilon_hat", r.epsilon_hat},
                  {"affine_fit", motion(r.affine_fit)},
                  {"fit_error", r.fit_error},
                  {"radius", r.radius},
                  {"radius_iterations", r.radius_iterations},
                  {"degrees", degrees},
                  {"fitted_winding", r.fitted_winding},
                  {"homotopy_min", r.homotopy_min},
                  {"preimage_found", r.preimage_found}};
  if (r.preimage_found) {
    out["preimage"] = vec(r.preimage);
    out["residual"] = r.residual;
  }
  out["verdict"] = to_string(r.verdict);
  if (r.witness) {
    out["witness"] = {{"hypothesis", r.witness->hypothesis}, {"location", vec(r.witness->location)},
                      {"size", r.witness->size},             {"min_residual", r.witness->min_residual},
                      {"oscillation", r.witness->oscillation}, {"detail", r.witness->detail}};
  }
  return out;
}

Vector parse_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Ball bodies: support-function kernel, raster oracle and isometry lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BALLBODY_VERSION);
  auto* dim_opt = app.add_option("--dim", cfg.dim, "ambient dimension")->check(CLI::Range(2, 64));
  app.add_option("--mesh", cfg.mesh, "sphere-net mesh (default 0.02 in the plane, 0.08 above)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "support tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for every randomized step");
  app.add_flag("--oracle", cfg.oracle, "cross-check against the raster oracle (planar only)");
  app.add_option("--cell", cfg.cell, "raster cell size for --oracle")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "report path, - for stdout");
  app.fallthrough();

  std::string a, b, c;
  std::vector<double> direction, target;
  double spacing = 0.5, radius = 3.0;
  std::vector<int> only;

  auto* dist = app.add_subcommand("dist", "Hausdorff distance of two bodies");
  dist->add_option("a", a, "body document")->required();
  dist->add_option("b", b, "body document")->required();

  auto* sup = app.add_subcommand("support", "support value and point in a direction");
  sup->add_option("body", a, "body document")->required();
  sup->add_option("--direction", direction, "direction (normalized before use)")->required()->delimiter(',');

  auto* cdc = app.add_subcommand("cdual-check", "check K^cc = K and h_K(u) + h_Kc(-u) = 1 on the net");
  cdc->add_option("body", a, "body document")->required();

  auto* circ = app.add_subcommand("circ", "circumball with certified radius bounds");
  circ->add_option("body", a, "body document")->required();

  auto* rec = app.add_subcommand("reconstruct", "rebuild a body from point distances");
  rec->add_option("input", a, "{\"probes\":[{\"x\":[..],\"distance\":d},..]} or a body to probe on a grid")->required();
  rec->add_option("--spacing", spacing, "grid spacing when probing a body")->check(CLI::PositiveNumber);
  rec->add_option("--radius", radius, "grid half-width when probing a body")->check(CLI::PositiveNumber);

  auto* geo = app.add_subcommand("geodesic-check", "additivity and point-midpoint check for a triple");
  geo->add_option("k0", a, "body document")->required();
  geo->add_option("k1", b, "body document")->required();
  geo->add_option("k2", c, "body document")->required();

  auto* cls = app.add_subcommand("classify", "classify a black-box map as gK or gK^c");
  cls->add_option("map", a, "map document")->required();

  auto* sur = app.add_subcommand("surjectivity", "preimage search and winding certificate for a planar map");
  sur->add_option("map", a, "planar map document")->required();
  sur->add_option("--target", target, "target point y")->required()->delimiter(',')->expected(2);

  auto* self = app.add_subcommand("selftest", "run the acceptance criteria");
  self->add_option("--only", only, "criterion ids")->check(CLI::Range(1, 12))->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.dim_given = dim_opt->count() > 0;

  Cli cli(cfg);
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    OrderedJson result;
    int status = 0;
    if (command == "dist") {
      const auto k = cli.body(a), t = cli.body(b);
      const SupportEval hk(k, cfg.tol), ht(t, cfg.tol);
      result = distance(hausdorff(hk, ht, cli.net()));
      if (cfg.oracle) {
        cli.require_planar_oracle();
        result["oracle_value"] = raster_hausdorff(rasterize(k, cfg.cell), rasterize(t, cfg.cell));
      }
    } else if (command == "support") {
      const auto k = cli.body(a);
      Vector u = parse_vector(direction);
      if (u.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "direction dimension differs from body");
      if (!(u.norm() > 0)) throw Error(ErrorKind::InvalidArgument, "direction must be nonzero");
      u.normalize();
      const auto v = SupportEval(k, cfg.tol).evaluate(u);
      result = {{"direction", vec(u)}, {"value", v.value}, {"point", vec(v.point)}};
    } else if (command == "cdual-check") {
      const auto k = cli.body(a);
      const SupportEval hk(k, cfg.tol), hkc(c_dual(k), cfg.tol), hkcc(c_dual(c_dual(k)), cfg.tol);
      double involution = 0.0, identity = 0.0;
      for (const auto& u : cli.net().directions) {
        const double h = hk.support(u);
        involution = std::max(involution, std::abs(hkcc.support(u) - h));
        identity = std::max(identity, std::abs(h + hkc.support(-u) - 1.0));
      }
      result = {{"directions", cli.net().size()},
                {"involution_deviation", involution},
                {"support_identity_deviation", identity},
                {"threshold", 2.0 * cfg.tol},
                {"pass", involution <= 2.0 * cfg.tol && identity <= 2.0 * cfg.tol}};
      if (cfg.oracle) {
        cli.require_planar_oracle();
        const auto raster = rasterize(k, cfg.cell);
        result["oracle_cdual_gap"] = raster_hausdorff(raster_cdual(raster), rasterize(c_dual(k), cfg.cell));
      }
      if (!result["pass"].get<bool>()) status = 3;
    } else if (command == "circ") {
      const auto k = cli.body(a);
      const auto cb = circumball(SupportEval(k, cfg.tol), cli.net());
      result = {{"center", vec(cb.ball.center)},
                {"radius", cb.ball.radius},
                {"lower_bound", cb.lower_bound},
                {"upper_bound", cb.upper_bound}};
      if (cfg.oracle) {
        cli.require_planar_oracle();
        const auto rb = raster_circumball(rasterize(k, cfg.cell));
        result["oracle_center"] = vec(rb.center);
        result["oracle_radius"] = rb.radius;
      }
    } else if (command == "reconstruct") {
      const Json doc = read_document(a);
      std::vector<Probe> probes;
      std::optional<SupportEval> source;
      if (doc.is_object() && doc.contains("probes")) {
        const Json& ps = doc["probes"];
        if (!ps.is_array() || ps.empty()) io_detail::fail("$/probes", "expected a nonempty array");
        for (std::size_t i = 0; i < ps.size(); ++i) {
          const std::string where = "$/probes/" + std::to_string(i);
          Probe p{io_detail::vector(io_detail::field(ps[i], "x", where), where + "/x"),
                  io_detail::number(io_detail::field(ps[i], "distance", where), where + "/distance")};
          cli.settle_dim(static_cast<int>(p.x.size()), where);
          probes.push_back(std::move(p));
        }
      } else {
        const auto k = body_from_json(doc);
        cli.settle_dim(k.dim(), a);
        source.emplace(k, cfg.tol);
        for (const auto& x : lattice(cfg.dim, radius, spacing)) {
          probes.push_back({x, distance_to_point(*source, x, cli.net()).value});
        }
      }
      const auto khat = reconstruct(probes, cli.net(), cfg.tol);
      OrderedJson balls = OrderedJson::array();
      for (std::size_t i = 0; i < probes.size(); ++i) {
        balls.push_back({{"center", vec(probes[i].x)}, {"radius", probes[i].distance}});
      }
      result = {{"probes", probes.size()}, {"balls", balls}};
      const auto cb = circumball(khat, cli.net());
      result["circumball"] = {{"center", vec(cb.ball.center)}, {"radius", cb.ball.radius}};
      if (source) result["distance_to_source"] = distance(hausdorff(*source, khat, cli.net()));
    } else if (command == "geodesic-check") {
      const auto k0 = cli.body(a), k1 = cli.body(b), k2 = cli.body(c);
      const auto r = geodesic_midpoint_check(k0, k1, k2, cli.net(), 1e-3, cfg.tol);
      result = {{"d01", distance(r.d01)}, {"d12", distance(r.d12)}, {"d02", distance(r.d02)},
                {"r0", r.r0},             {"r1", r.r1},             {"r2", r.r2},
                {"gap", r.gap},           {"tolerance", r.tolerance}, {"status", to_string(r.status)}};
      if (r.status == GeodesicStatus::Violation) status = 3;
    } else if (command == "classify") {
      const Json doc = read_document(a);
      if (is_planar_map(doc)) throw Error(ErrorKind::InvalidArgument, "planar maps act on points; use surjectivity");
      const auto t = map_from_json(doc, cfg.dim);
      ClassifyConfig cc;
      cc.mesh = cfg.mesh;
      cc.tol = cfg.tol;
      cc.seed = cfg.seed;
      result = classification(classify_isometry(t, cc));
    } else if (command == "surjectivity") {
      if (cfg.dim_given && cfg.dim != 2) throw Error(ErrorKind::DimensionMismatch, "surjectivity is planar only");
      const auto f = planar_map_from_json(read_document(a));
      SurjectivityConfig sc;
      sc.seed = cfg.seed;
      result = surjectivity_json(surjectivity_probe_planar(f, Point2(target[0], target[1]), sc));
    } else if (command == "selftest") {
      AcceptanceConfig ac;
      ac.seed = cfg.seed;
      ac.mesh = cfg.mesh;
      ac.tol = cfg.tol;
      OrderedJson criteria = OrderedJson::array();
      int failed = 0, vacuous = 0;
      for (const auto& r : run_acceptance(ac, only, [](const CriterionResult& r) {
             std::fprintf(stderr, "%s\n", format_result(r).c_str());
           })) {
        if (r.status == CriterionStatus::Fail) ++failed;
        if (r.status == CriterionStatus::Vacuous) ++vacuous;
        criteria.push_back({{"id", r.id}, {"name", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}});
      }
      result = {{"criteria", criteria}, {"failed", failed}, {"vacuous", vacuous}};
      if (failed > 0) status = 1;
    }
    OrderedJson report{{"tool", "ballbody"}, {"version", BALLBODY_VERSION}, {"command", command},
                       {"config", config_json(cfg, command)}, {"result", result}};
    emit(report, cfg.out);
    return status;
  } catch (const Error& e) {
    std::fprintf(stderr, "ballbody %s: %s\n", command.c_str(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ballbody %s: %s\n", command.c_str(), e.what());
    return 3;
  }
}
