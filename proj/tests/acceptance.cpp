// Prints one line per acceptance criterion and exits nonzero if any fails.

#include <CLI11.hpp>

#include <cstdio>
#include <vector>

#include "ballbody/acceptance.hpp"

int main(int argc, char** argv) {
  ballbody::AcceptanceConfig config;
  std::vector<int> only;
  CLI::App app{"ballbody acceptance suite"};
  app.add_option("--seed", config.seed, "base seed for every criterion");
  app.add_option("--mesh", config.mesh, "sphere-net mesh override (0 keeps per-dimension defaults)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", config.tol, "support tolerance")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criterion ids to run")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  ballbody::run_acceptance(config, only, [&](const ballbody::CriterionResult& r) {
    if (r.status == ballbody::CriterionStatus::Fail) ++failed;
    std::printf("%s\n", ballbody::format_result(r).c_str());
    std::fflush(stdout);
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
