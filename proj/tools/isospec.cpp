// isospec: run, list and describe the isospectral constructions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "isospec/numkit.hpp"
#include "isospec/experiments.hpp"

namespace ex = isospec::experiments;

namespace {

int print_summary(const ex::RunReport& r, const std::string& dir) {
  for (const auto& c : r.report["checks"]) {
    const bool ok = c.value("pass", false);
    const bool required = c.value("required", true);
    std::printf("%-6s %s%s\n", ok ? "ok" : (required ? "FAIL" : "fail*"), c.value("name", "?").c_str(),
                required ? "" : " (not required)");
  }
  std::printf("%s: %s, outputs in %s\n", r.report.value("experiment", "?").c_str(), r.pass ? "PASS" : "FAIL",
              dir.c_str());
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct isospectral pairs and certify them numerically"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a named experiment and write its report");
  std::string name, config_path;
  std::optional<int> degree;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::string> out;
  std::optional<double> perturb;
  run->add_option("name", name, "Experiment name (see `isospec list`)")->required();
  run->add_option("--degree", degree, "Polynomial trial-space degree");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--samples", samples, "Quadrature sample count");
  run->add_option("--out", out, "Output directory");
  run->add_option("--perturb", perturb, "Perturb the second image of c' (negative control)");
  run->add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list", "List the experiment catalog");
  auto* describe = app.add_subcommand("describe", "Describe an experiment");
  std::string describe_name;
  describe->add_option("name", describe_name, "Experiment name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& e : ex::catalog()) std::printf("%s\n", e.name.c_str());
      return 0;
    }
    if (*describe) {
      std::cout << ex::describe(describe_name);
      return 0;
    }
    ex::ExperimentConfig cfg = ex::default_config(name);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw isospec::Error("config '" + config_path + "': " + e.what());
      }
      if (j.contains("experiment") && j["experiment"] != name)
        throw isospec::Error("config names experiment " + j["experiment"].dump() + " but the command line names " +
                             name);
      cfg = ex::config_from_json(j, cfg);
    }
    if (degree) {
      cfg.degree = *degree;
      cfg.dirichlet_degree = *degree + 2;
    }
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (out) cfg.out_dir = *out;
    if (perturb) cfg.perturb = *perturb;
    ex::validate(cfg);
    const ex::RunReport r = ex::run(cfg);
    ex::write_outputs(r, cfg);
    return print_summary(r, cfg.out_dir + "/" + cfg.name);
  } catch (const isospec::Error& e) {
    std::fprintf(stderr, "isospec: %s\n", e.what());
    return 2;
  }
}
