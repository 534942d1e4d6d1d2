#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "isospec/experiments.hpp"
#include "isospec/numkit.hpp"

using namespace isospec;
using namespace isospec::experiments;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const nlohmann::json& check_named(const RunReport& r, const std::string& name) {
  for (const auto& c : r.report["checks"])
    if (c["name"] == name) return c;
  FAIL("missing check " << name);
  static nlohmann::json none;
  return none;
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("isospec-test-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Every golden file must be reproduced byte for byte.
void compare_with_golden(const RunReport& r, const std::string& name) {
  const fs::path dir = fs::path(ISOSPEC_GOLDEN_DIR) / name;
  REQUIRE(fs::exists(dir));
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string file = entry.path().filename().string();
    INFO(name << "/" << file);
    if (file == "report.json") {
      CHECK(r.report.dump(2) + "\n" == slurp(entry.path()));
    } else {
      REQUIRE(r.files.count(file) == 1);
      CHECK(r.files.at(file) == slurp(entry.path()));
    }
    ++compared;
  }
  CHECK(compared >= 3);
}

}  // namespace

TEST_CASE("catalog and descriptions") {
  CHECK(catalog().size() >= 9);
  const std::string hopf = describe("sphere7-ex410");
  CHECK(hopf.find("Hopf") != std::string::npos);
  CHECK(hopf.find("A^2 = -Id") != std::string::npos);
  CHECK(describe("ball8-ex410-scaled").find("support condition") != std::string::npos);
  CHECK_THROWS_AS(describe("sphere5-nothing"), Error);
}

TEST_CASE("defaults per experiment") {
  CHECK(default_config("sphere9-ex46").degree == 2);
  CHECK(default_config("sphere7-ex410").degree == 3);
  CHECK(default_config("ball10-ex46").dirichlet_degree == 4);
  CHECK(default_config("sphere9-ex46").psi == std::vector<double>{2.0, -1.0});
  CHECK(default_config("ball8-ex410").psi == std::vector<double>{1.0, 1.0});
}

TEST_CASE("config JSON: overlay, round trip and rejection") {
  const ExperimentConfig base = default_config("sphere9-ex46");
  const auto c = config_from_json({{"degree", 1}, {"seed", 11}, {"hbar", {1.0, 0.1}}}, base);
  CHECK(c.degree == 1);
  CHECK(c.seed == 11);
  CHECK(c.hbar.size() == 2);
  CHECK(c.rel_tol == base.rel_tol);
  const auto back = config_from_json(config_to_json(c), base);
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK_THROWS_AS(config_from_json({{"degre", 2}}, base), Error);
  CHECK_THROWS_AS(config_from_json({{"schema", "isospec.config/0"}}, base), Error);
  CHECK_THROWS_AS(config_from_json({{"degree", "two"}}, base), Error);
  ExperimentConfig bad = base;
  bad.rel_tol = -1;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = base;
  bad.hbar = {};
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("sphere9-ex46 passes, is deterministic and matches the golden files") {
  const ExperimentConfig cfg = default_config("sphere9-ex46");
  const RunReport a = run(cfg);
  CHECK(a.pass);
  CHECK(check_named(a, "laplace-sphere")["max_relative_gap"].get<double>() <= 1e-8);
  for (const auto& c : a.report["checks"]) {
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("mode"));
  }
  const RunReport b = run(cfg);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.files == b.files);
  compare_with_golden(a, "sphere9-ex46");
}

TEST_CASE("so14-group matches the golden files") {
  const RunReport r = run(default_config("so14-group"));
  CHECK(r.pass);
  compare_with_golden(r, "so14-group");
}

TEST_CASE("perturbed run fails") {
  ExperimentConfig cfg = default_config("sphere9-ex46");
  cfg.perturb = 0.1;
  const RunReport r = run(cfg);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(check_named(r, "isospectral-maps")["pass"].get<bool>());
  CHECK_FALSE(check_named(r, "schrodinger-sphere-h0")["pass"].get<bool>());
}

TEST_CASE("outputs are written atomically and identically") {
  ExperimentConfig cfg = default_config("sphere9-ex46");
  const RunReport r = run(cfg);
  const fs::path d1 = scratch_dir("a"), d2 = scratch_dir("b");
  cfg.out_dir = d1.string();
  write_outputs(r, cfg);
  cfg.out_dir = d2.string();
  write_outputs(r, cfg);
  write_outputs(r, cfg);  // overwrite in place
  int files = 0;
  for (const auto& e : fs::directory_iterator(d1 / "sphere9-ex46")) {
    const std::string name = e.path().filename().string();
    CHECK(name.find(".tmp") == std::string::npos);
    if (name != "timing.json") CHECK(slurp(e.path()) == slurp(d2 / "sphere9-ex46" / name));
    ++files;
  }
  CHECK(files == static_cast<int>(r.files.size()) + 2);
  const std::string csv = slurp(d1 / "sphere9-ex46" / "spectra_laplace-sphere_a.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("write_file_atomic replaces content") {
  const fs::path d = scratch_dir("atomic");
  const std::string p = (d / "x.txt").string();
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(slurp(p) == "two");
  CHECK_THROWS_AS(write_file_atomic((d / "missing" / "x.txt").string(), "z"), Error);
  fs::remove_all(d);
}
