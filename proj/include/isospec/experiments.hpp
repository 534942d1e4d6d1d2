#pragma once

// Named experiment pipelines: build the families, verify hypotheses, assemble
// and compare pencils or block operators, gather nonisometry evidence and emit
// deterministic reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace isospec::experiments {

struct ExperimentInfo {
  std::string name;
  std::string construction;  // what gets built
  std::string checks;        // what gets verified
};

const std::vector<ExperimentInfo>& catalog();
const ExperimentInfo& find_experiment(const std::string& name);
std::string describe(const std::string& name);

inline constexpr const char* kConfigSchema = "isospec.config/1";
inline constexpr const char* kReportSchema = "isospec.report/1";

struct ExperimentConfig {
  std::string name;
  int degree = -1;            // -1: experiment default
  int dirichlet_degree = -1;  // -1: degree + 2
  int quadrature_degree = 2;
  std::uint64_t seed = 7;
  std::int64_t samples = 1000000;
  std::string out_dir = "out";
  double perturb = 0.0;
  std::vector<double> hbar{1.0, 0.5, 0.25};
  std::vector<double> psi;  // empty: experiment default
  double rel_tol = 1e-8;
  double quadrature_tol = 1e-2;
  double group_tol = 1e-9;
  double nonisometry_threshold = 1e-3;
  int nonisometry_restarts = 40;
  int star_samples = 200;
  int group_samples = 1000;
  double c1 = 2.0;
  double c2 = 1.0;
};

/// Defaults for a named experiment (throws on unknown names).
ExperimentConfig default_config(const std::string& name);
/// Overlays the keys present in `j` on `base`; rejects unknown keys and bad values.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base);
nlohmann::json config_to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

struct RunReport {
  nlohmann::json report;  // deterministic
  nlohmann::json timing;  // wall-clock per stage
  std::map<std::string, std::string> files;  // spectra CSVs by file name
  bool pass = false;
};

RunReport run(const ExperimentConfig& cfg);

/// Writes <out>/<name>/report.json, timing.json and the CSVs, each atomically.
void write_outputs(const RunReport& r, const ExperimentConfig& cfg);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace isospec::experiments
