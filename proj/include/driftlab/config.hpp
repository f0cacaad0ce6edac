#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "driftlab/bilinear.hpp"
#include "driftlab/bounds.hpp"
#include "driftlab/rwab.hpp"
#include "json.hpp"

namespace driftlab {

enum class ExperimentKind {
  sat2,
  recolour,
  rlspd,
  rlspd_forgetting,
  rwab,
  synthetic_fair,
  synthetic_biased,
  synthetic_lazy,
};

std::string_view to_string(ExperimentKind k) noexcept;
ExperimentKind experiment_kind_from_string(std::string_view s);  // throws ConfigError("kind")

// Where a replication's problem instance comes from.
enum class InstanceMode { per_run, shared };

struct WalkParams {
  std::uint64_t b = 0;
  std::uint64_t x0 = 0;
  double p_up = 0.0;   // synthetic_biased
  double delta = 0.0;  // synthetic_lazy
};

struct Sat2Params {
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  std::optional<std::filesystem::path> dimacs;  // fixed instance, overrides n/m
  InstanceMode instance = InstanceMode::per_run;
};

struct RecolourParams {
  std::uint32_t n = 0;
  double edge_prob = 0.0;
  std::optional<std::filesystem::path> graph;  // fixed instance, overrides n/edge_prob
  InstanceMode instance = InstanceMode::per_run;
};

struct RlspdParams {
  bilinear::BilinearParams bilinear = bilinear::BilinearParams::make(2, 0.5, 0.5);
  bool forgetting = false;
  double A = 0.0;
  double B = 0.0;
};

struct RwabParams {
  std::uint64_t T = 0;
  std::uint64_t L = 0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  bandit::RwabOptions options;
};

using KindParams = std::variant<WalkParams, Sat2Params, RecolourParams, RlspdParams, RwabParams>;

struct ClassifyConfig {
  double n = 1.0;
  double c = 1.0;
  double delta = 1.0;
  double tolerance = 0.0;
};

struct AnalysisConfig {
  std::vector<double> tau_grid;
  std::vector<double> k_list;
  double confidence = 0.999;
  std::optional<BoundSpec> bound;
  std::uint32_t histogram_bins = 50;
  bool drift_bins = false;
  std::optional<ClassifyConfig> classify;
  std::vector<double> eta_grid;  // empty: default grid
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::synthetic_fair;
  KindParams params;
  std::uint64_t runs = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t cap = 0;  // unused by rwab (the horizon bounds every run)
  bool record_trajectories = false;
  std::uint32_t workers = 1;  // 0: one per hardware thread
  std::filesystem::path output_dir;
  AnalysisConfig analysis;
};

// Every parse/validation failure is a ConfigError whose field is the dotted
// JSON path (e.g. "params.alpha"). Relative instance paths resolve against
// `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
AnalysisConfig parse_analysis(const nlohmann::json& doc, const std::string& prefix = "analysis");
BoundSpec parse_bound_spec(const nlohmann::json& doc, const std::string& prefix = "bound");

// Reads and parses a JSON file. IoError when unreadable, ConfigError on bad JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const BoundSpec& spec);

}  // namespace driftlab
