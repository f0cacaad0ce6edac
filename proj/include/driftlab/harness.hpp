#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/bilinear.hpp"
#include "driftlab/config.hpp"
#include "driftlab/rwab.hpp"
#include "driftlab/trajectory.hpp"
#include "json.hpp"

namespace driftlab {

// Process exit codes shared by the CLI subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFormat = 4;

// Stream id reserved for generating an instance shared by all replications.
inline constexpr std::uint64_t kSharedInstanceStream = std::uint64_t{1} << 63;

enum class SampleSchema {
  hitting_time,           // run_id,seed,stopping_time,censored
  hitting_time_quadrant,  // ... plus quadrant_at_end (rlspd kinds)
  regret,                 // run_id,seed,total_regret,swaps,mistakes,sub_eras
};

SampleSchema schema_for(ExperimentKind kind) noexcept;
std::string_view csv_header(SampleSchema schema) noexcept;

struct RunRecord {
  HittingTimeSample sample;
  double value = 0.0;  // stopping time, or total regret for the regret schema
  std::optional<Trajectory> trajectory;
  std::optional<bilinear::Quadrant> quadrant_at_end;
  std::uint64_t swaps = 0;
  std::uint64_t mistakes = 0;
  std::uint64_t sub_eras = 0;
};

// Runs every replication (replication i on stream (master_seed, i)) across
// cfg.workers threads and returns the records in run_id order.
std::vector<RunRecord> run_replications(const ExperimentConfig& cfg);

void write_samples(std::ostream& out, SampleSchema schema, std::span<const RunRecord> records);

struct LoadedSamples {
  SampleSchema schema = SampleSchema::hitting_time;
  std::vector<RunRecord> records;
};

// Throws FormatError carrying the offending line number.
LoadedSamples parse_samples_csv(std::string_view text);
Trajectory parse_trajectory_csv(std::string_view text);

// The analysis document: summary_table, tail_report, drift_estimate and
// step_tail_fit (each null when not applicable), plus a top-level `violated`.
nlohmann::json build_report(SampleSchema schema, std::span<const RunRecord> records, const AnalysisConfig& analysis);

struct ExperimentResult {
  std::filesystem::path samples_csv;
  std::filesystem::path report_json;
  std::optional<std::filesystem::path> histogram_csv;
  std::vector<std::filesystem::path> trajectory_files;
  nlohmann::json report;
  bool violated = false;
};

// Runs and writes samples.csv, report.json, histogram.csv and, when recorded,
// trajectories/run_<id>.csv under cfg.output_dir. IoError if unwritable.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Recomputes the report of a stored sample file. Trajectories, when a
// directory is given, are read from <dir>/run_<id>.csv where present.
nlohmann::json analyze(const std::filesystem::path& samples_csv, const AnalysisConfig& analysis,
                       const std::optional<std::filesystem::path>& trajectory_dir = std::nullopt);

// `tau,bound` rows, tau ascending.
std::string bounds_csv(const BoundSpec& spec, std::vector<double> tau_grid);

std::string read_text_file(const std::filesystem::path& path);  // IoError
void write_text_file(const std::filesystem::path& path, std::string_view text);  // IoError

}  // namespace driftlab
