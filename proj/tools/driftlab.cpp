// driftlab: run, re-analyse and tabulate drift experiments.
//
//   driftlab run <config.json>
//   driftlab analyze <samples.csv> <analysis.json> [--trajectories DIR] [--out FILE]
//   driftlab bounds <spec.json>
//
// Exit status: 0 ok, 1 a tail bound was violated, 2 bad configuration,
// 3 I/O failure, 4 malformed input file.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "driftlab/config.hpp"
#include "driftlab/error.hpp"
#include "driftlab/harness.hpp"

namespace {

namespace fs = std::filesystem;
using namespace driftlab;

int cmd_run(const fs::path& config_path) {
  const auto cfg = load_config(config_path);
  const auto res = run_experiment(cfg);
  std::cout << res.samples_csv.string() << '\n' << res.report_json.string() << '\n';
  if (res.histogram_csv) std::cout << res.histogram_csv->string() << '\n';
  if (!res.trajectory_files.empty()) {
    std::cout << (cfg.output_dir / "trajectories").string() << " (" << res.trajectory_files.size() << " files)\n";
  }
  return res.violated ? kExitViolation : kExitOk;
}

int cmd_analyze(const fs::path& samples, const fs::path& analysis_path, const std::optional<fs::path>& traj_dir,
                const std::optional<fs::path>& out) {
  auto doc = read_json_file(analysis_path);
  // a full experiment config is accepted too; only its analysis block is used
  if (doc.is_object() && doc.contains("analysis") && doc.contains("kind")) doc = doc["analysis"];
  const auto analysis = parse_analysis(doc);
  const auto report = analyze(samples, analysis, traj_dir);
  const auto text = report.dump(2) + "\n";
  if (out) {
    write_text_file(*out, text);
    std::cout << out->string() << '\n';
  } else {
    std::cout << text;
  }
  return report["violated"].get<bool>() ? kExitViolation : kExitOk;
}

int cmd_bounds(const fs::path& spec_path) {
  auto doc = read_json_file(spec_path);
  if (!doc.is_object()) throw ConfigError("<root>", "must be a JSON object");
  if (!doc.contains("tau_grid")) throw ConfigError("tau_grid", "missing required field");
  const auto grid_doc = doc["tau_grid"];
  doc.erase("tau_grid");
  std::vector<double> grid;
  if (!grid_doc.is_array()) throw ConfigError("tau_grid", "must be an array of numbers");
  for (const auto& v : grid_doc) {
    if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError("tau_grid", "entries must be positive numbers");
    grid.push_back(v.get<double>());
  }
  const auto spec = parse_bound_spec(doc, "");
  std::cout << bounds_csv(spec, grid);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-analysis experiment runner"};
  app.require_subcommand(1);

  fs::path config_path;
  auto* run = app.add_subcommand("run", "run an experiment config and write its artifacts");
  run->add_option("config", config_path, "experiment config (JSON)")->required();

  fs::path samples_path, analysis_path;
  std::optional<fs::path> traj_dir, out_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "recompute the report of a stored samples.csv");
  analyze_cmd->add_option("samples", samples_path, "samples CSV")->required();
  analyze_cmd->add_option("analysis", analysis_path, "analysis block (JSON)")->required();
  analyze_cmd->add_option("--trajectories", traj_dir, "directory of run_<id>.csv trajectories");
  analyze_cmd->add_option("-o,--out", out_path, "write the report here instead of stdout");

  fs::path spec_path;
  auto* bounds = app.add_subcommand("bounds", "print tau,bound rows for a bound spec");
  bounds->add_option("spec", spec_path, "bound spec with tau_grid (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*analyze_cmd) return cmd_analyze(samples_path, analysis_path, traj_dir, out_path);
    if (*bounds) return cmd_bounds(spec_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
