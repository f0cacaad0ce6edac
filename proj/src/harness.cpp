#include "driftlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "driftlab/error.hpp"
#include "driftlab/format.hpp"
#include "driftlab/recolour.hpp"
#include "driftlab/sat2.hpp"
#include "driftlab/stats.hpp"
#include "driftlab/walks.hpp"

namespace driftlab {

namespace fs = std::filesystem;
using nlohmann::json;

SampleSchema schema_for(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::rlspd:
    case ExperimentKind::rlspd_forgetting:
      return SampleSchema::hitting_time_quadrant;
    case ExperimentKind::rwab:
      return SampleSchema::regret;
    default:
      return SampleSchema::hitting_time;
  }
}

std::string_view csv_header(SampleSchema schema) noexcept {
  switch (schema) {
    case SampleSchema::hitting_time:
      return "run_id,seed,stopping_time,censored";
    case SampleSchema::hitting_time_quadrant:
      return "run_id,seed,stopping_time,censored,quadrant_at_end";
    case SampleSchema::regret:
      return "run_id,seed,total_regret,swaps,mistakes,sub_eras";
  }
  return "";
}

namespace {

// Instances fixed for the whole experiment (file input or `instance: shared`).
struct SharedInstances {
  std::optional<sat2::TwoCnfFormula> formula;
  std::optional<sat2::Assignment> witness;
  std::optional<recolour::ColorableGraph> graph;
};

SharedInstances prepare_shared(const ExperimentConfig& cfg) {
  SharedInstances shared;
  RngStream stream(cfg.master_seed, kSharedInstanceStream);
  if (const auto* s = std::get_if<Sat2Params>(&cfg.params)) {
    if (s->dimacs) {
      shared.formula = sat2::parse_dimacs(read_text_file(*s->dimacs));
    } else if (s->instance == InstanceMode::shared) {
      auto inst = sat2::generate_planted(stream, s->n, s->m);
      shared.formula = std::move(inst.formula);
      shared.witness = std::move(inst.witness);
    }
  }
  if (const auto* r = std::get_if<RecolourParams>(&cfg.params)) {
    if (r->graph) {
      shared.graph = recolour::parse_graph(read_text_file(*r->graph));
    } else if (r->instance == InstanceMode::shared) {
      shared.graph = recolour::generate_3colorable(stream, r->n, r->edge_prob);
    }
  }
  return shared;
}

RunRecord from_sample(HittingTimeSample s, std::optional<Trajectory> traj) {
  RunRecord rec;
  rec.value = static_cast<double>(s.stopping_time);
  rec.sample = s;
  rec.trajectory = std::move(traj);
  return rec;
}

RunRecord run_one(const ExperimentConfig& cfg, const SharedInstances& shared, std::uint64_t run_id) {
  RngStream stream(cfg.master_seed, run_id);
  const bool record = cfg.record_trajectories;
  HittingTimeSample s;
  s.run_id = run_id;
  s.seed_used = cfg.master_seed;

  switch (cfg.kind) {
    case ExperimentKind::synthetic_fair: {
      const auto& w = std::get<WalkParams>(cfg.params);
      auto r = simulate_fair_walk(stream, w.b, w.x0, cfg.cap, record);
      return from_sample(r.sample, std::move(r.trajectory));
    }
    case ExperimentKind::synthetic_biased: {
      const auto& w = std::get<WalkParams>(cfg.params);
      auto r = simulate_biased_walk(stream, w.b, w.x0, w.p_up, cfg.cap, record);
      return from_sample(r.sample, std::move(r.trajectory));
    }
    case ExperimentKind::synthetic_lazy: {
      const auto& w = std::get<WalkParams>(cfg.params);
      auto r = simulate_lazy_zero_drift_walk(stream, w.b, w.x0, w.delta, cfg.cap, record);
      return from_sample(r.sample, std::move(r.trajectory));
    }
    case ExperimentKind::sat2: {
      const auto& p = std::get<Sat2Params>(cfg.params);
      std::optional<sat2::PlantedInstance> own;
      if (!shared.formula) own = sat2::generate_planted(stream, p.n, p.m);
      const auto& formula = own ? own->formula : *shared.formula;
      const sat2::Assignment* witness = own ? &own->witness : (shared.witness ? &*shared.witness : nullptr);
      auto init = sat2::random_assignment(stream, formula.n);
      auto out = sat2::run_walk(formula, std::move(init), stream, cfg.cap, record ? witness : nullptr);
      if (!out.censored && !formula.satisfied_by(out.final)) {
        throw std::logic_error("sat2 walk stopped on an unsatisfying assignment");
      }
      s.stopping_time = out.iterations;
      s.censored = out.censored;
      return from_sample(s, std::move(out.trajectory));
    }
    case ExperimentKind::recolour: {
      const auto& p = std::get<RecolourParams>(cfg.params);
      std::optional<recolour::ColorableGraph> own;
      if (!shared.graph) own = recolour::generate_3colorable(stream, p.n, p.edge_prob);
      const auto& g = own ? *own : *shared.graph;
      auto init = recolour::random_colouring(stream, g.n());
      std::optional<recolour::PotentialSpec> potential;
      if (record) potential = recolour::PotentialSpec{};
      auto out = recolour::run_recolour(g, std::move(init), stream, cfg.cap, potential);
      if (!out.censored && recolour::seek_monochromatic_triangle(g, out.final)) {
        throw std::logic_error("recolour stopped with a monochromatic triangle left");
      }
      s.stopping_time = out.iterations;
      s.censored = out.censored;
      return from_sample(s, std::move(out.trajectory));
    }
    case ExperimentKind::rlspd:
    case ExperimentKind::rlspd_forgetting: {
      const auto& p = std::get<RlspdParams>(cfg.params);
      auto out = p.forgetting ? bilinear::run_forgetting(p.bilinear, p.A, p.B, stream, cfg.cap, record)
                              : bilinear::run_until_opt(p.bilinear, std::nullopt, stream, cfg.cap, record);
      s.stopping_time = out.iterations;
      s.censored = out.censored;
      auto rec = from_sample(s, std::move(out.trajectory));
      rec.quadrant_at_end = out.quadrant_at_end;
      return rec;
    }
    case ExperimentKind::rwab: {
      const auto& p = std::get<RwabParams>(cfg.params);
      const auto env = bandit::make_env(stream, p.T, p.L, p.mu1, p.mu2);
      auto options = p.options;
      options.record_per_round = options.record_per_round || record;
      auto ledger = bandit::run_rwab(env, stream, options);
      if (ledger.rounds != p.T || ledger.eras != p.L + 1) {
        throw std::logic_error("rwab ledger broke clock conservation or era count");
      }
      RunRecord rec;
      s.stopping_time = ledger.rounds;
      rec.sample = s;
      rec.value = ledger.total;
      rec.swaps = ledger.swaps;
      rec.mistakes = ledger.mistakes;
      rec.sub_eras = ledger.sub_eras;
      if (record) {
        Trajectory t;
        t.values = std::move(ledger.per_round);
        t.cap = p.T;
        rec.trajectory = std::move(t);
      }
      return rec;
    }
  }
  throw std::logic_error("run_one: unhandled kind");
}

json tail_json(const stats::TailReport& rep, const BoundSpec& spec) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"tau", r.tau},
                    {"empirical_survival", r.empirical_survival},
                    {"hoeffding_margin", r.margin},
                    {"hoeffding_upper", r.hoeffding_upper},
                    {"bound", r.bound},
                    {"violated", r.violated}});
  }
  return {{"confidence", rep.confidence},
          {"samples", rep.samples},
          {"censored_count", rep.censored},
          {"inclusive", rep.inclusive},
          {"bound", to_json(spec)},
          {"rows", rows}};
}

std::uint64_t parse_u64(std::string_view s, std::size_t line, std::string_view what) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw FormatError(line, std::string(what) + ": expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw FormatError(line, std::string(what) + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Calls f(line_number, line) for every line, CR stripped, trailing empty line dropped.
template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t lineno = 0, pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++lineno, line);
    pos = nl + 1;
  }
}

}  // namespace

std::vector<RunRecord> run_replications(const ExperimentConfig& cfg) {
  const SharedInstances shared = prepare_shared(cfg);
  std::vector<RunRecord> records(cfg.runs);
  std::uint64_t workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  workers = std::min<std::uint64_t>(workers, cfg.runs);

  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(cfg.runs);
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= cfg.runs || failed.load()) return;
      try {
        records[i] = run_one(cfg, shared, i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

void write_samples(std::ostream& out, SampleSchema schema, std::span<const RunRecord> records) {
  out << csv_header(schema) << '\n';
  for (const auto& r : records) {
    out << r.sample.run_id << ',' << r.sample.seed_used << ',';
    if (schema == SampleSchema::regret) {
      out << format_double(r.value) << ',' << r.swaps << ',' << r.mistakes << ',' << r.sub_eras << '\n';
      continue;
    }
    out << r.sample.stopping_time << ',' << (r.sample.censored ? 1 : 0);
    if (schema == SampleSchema::hitting_time_quadrant) {
      out << ',' << bilinear::to_string(r.quadrant_at_end.value_or(bilinear::Quadrant::at_optimum));
    }
    out << '\n';
  }
}

LoadedSamples parse_samples_csv(std::string_view text) {
  LoadedSamples loaded;
  bool have_header = false;
  std::size_t columns = 0;
  std::set<std::uint64_t> seen;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (!have_header) {
      bool known = false;
      for (const auto s : {SampleSchema::hitting_time, SampleSchema::hitting_time_quadrant, SampleSchema::regret}) {
        if (line == csv_header(s)) {
          loaded.schema = s;
          known = true;
        }
      }
      if (!known) throw FormatError(lineno, "unrecognised sample header '" + std::string(line) + "'");
      columns = split_csv(line).size();
      have_header = true;
      return;
    }
    if (line.empty()) return;
    const auto f = split_csv(line);
    if (f.size() != columns) {
      throw FormatError(lineno, "expected " + std::to_string(columns) + " fields, got " + std::to_string(f.size()));
    }
    RunRecord r;
    r.sample.run_id = parse_u64(f[0], lineno, "run_id");
    r.sample.seed_used = parse_u64(f[1], lineno, "seed");
    if (loaded.schema == SampleSchema::regret) {
      r.value = parse_real(f[2], lineno, "total_regret");
      r.swaps = parse_u64(f[3], lineno, "swaps");
      r.mistakes = parse_u64(f[4], lineno, "mistakes");
      r.sub_eras = parse_u64(f[5], lineno, "sub_eras");
    } else {
      r.sample.stopping_time = parse_u64(f[2], lineno, "stopping_time");
      r.value = static_cast<double>(r.sample.stopping_time);
      if (f[3] != "0" && f[3] != "1") throw FormatError(lineno, "censored: expected 0 or 1");
      r.sample.censored = f[3] == "1";
      if (loaded.schema == SampleSchema::hitting_time_quadrant) {
        bool ok = false;
        for (const auto q : {bilinear::Quadrant::at_optimum, bilinear::Quadrant::first, bilinear::Quadrant::second,
                             bilinear::Quadrant::third, bilinear::Quadrant::fourth}) {
          if (f[4] == bilinear::to_string(q)) {
            r.quadrant_at_end = q;
            ok = true;
          }
        }
        if (!ok) throw FormatError(lineno, "quadrant_at_end: unknown value '" + std::string(f[4]) + "'");
      }
    }
    if (!seen.insert(r.sample.run_id).second) {
      throw FormatError(lineno, "duplicate run_id " + std::to_string(r.sample.run_id));
    }
    loaded.records.push_back(std::move(r));
  });
  if (!have_header) throw FormatError(1, "empty sample file");
  return loaded;
}

Trajectory parse_trajectory_csv(std::string_view text) {
  Trajectory t;
  bool have_header = false;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (!have_header) {
      if (line != "step,value") throw FormatError(lineno, "expected header 'step,value'");
      have_header = true;
      return;
    }
    if (line.empty()) return;
    const auto f = split_csv(line);
    if (f.size() != 2) throw FormatError(lineno, "expected 2 fields");
    if (parse_u64(f[0], lineno, "step") != t.values.size()) throw FormatError(lineno, "steps must count up from 0");
    t.values.push_back(parse_real(f[1], lineno, "value"));
  });
  if (!have_header) throw FormatError(1, "empty trajectory file");
  t.cap = t.values.empty() ? 0 : t.values.size() - 1;
  return t;
}

json build_report(SampleSchema schema, std::span<const RunRecord> records, const AnalysisConfig& analysis) {
  std::vector<stats::Observation> obs;
  std::vector<Trajectory> trajectories;
  for (const auto& r : records) {
    obs.push_back({r.value, r.sample.censored});
    if (r.trajectory) trajectories.push_back(*r.trajectory);
  }
  json rep;
  rep["schema"] = schema == SampleSchema::regret ? "regret" : "hitting_time";
  rep["samples"] = obs.size();
  rep["censored_count"] = std::count_if(obs.begin(), obs.end(), [](const auto& o) { return o.censored; });
  rep["summary_table"] = nullptr;
  rep["tail_report"] = nullptr;
  rep["drift_estimate"] = nullptr;
  rep["step_tail_fit"] = nullptr;
  bool violated = false;

  if (!obs.empty() && !analysis.k_list.empty()) {
    try {
      const auto tab = stats::summary_table(std::span<const stats::Observation>(obs), analysis.k_list);
      json fr = json::array();
      for (const auto& [k, f] : tab.freq_at_multiples) fr.push_back({{"k", k}, {"fr", f}});
      rep["summary_table"] = {
          {"mean", tab.mean}, {"samples", tab.samples}, {"censored_count", tab.censored}, {"frequencies", fr}};
    } catch (const EmptySampleError&) {
      // all censored: the table stays null, censored_count says why
    }
  }
  if (!obs.empty() && analysis.bound && !analysis.tau_grid.empty()) {
    const auto tail = stats::compare_bound(std::span<const stats::Observation>(obs), *analysis.bound,
                                           analysis.tau_grid, analysis.confidence);
    violated = tail.any_violated();
    rep["tail_report"] = tail_json(tail, *analysis.bound);
  }
  // per-round regret is not a potential; no drift analysis for it
  if (schema != SampleSchema::regret && !trajectories.empty()) {
    try {
      const auto est = stats::estimate_drift(trajectories, analysis.drift_bins);
      json d = {{"mean_drift", est.mean_drift}, {"second_moment", est.second_moment}, {"transitions", est.transitions}};
      if (analysis.drift_bins) {
        json bins = json::array();
        for (const auto& [state, bin] : est.bins) {
          bins.push_back({{"state", state},
                          {"mean_drift", bin.mean_drift},
                          {"second_moment", bin.second_moment},
                          {"count", bin.count}});
        }
        d["bins"] = bins;
      }
      if (analysis.classify) {
        const auto& c = *analysis.classify;
        const auto cls = stats::classify(est, {c.n, c.c, c.delta, c.tolerance});
        d["classification"] = {{"variance_dominated", cls.variance_dominated},
                               {"variance_transformed", cls.variance_transformed}};
      }
      rep["drift_estimate"] = d;
      const auto grid = analysis.eta_grid.empty() ? stats::default_eta_grid() : analysis.eta_grid;
      const auto fit = stats::fit_step_tail(trajectories, grid);
      rep["step_tail_fit"] = {{"r_hat", fit.r_hat}, {"eta_hat", fit.eta_hat}, {"max_violation", fit.max_violation}};
    } catch (const EmptySampleError&) {
      // trajectories of length 1 (started on the target)
    }
  }
  rep["violated"] = violated;
  return rep;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) throw ConfigError("output_dir", "missing required field");
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());

  const auto records = run_replications(cfg);
  const auto schema = schema_for(cfg.kind);
  ExperimentResult res;

  std::ostringstream samples;
  write_samples(samples, schema, records);
  res.samples_csv = cfg.output_dir / "samples.csv";
  write_text_file(res.samples_csv, samples.str());

  if (std::any_of(records.begin(), records.end(), [](const RunRecord& r) { return r.trajectory.has_value(); })) {
    const auto dir = cfg.output_dir / "trajectories";
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& r : records) {
      if (!r.trajectory) continue;
      std::ostringstream t;
      write_trajectory_csv(t, *r.trajectory);
      const auto path = dir / ("run_" + std::to_string(r.sample.run_id) + ".csv");
      write_text_file(path, t.str());
      res.trajectory_files.push_back(path);
    }
  }

  res.report = build_report(schema, records, cfg.analysis);
  res.violated = res.report["violated"].get<bool>();
  res.report_json = cfg.output_dir / "report.json";
  write_text_file(res.report_json, res.report.dump(2) + "\n");

  std::vector<stats::Observation> obs;
  for (const auto& r : records) obs.push_back({r.value, r.sample.censored});
  try {
    const auto bins = stats::histogram_export(std::span<const stats::Observation>(obs), cfg.analysis.histogram_bins);
    std::ostringstream h;
    h << "bin_low,bin_high,count,density\n";
    for (const auto& b : bins) {
      h << format_double(b.low) << ',' << format_double(b.high) << ',' << b.count << ',' << format_double(b.density)
        << '\n';
    }
    res.histogram_csv = cfg.output_dir / "histogram.csv";
    write_text_file(*res.histogram_csv, h.str());
  } catch (const EmptySampleError&) {
    // every run censored
  }
  return res;
}

json analyze(const fs::path& samples_csv, const AnalysisConfig& analysis, const std::optional<fs::path>& trajectory_dir) {
  auto loaded = parse_samples_csv(read_text_file(samples_csv));
  if (trajectory_dir) {
    if (!fs::is_directory(*trajectory_dir)) throw IoError("not a directory: " + trajectory_dir->string());
    for (auto& r : loaded.records) {
      const auto path = *trajectory_dir / ("run_" + std::to_string(r.sample.run_id) + ".csv");
      if (!fs::exists(path)) continue;
      auto t = parse_trajectory_csv(read_text_file(path));
      t.censored = r.sample.censored;
      r.trajectory = std::move(t);
    }
  }
  return build_report(loaded.schema, loaded.records, analysis);
}

std::string bounds_csv(const BoundSpec& spec, std::vector<double> tau_grid) {
  spec.validate();
  std::sort(tau_grid.begin(), tau_grid.end());
  std::ostringstream out;
  out << "tau,bound\n";
  for (const double tau : tau_grid) {
    out << format_double(tau) << ',' << format_double(tail_probability_upper(spec, tau)) << '\n';
  }
  return out.str();
}

}  // namespace driftlab
