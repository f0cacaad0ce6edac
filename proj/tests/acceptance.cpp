// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [output_root]
//
// Experiment artifacts go under output_root (default: a fresh temp directory,
// removed afterwards).

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab/bilinear.hpp"
#include "driftlab/config.hpp"
#include "driftlab/harness.hpp"
#include "driftlab/recolour.hpp"
#include "driftlab/rwab.hpp"
#include "driftlab/sat2.hpp"
#include "driftlab/stats.hpp"
#include "json.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace driftlab;
using nlohmann::json;

namespace {

// Frozen from the one-time forgetting pilot (seed 9001, 1000 runs, original
// variant, n = 1000, A = B = 1): mean escape 20.306 n, C = 1.25 x 20.306 rounded up.
constexpr double kForgettingC = 25.4;

fs::path g_root;

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += " [FAILED: " + what + "]";
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// Configs of every experiment, kept for the determinism rerun.
std::vector<std::pair<std::string, json>> g_experiments;

ExperimentResult run_logged(const std::string& name, json doc) {
  doc["workers"] = 1;
  doc["output_dir"] = (g_root / name / "w1a").string();
  g_experiments.emplace_back(name, doc);
  return run_experiment(parse_config(doc));
}

std::vector<stats::Observation> observations_of(const std::vector<RunRecord>& recs) {
  std::vector<stats::Observation> out;
  for (const auto& r : recs) out.push_back({r.value, r.sample.censored});
  return out;
}

std::vector<RunRecord> records_of(const ExperimentResult& res) {
  return parse_samples_csv(read_text_file(res.samples_csv)).records;
}

std::string tail_summary(const json& tail) {
  std::string s;
  for (const auto& row : tail["rows"]) {
    s += (s.empty() ? "" : ", ") + std::string("tau=") + fmt(row["tau"].get<double>()) + ": " +
         fmt(row["empirical_survival"].get<double>(), 3) + "<=" + fmt(row["bound"].get<double>(), 3) + "+" +
         fmt(row["hoeffding_margin"].get<double>(), 2) + (row["violated"].get<bool>() ? " VIOLATED" : "");
  }
  return s;
}

Verdict c1() {
  Verdict v;
  const auto res = run_logged("c1_fair", json::parse(R"({"kind":"synthetic_fair","runs":10000,"master_seed":101,
      "cap":1000000,"params":{"b":20,"x0":10},"analysis":{"k_list":[1],"tau_grid":[100,300,1000],
      "bound":{"kind":"TwoAbsorbing","delta":1,"b":20,"x0":10}}})"));
  const double mean = res.report["summary_table"]["mean"];
  const double exact = 10.0 * (20 - 10);
  v.note("mean=" + fmt(mean) + " exact=" + fmt(exact));
  v.require(std::abs(mean - exact) / exact <= 0.05, "mean within 5% of 100");
  v.note(tail_summary(res.report["tail_report"]));
  v.require(!res.violated, "no tail violation");
  return v;
}

Verdict c2() {
  Verdict v;
  const auto res = run_logged("c2_biased", json::parse(R"({"kind":"synthetic_biased","runs":10000,"master_seed":102,
      "cap":1000000,"params":{"b":50,"x0":0,"p_up":0.75},"analysis":{"k_list":[1],"tau_grid":[100,200,400],
      "bound":{"kind":"Additive","epsilon":0.5,"b":50,"x0":0}}})"));
  const double mean = res.report["summary_table"]["mean"];
  const double exact = oracle::mean_hitting_times(oracle::biased_walk(50, 0.75))[0];
  v.note("mean=" + fmt(mean) + " dp=" + fmt(exact) + " bound<=100");
  v.require(mean <= 100.0, "mean <= (b-X0)/eps = 100");
  v.require(std::abs(mean - exact) / exact <= 0.05, "mean within 5% of the DP oracle");
  v.note(tail_summary(res.report["tail_report"]));
  v.require(!res.violated, "no tail violation");
  return v;
}

Verdict c3() {
  Verdict v;
  const auto res = run_logged("c3_lazy", json::parse(R"({"kind":"synthetic_lazy","runs":10000,"master_seed":103,
      "cap":1000000,"params":{"b":10,"x0":10,"delta":0.5},"analysis":{"k_list":[1],
      "tau_grid":[100,200,400,800,1600],"bound":{"kind":"NegativeDriftVariance","delta":0.5,"b":10,"x0":10}}})"));
  const double mean = res.report["summary_table"]["mean"];
  const auto chain = oracle::lazy_walk(10, 0.5);
  const double exact = oracle::mean_hitting_times(chain)[10];
  v.note("mean=" + fmt(mean) + " dp=" + fmt(exact));
  v.require(std::abs(mean - exact) / exact <= 0.05, "mean within 5% of the DP oracle");
  v.note(tail_summary(res.report["tail_report"]));
  v.require(!res.violated, "no violation of exp(-tau delta/(e b^2)) + margin");
  // the bound must also hold for the exact law
  const auto surv = oracle::survival(chain, 10, 1600);
  BoundSpec spec;
  spec.kind = BoundKind::NegativeDriftVariance;
  spec.delta = 0.5;
  spec.b = 10;
  spec.x0 = 10;
  for (int tau : {100, 200, 400, 800, 1600}) {
    v.require(surv[tau] <= tail_probability_upper(spec, tau), "exact survival below bound at tau=" + std::to_string(tau));
  }
  return v;
}

Verdict c4() {
  Verdict v;
  const std::uint32_t n = 50;
  const double n2 = double(n) * n;
  json doc = json::parse(R"({"kind":"sat2","runs":2000,"master_seed":104,"cap":15000,
      "params":{"n":50,"m":150},"analysis":{"k_list":[1]}})");
  doc["analysis"]["tau_grid"] = {n2, 2 * n2, 3 * n2};
  doc["analysis"]["bound"] = {{"kind", "StandardVariance"}, {"delta", 1}, {"b", n}, {"x0", 0}};
  const auto res = run_logged("c4_sat2", doc);
  v.note("mean=" + fmt(res.report["summary_table"]["mean"].get<double>()) +
         " censored=" + std::to_string(res.report["censored_count"].get<int>()));
  v.note(tail_summary(res.report["tail_report"]));
  v.require(!res.violated, "Pr(iter >= r n^2) <= exp(-r/e) + margin");

  // replay every run and check the output independently
  const auto recs = records_of(res);
  std::size_t checked = 0;
  bool all_ok = true, consistent = true;
  for (const auto& rec : recs) {
    RngStream s(104, rec.sample.run_id);
    const auto inst = sat2::generate_planted(s, n, 150);
    const auto out = sat2::run_walk(inst.formula, sat2::random_assignment(s, n), s, 15000);
    consistent = consistent && out.iterations == rec.sample.stopping_time && out.censored == rec.sample.censored;
    if (out.censored) continue;
    ++checked;
    for (const auto& c : inst.formula.clauses) {
      const bool l1 = (out.final[c.first.var] != 0) != c.first.negated;
      const bool l2 = (out.final[c.second.var] != 0) != c.second.negated;
      all_ok = all_ok && (l1 || l2);
    }
  }
  v.note(std::to_string(checked) + " outputs verified");
  v.require(all_ok, "every non-censored output satisfies its formula");
  v.require(consistent, "replay matches the recorded samples");
  return v;
}

Verdict c5() {
  Verdict v;
  const std::uint32_t n = 30;
  const double n2 = double(n) * n;
  json doc = json::parse(R"({"kind":"recolour","runs":2000,"master_seed":105,"cap":5400,
      "params":{"n":30,"edge_prob":0.9},"analysis":{"k_list":[1]}})");
  doc["analysis"]["tau_grid"] = {n2, 2 * n2, 3 * n2};
  doc["analysis"]["bound"] = {{"kind", "TwoAbsorbing"}, {"delta", 2.0 / 3.0}, {"b", n}, {"x0", 0}};
  const auto res = run_logged("c5_recolour", doc);
  v.note("mean=" + fmt(res.report["summary_table"]["mean"].get<double>()) +
         " censored=" + std::to_string(res.report["censored_count"].get<int>()));
  v.note(tail_summary(res.report["tail_report"]));
  v.require(!res.violated, "Pr(iter >= r n^2) <= exp(-4r/(3e)) + margin");

  const auto recs = records_of(res);
  bool all_ok = true, consistent = true;
  for (const auto& rec : recs) {
    RngStream s(105, rec.sample.run_id);
    const auto g = recolour::generate_3colorable(s, n, 0.9);
    const auto out = recolour::run_recolour(g, recolour::random_colouring(s, n), s, 5400);
    consistent = consistent && out.iterations == rec.sample.stopping_time && out.censored == rec.sample.censored;
    if (out.censored) continue;
    std::set<std::pair<recolour::Vertex, recolour::Vertex>> e(g.edges().begin(), g.edges().end());
    auto adj = [&](recolour::Vertex a, recolour::Vertex b) { return e.count({a, b}) > 0; };
    for (recolour::Vertex a = 0; a < n; ++a)
      for (recolour::Vertex b = a + 1; b < n; ++b)
        for (recolour::Vertex c = b + 1; c < n; ++c)
          if (adj(a, b) && adj(b, c) && adj(a, c) && out.final[a] == out.final[b] && out.final[b] == out.final[c])
            all_ok = false;
  }
  v.require(all_ok, "no monochromatic triangle in any final colouring (exhaustive scan)");
  v.require(consistent, "replay matches the recorded samples");
  return v;
}

Verdict c6() {
  Verdict v;
  const auto res = run_logged("c6_rlspd", json::parse(R"({"kind":"rlspd","runs":1000,"master_seed":106,
      "cap":632456,"params":{"n":1000,"alpha":0.5,"beta":0.5,"variant":"original"},
      "analysis":{"k_list":[1,2,4,6,8]}})"));
  const auto& tab = res.report["summary_table"];
  const double mean = tab["mean"];
  const double fr2 = tab["frequencies"][1]["fr"], fr8 = tab["frequencies"][4]["fr"];
  std::string frs;
  for (const auto& f : tab["frequencies"]) frs += (frs.empty() ? "" : "/") + fmt(f["fr"].get<double>(), 3);
  v.note("mean=" + fmt(mean) + " (table 7029.405) Fr=" + frs + " censored=" +
         std::to_string(res.report["censored_count"].get<int>()));
  v.require(std::abs(mean - 7029.405) / 7029.405 <= 0.20, "mean within 20% of 7029.405");
  v.require(std::abs(fr2 - 0.845) <= 0.05, "Fr(T <= 2 mean) within 0.05 of 0.845");
  v.require(fr8 >= 0.995, "Fr(T <= 8 mean) >= 0.995");
  return v;
}

Verdict c7() {
  Verdict v;
  std::size_t cases = 0, mismatches = 0;
  for (auto variant : {bilinear::Variant::revised, bilinear::Variant::original}) {
    const auto p = bilinear::BilinearParams::make(4, 0.5, 0.5, variant);
    for (std::uint32_t ox = 0; ox <= 4; ++ox) {
      for (std::uint32_t oy = 0; oy <= 4; ++oy) {
        Bits x(4, 0), y(4, 0);
        for (std::uint32_t i = 0; i < ox; ++i) x[i] = 1;
        for (std::uint32_t i = 0; i < oy; ++i) y[i] = 1;
        const bilinear::SearchPair pair(x, y);
        for (std::uint32_t pos = 0; pos < 8; ++pos) {
          // find the stream position whose index draw selects `pos`
          std::uint64_t ctr = 0;
          while (RngStream(0, 0, ctr).next_u64() % 8 != pos) ++ctr;
          RngStream s(0, 0, ctr);
          const auto next = bilinear::rls_pd_step(p, pair, s);
          const bool on_x = pos < 4;
          const std::uint32_t i = on_x ? pos : pos - 4;
          const bool bit = on_x ? x[i] != 0 : y[i] != 0;
          const long long nx = on_x ? (bit ? ox - 1LL : ox + 1LL) : ox;
          const long long ny = on_x ? oy : (bit ? oy - 1LL : oy + 1LL);
          const bool want = oracle::dominance_oracle(4, 2, 2, variant == bilinear::Variant::revised, nx, ny, ox, oy);
          ++cases;
          if ((next != pair) != want) ++mismatches;
        }
      }
    }
  }
  v.note(std::to_string(cases) + " (state, flip) cases over both variants, " + std::to_string(mismatches) + " mismatches");
  v.require(mismatches == 0, "step acceptance equals the brute-force dominance evaluator");
  return v;
}

Verdict c8() {
  Verdict v;
  const double n = 1000;
  const auto res = run_logged("c8_forgetting", json::parse(R"({"kind":"rlspd_forgetting","runs":1000,
      "master_seed":108,"cap":1000000,"params":{"n":1000,"alpha":0.5,"beta":0.5,"variant":"original","A":1,"B":1},
      "analysis":{"k_list":[1]}})"));
  const auto recs = records_of(res);
  const double mean = res.report["summary_table"]["mean"];
  v.note("mean=" + fmt(mean / n) + "n (C=" + fmt(kForgettingC) + ") censored=" +
         std::to_string(res.report["censored_count"].get<int>()));
  v.require(mean <= kForgettingC * n, "mean escape time <= C n");

  std::vector<double> r_vals, log_surv;
  bool decreasing = true;
  double prev = 1.0;
  std::string shown;
  for (int r = 1; r <= 6; ++r) {
    std::size_t above = 0;
    for (const auto& rec : recs) above += (rec.sample.censored || rec.value > r * n) ? 1 : 0;
    const double surv = double(above) / recs.size();
    shown += (shown.empty() ? "" : "/") + fmt(surv, 3);
    if (surv <= 0.0) {
      decreasing = false;
      break;
    }
    decreasing = decreasing && surv < prev;
    prev = surv;
    r_vals.push_back(r);
    log_surv.push_back(std::log(surv));
  }
  v.note("Pr(T > r n), r=1..6: " + shown);
  v.require(decreasing && r_vals.size() == 6, "log survival strictly decreasing in r");
  if (r_vals.size() == 6) {
    const auto fit = stats::linear_fit(r_vals, log_surv);
    v.note("log-survival slope=" + fmt(fit.slope, 3) + " R^2=" + fmt(fit.r_squared, 4));
    v.require(fit.r_squared >= 0.9, "linear fit R^2 >= 0.9");
  }
  return v;
}

Verdict c9() {
  Verdict v;
  const std::pair<std::uint64_t, double> rows[] = {{5, 111.329}, {100, 326.728}};
  for (const auto& [L, table] : rows) {
    json doc = json::parse(R"({"kind":"rwab","runs":1000,"master_seed":109,
        "params":{"T":1000,"mu1":0.2,"mu2":0.8},"analysis":{"k_list":[1,2]}})");
    doc["params"]["L"] = L;
    const auto res = run_logged("c9_rwab_L" + std::to_string(L), doc);
    const auto& tab = res.report["summary_table"];
    const double mean = tab["mean"], fr2 = tab["frequencies"][1]["fr"];
    v.note("L=" + std::to_string(L) + ": mean=" + fmt(mean) + " (table " + fmt(table, 6) + ") Fr(R<=2mean)=" + fmt(fr2, 3));
    v.require(std::abs(mean - table) / table <= 0.15, "mean regret within 15% at L=" + std::to_string(L));
    if (L == 5) v.require(fr2 >= 0.99, "Fr(R <= 2 mean) >= 0.99 at L=5");

    // replay with the full ledger
    const auto recs = records_of(res);
    bool ledgers_ok = true, consistent = true;
    for (const auto& rec : recs) {
      RngStream s(109, rec.sample.run_id);
      const auto env = bandit::make_env(s, 1000, L, 0.2, 0.8);
      const auto led = bandit::run_rwab(env, s);
      ledgers_ok = ledgers_ok && led.eras == L + 1 && led.rounds == 1000 && led.challenges + led.plain_pulls == 1000;
      consistent = consistent && led.swaps == rec.swaps && led.sub_eras == rec.sub_eras &&
                   std::abs(led.total - rec.value) <= 1e-9 * std::max(1.0, led.total);
    }
    v.require(ledgers_ok, "eras = L+1 and clock conservation on every run (L=" + std::to_string(L) + ")");
    v.require(consistent, "replay matches the recorded samples (L=" + std::to_string(L) + ")");
  }
  return v;
}

Verdict c10() {
  Verdict v;
  const double e = std::numbers::e;
  auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  auto mk = [](BoundKind k, double delta, double b, double eps) {
    BoundSpec s;
    s.kind = k;
    s.delta = delta;
    s.b = b;
    s.epsilon = eps;
    return s;
  };
  int checks = 0;
  auto expect = [&](double got, double want, const std::string& what) {
    ++checks;
    v.require(rel(got, want), what + " got " + fmt(got, 17));
  };
  expect(tail_probability_upper(mk(BoundKind::StandardVariance, 1, 1, 0), e), std::exp(-1.0), "StandardVariance tau=e");
  expect(tail_probability_upper(mk(BoundKind::NegativeDriftVariance, 1, 1, 0), e), std::exp(-1.0), "NegativeDriftVariance tau=e");
  expect(tail_probability_upper(mk(BoundKind::Additive, 1, 1, 1), e), std::exp(-1.0), "Additive b=1 tau=e");
  expect(tail_probability_upper(mk(BoundKind::TwoAbsorbing, 1, 1, 0), e / 2), std::exp(-1.0), "TwoAbsorbing tau=e/2");
  BoundSpec k;
  k.kind = BoundKind::KotzingPolynomial;
  k.n = 10;
  k.ell = 1;
  k.c = e;
  expect(tail_probability_upper(k, 400), 0.25, "Kotzing r=4 c=e");
  expect(expected_time_upper([&] { auto s = mk(BoundKind::TwoAbsorbing, 1, 20, 0); s.x0 = 10; return s; }()), 100,
         "E[T] TwoAbsorbing");
  expect(expected_time_upper(mk(BoundKind::Additive, 1, 50, 0.5)), 100, "E[T] Additive");
  expect(expected_time_upper(mk(BoundKind::StandardVariance, 1, 1, 0)), 1, "E[T] StandardVariance");
  const auto rb = bandit::theoretical_regret_bound(1000, 10, 1.0);
  expect(rb.bound, 480.0 * (10 + 100), "regret bound eps=1 T=1000 L=10");
  ++checks;
  v.require(rb.confidence == 0.0, "confidence clamps to 0 at eps=1");
  expect(bandit::theoretical_regret_bound(1000, 5, 4.0).bound, 480.0 * 4 * (5 + std::sqrt(5000.0)), "regret bound eps=4");
  expect(bandit::theoretical_regret_bound(1000, 5, 4.0).confidence, 1 - 2 * std::exp(-2 / e), "confidence eps=4");
  v.note(std::to_string(checks) + " anchors at 1e-12 relative");
  return v;
}

Verdict c11() {
  Verdict v;
  std::size_t compared = 0;
  for (const auto& [name, base] : g_experiments) {
    const auto first = g_root / name / "w1a";
    auto doc = base;
    doc["output_dir"] = (g_root / name / "w1b").string();
    run_experiment(parse_config(doc));
    doc["workers"] = 4;
    doc["output_dir"] = (g_root / name / "w4").string();
    run_experiment(parse_config(doc));
    for (const char* file : {"samples.csv", "report.json", "histogram.csv"}) {
      const auto a = read_text_file(first / file);
      const bool same = a == read_text_file(g_root / name / "w1b" / file) && a == read_text_file(g_root / name / "w4" / file);
      ++compared;
      v.require(same, name + "/" + file + " differs");
    }
  }
  v.note(std::to_string(g_experiments.size()) + " experiments rerun serial and with 4 workers, " +
         std::to_string(compared) + " artifact files byte-identical");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const bool own_root = argc < 2;
  g_root = own_root ? fs::temp_directory_path() / ("driftlab_acceptance_" + std::to_string(::getpid())) : fs::path(argv[1]);
  fs::create_directories(g_root);

  struct Criterion {
    const char* id;
    const char* title;
    double limit_s;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"1", "gambler's-ruin oracle", 10, c1},
      {"2", "additive-drift oracle", 10, c2},
      {"3", "zero-drift variance oracle", 10, c3},
      {"4", "2-SAT tail", 30, c4},
      {"5", "Recolour tail", 60, c5},
      {"6", "RLS-PD runtime table", 300, c6},
      {"7", "RLS-PD exhaustive dominance", 1, c7},
      {"8", "RLS-PD forgetting", 120, c8},
      {"9", "RWAB regret table", 120, c9},
      {"10", "bound formulas", 1, c10},
      {"11", "determinism", 1e9, c11},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail += std::string(" [FAILED: exception: ") + e.what() + "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) v.require(false, "runtime " + fmt(secs, 3) + " s over the " + fmt(c.limit_s) + " s limit");
    std::printf("%s criterion %-2s %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }

  // informational: the revised BILINEAR at the same settings
  {
    const auto p = bilinear::BilinearParams::make(1000, 0.5, 0.5, bilinear::Variant::revised);
    std::vector<stats::Observation> obs;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      RngStream s(106, i);
      const auto out = bilinear::run_until_opt(p, std::nullopt, s, 632456);
      obs.push_back({double(out.iterations), out.censored});
    }
    const auto tab = stats::summary_table(std::span<const stats::Observation>(obs), {1, 2, 4, 6, 8});
    std::string frs;
    for (const auto& [k, fr] : tab.freq_at_multiples) frs += (frs.empty() ? "" : "/") + fmt(fr, 3);
    std::printf("INFO revised BILINEAR runtime, n=1000, alpha=beta=0.5: mean=%s Fr=%s\n", fmt(tab.mean).c_str(), frs.c_str());
    std::vector<stats::Observation> esc;
    for (std::uint64_t i = 0; i < 100; ++i) {
      RngStream s(108, i);
      const auto out = bilinear::run_forgetting(p, 1, 1, s, 1'000'000);
      esc.push_back({double(out.iterations), out.censored});
    }
    const auto etab = stats::summary_table(std::span<const stats::Observation>(esc), {1});
    std::printf("INFO revised BILINEAR forgetting, A=B=1, 100 runs: mean escape=%sn censored=%zu\n",
                fmt(etab.mean / 1000.0).c_str(), etab.censored);
  }

  if (own_root) fs::remove_all(g_root);
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
