#include "driftlab/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "driftlab/error.hpp"

namespace driftlab {

namespace {

using nlohmann::json;

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::sat2, "sat2"},
    {ExperimentKind::recolour, "recolour"},
    {ExperimentKind::rlspd, "rlspd"},
    {ExperimentKind::rlspd_forgetting, "rlspd_forgetting"},
    {ExperimentKind::rwab, "rwab"},
    {ExperimentKind::synthetic_fair, "synthetic_fair"},
    {ExperimentKind::synthetic_biased, "synthetic_biased"},
    {ExperimentKind::synthetic_lazy, "synthetic_lazy"},
};

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "must be a JSON object");
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(join(prefix, key), "unknown field");
  }
}

const json* find(const json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  return it == j.end() ? nullptr : &*it;
}

const json& need(const json& j, const std::string& prefix, std::string_view key) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(join(prefix, key), "missing required field");
  return *v;
}

std::uint64_t as_u64(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(field, "must be >= 0");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(field, "must be a non-negative integer");
}

std::uint32_t as_u32(const json& v, const std::string& field) {
  const auto x = as_u64(v, field);
  if (x > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(field, "too large");
  return static_cast<std::uint32_t>(x);
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "must be a number");
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field, "must be true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "must be a string");
  return v.get<std::string>();
}

std::vector<double> as_doubles(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::uint64_t get_u64(const json& j, const std::string& p, std::string_view k) { return as_u64(need(j, p, k), join(p, k)); }
std::uint32_t get_u32(const json& j, const std::string& p, std::string_view k) { return as_u32(need(j, p, k), join(p, k)); }
double get_double(const json& j, const std::string& p, std::string_view k) { return as_double(need(j, p, k), join(p, k)); }

template <class T, class F>
T get_or(const json& j, const std::string& p, std::string_view k, T fallback, F conv) {
  const json* v = find(j, k);
  return v ? conv(*v, join(p, k)) : fallback;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() || base.empty() ? p : base / p;
}

InstanceMode parse_instance_mode(const json& j, const std::string& p) {
  const std::string s = get_or<std::string>(j, p, "instance", "per_run", as_string);
  if (s == "per_run") return InstanceMode::per_run;
  if (s == "shared") return InstanceMode::shared;
  throw ConfigError(join(p, "instance"), "must be \"per_run\" or \"shared\"");
}

WalkParams parse_walk(const json& j, const std::string& p, ExperimentKind kind) {
  WalkParams w;
  if (kind == ExperimentKind::synthetic_fair) reject_unknown(j, p, {"b", "x0"});
  if (kind == ExperimentKind::synthetic_biased) reject_unknown(j, p, {"b", "x0", "p_up"});
  if (kind == ExperimentKind::synthetic_lazy) reject_unknown(j, p, {"b", "x0", "delta"});
  w.b = get_u64(j, p, "b");
  w.x0 = get_u64(j, p, "x0");
  if (w.b < 1) throw ConfigError(join(p, "b"), "must be >= 1");
  if (w.x0 > w.b) throw ConfigError(join(p, "x0"), "must lie in [0, b]");
  if (kind == ExperimentKind::synthetic_biased) {
    w.p_up = get_double(j, p, "p_up");
    if (!(w.p_up > 0.5 && w.p_up <= 1.0)) throw ConfigError(join(p, "p_up"), "must lie in (1/2, 1]");
  }
  if (kind == ExperimentKind::synthetic_lazy) {
    w.delta = get_double(j, p, "delta");
    if (!(w.delta > 0.0 && w.delta <= 1.0)) throw ConfigError(join(p, "delta"), "must lie in (0, 1]");
  }
  return w;
}

Sat2Params parse_sat2(const json& j, const std::string& p, const std::filesystem::path& base) {
  reject_unknown(j, p, {"n", "m", "dimacs", "instance"});
  Sat2Params s;
  s.instance = parse_instance_mode(j, p);
  if (const json* d = find(j, "dimacs")) {
    s.dimacs = resolve(base, as_string(*d, join(p, "dimacs")));
    s.instance = InstanceMode::shared;
    return s;
  }
  s.n = get_u32(j, p, "n");
  s.m = get_u64(j, p, "m");
  if (s.n < 1) throw ConfigError(join(p, "n"), "must be >= 1");
  return s;
}

RecolourParams parse_recolour(const json& j, const std::string& p, const std::filesystem::path& base) {
  reject_unknown(j, p, {"n", "edge_prob", "graph", "instance"});
  RecolourParams r;
  r.instance = parse_instance_mode(j, p);
  if (const json* g = find(j, "graph")) {
    r.graph = resolve(base, as_string(*g, join(p, "graph")));
    r.instance = InstanceMode::shared;
    return r;
  }
  r.n = get_u32(j, p, "n");
  r.edge_prob = get_double(j, p, "edge_prob");
  if (r.n < 3) throw ConfigError(join(p, "n"), "must be >= 3");
  if (!(r.edge_prob >= 0.0 && r.edge_prob <= 1.0)) throw ConfigError(join(p, "edge_prob"), "must lie in [0, 1]");
  return r;
}

RlspdParams parse_rlspd(const json& j, const std::string& p, ExperimentKind kind) {
  reject_unknown(j, p, {"n", "alpha", "beta", "variant", "mode", "A", "B"});
  RlspdParams r;
  bilinear::Variant variant = bilinear::Variant::revised;
  if (const json* v = find(j, "variant")) {
    try {
      variant = bilinear::variant_from_string(as_string(*v, join(p, "variant")));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(join(p, "variant"), e.what());
    }
  }
  const std::string mode = get_or<std::string>(
      j, p, "mode", kind == ExperimentKind::rlspd_forgetting ? "forgetting" : "runtime", as_string);
  if (mode != "runtime" && mode != "forgetting") throw ConfigError(join(p, "mode"), "must be \"runtime\" or \"forgetting\"");
  if (kind == ExperimentKind::rlspd_forgetting && mode != "forgetting") {
    throw ConfigError(join(p, "mode"), "kind rlspd_forgetting requires mode \"forgetting\"");
  }
  r.forgetting = mode == "forgetting";
  const auto n = get_u32(j, p, "n");
  const double alpha = get_double(j, p, "alpha");
  const double beta = get_double(j, p, "beta");
  try {
    r.bilinear = bilinear::BilinearParams::make(n, alpha, beta, variant);
  } catch (const ConfigError& e) {
    throw ConfigError(join(p, e.field()), std::string(e.what()).substr(e.field().size() + 2));
  }
  if (r.forgetting) {
    r.A = get_double(j, p, "A");
    r.B = get_double(j, p, "B");
    if (!(r.A >= 0.0)) throw ConfigError(join(p, "A"), "must be >= 0");
    if (!(r.B >= 0.0)) throw ConfigError(join(p, "B"), "must be >= 0");
  } else if (find(j, "A") || find(j, "B")) {
    throw ConfigError(join(p, find(j, "A") ? "A" : "B"), "only meaningful in forgetting mode");
  }
  return r;
}

RwabParams parse_rwab(const json& j, const std::string& p) {
  reject_unknown(j, p, {"T", "L", "mu1", "mu2", "accounting", "clock", "record_per_round"});
  RwabParams r;
  r.T = get_u64(j, p, "T");
  r.L = get_u64(j, p, "L");
  r.mu1 = get_double(j, p, "mu1");
  r.mu2 = get_double(j, p, "mu2");
  if (r.T < 1) throw ConfigError(join(p, "T"), "must be >= 1");
  if (r.L < 1) throw ConfigError(join(p, "L"), "must be >= 1 (the challenge boundary sqrt(T/L) needs L > 0)");
  if (r.L >= r.T) throw ConfigError(join(p, "L"), "must be < T");
  if (!(r.mu1 >= 0.0 && r.mu1 <= 1.0)) throw ConfigError(join(p, "mu1"), "must lie in [0, 1]");
  if (!(r.mu2 >= 0.0 && r.mu2 <= 1.0)) throw ConfigError(join(p, "mu2"), "must lie in [0, 1]");
  try {
    if (const json* a = find(j, "accounting")) {
      r.options.accounting = bandit::accounting_from_string(as_string(*a, join(p, "accounting")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(p, "accounting"), e.what());
  }
  try {
    if (const json* c = find(j, "clock")) {
      r.options.clock = bandit::challenge_clock_from_string(as_string(*c, join(p, "clock")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(p, "clock"), e.what());
  }
  r.options.record_per_round = get_or(j, p, "record_per_round", false, as_bool);
  return r;
}

}  // namespace

std::string_view to_string(ExperimentKind k) noexcept {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  throw ConfigError("kind", "unknown experiment kind '" + std::string(s) + "'");
}

BoundSpec parse_bound_spec(const json& j, const std::string& prefix) {
  require_object(j, prefix);
  reject_unknown(j, prefix, {"kind", "delta", "b", "epsilon", "x0", "n", "ell", "c"});
  BoundSpec spec;
  const std::string kind = as_string(need(j, prefix, "kind"), join(prefix, "kind"));
  try {
    spec.kind = bound_kind_from_string(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(prefix, "kind"), e.what());
  }
  spec.delta = get_or(j, prefix, "delta", spec.delta, as_double);
  spec.b = get_or(j, prefix, "b", spec.b, as_double);
  spec.epsilon = get_or(j, prefix, "epsilon", spec.epsilon, as_double);
  spec.x0 = get_or(j, prefix, "x0", spec.x0, as_double);
  spec.n = get_or(j, prefix, "n", spec.n, as_u64);
  spec.ell = get_or(j, prefix, "ell", spec.ell, as_double);
  spec.c = get_or(j, prefix, "c", spec.c, as_double);
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(join(prefix, e.field()), std::string(e.what()).substr(e.field().size() + 2));
  }
  return spec;
}

json to_json(const BoundSpec& spec) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  if (spec.kind == BoundKind::KotzingPolynomial) {
    j["n"] = spec.n;
    j["ell"] = spec.ell;
    j["c"] = spec.c;
    return j;
  }
  j["b"] = spec.b;
  j["x0"] = spec.x0;
  if (spec.kind == BoundKind::Additive) {
    j["epsilon"] = spec.epsilon;
  } else {
    j["delta"] = spec.delta;
  }
  return j;
}

AnalysisConfig parse_analysis(const json& j, const std::string& prefix) {
  require_object(j, prefix);
  reject_unknown(j, prefix,
                 {"tau_grid", "k_list", "confidence", "bound", "histogram_bins", "drift_bins", "classify", "eta_grid"});
  AnalysisConfig a;
  if (const json* v = find(j, "tau_grid")) a.tau_grid = as_doubles(*v, join(prefix, "tau_grid"));
  if (const json* v = find(j, "k_list")) a.k_list = as_doubles(*v, join(prefix, "k_list"));
  if (const json* v = find(j, "eta_grid")) a.eta_grid = as_doubles(*v, join(prefix, "eta_grid"));
  for (std::size_t i = 0; i < a.tau_grid.size(); ++i) {
    if (!(a.tau_grid[i] > 0.0)) throw ConfigError(join(prefix, "tau_grid"), "entries must be > 0");
  }
  for (const double k : a.k_list) {
    if (!(k > 0.0)) throw ConfigError(join(prefix, "k_list"), "entries must be > 0");
  }
  for (const double e : a.eta_grid) {
    if (!(e > 0.0)) throw ConfigError(join(prefix, "eta_grid"), "entries must be > 0");
  }
  a.confidence = get_or(j, prefix, "confidence", a.confidence, as_double);
  if (!(a.confidence > 0.0 && a.confidence < 1.0)) throw ConfigError(join(prefix, "confidence"), "must lie in (0, 1)");
  if (const json* b = find(j, "bound")) a.bound = parse_bound_spec(*b, join(prefix, "bound"));
  if (!a.tau_grid.empty() && !a.bound) throw ConfigError(join(prefix, "bound"), "required when tau_grid is given");
  a.histogram_bins = get_or(j, prefix, "histogram_bins", a.histogram_bins, as_u32);
  if (a.histogram_bins < 1) throw ConfigError(join(prefix, "histogram_bins"), "must be >= 1");
  a.drift_bins = get_or(j, prefix, "drift_bins", false, as_bool);
  if (const json* c = find(j, "classify")) {
    const std::string cp = join(prefix, "classify");
    require_object(*c, cp);
    reject_unknown(*c, cp, {"n", "c", "delta", "tolerance"});
    ClassifyConfig cc;
    cc.n = get_double(*c, cp, "n");
    cc.c = get_double(*c, cp, "c");
    cc.delta = get_double(*c, cp, "delta");
    cc.tolerance = get_or(*c, cp, "tolerance", 0.0, as_double);
    if (!(cc.n > 0.0)) throw ConfigError(join(cp, "n"), "must be > 0");
    a.classify = cc;
  }
  return a;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  require_object(doc, "");
  reject_unknown(doc, "", {"kind", "params", "runs", "master_seed", "cap", "record_trajectories", "workers",
                           "output_dir", "analysis"});
  ExperimentConfig cfg;
  cfg.kind = experiment_kind_from_string(as_string(need(doc, "", "kind"), "kind"));
  cfg.runs = get_u64(doc, "", "runs");
  if (cfg.runs < 1) throw ConfigError("runs", "must be >= 1");
  cfg.master_seed = get_u64(doc, "", "master_seed");
  if (cfg.kind == ExperimentKind::rwab) {
    if (find(doc, "cap")) throw ConfigError("cap", "not used by rwab (the horizon T bounds each run)");
  } else {
    cfg.cap = get_u64(doc, "", "cap");
    if (cfg.cap < 1) throw ConfigError("cap", "must be >= 1");
  }
  cfg.record_trajectories = get_or(doc, "", "record_trajectories", false, as_bool);
  cfg.workers = get_or(doc, "", "workers", std::uint32_t{1}, as_u32);
  if (const json* o = find(doc, "output_dir")) cfg.output_dir = resolve(base_dir, as_string(*o, "output_dir"));

  const json& params = need(doc, "", "params");
  require_object(params, "params");
  switch (cfg.kind) {
    case ExperimentKind::synthetic_fair:
    case ExperimentKind::synthetic_biased:
    case ExperimentKind::synthetic_lazy:
      cfg.params = parse_walk(params, "params", cfg.kind);
      break;
    case ExperimentKind::sat2:
      cfg.params = parse_sat2(params, "params", base_dir);
      break;
    case ExperimentKind::recolour:
      cfg.params = parse_recolour(params, "params", base_dir);
      break;
    case ExperimentKind::rlspd:
    case ExperimentKind::rlspd_forgetting:
      cfg.params = parse_rlspd(params, "params", cfg.kind);
      break;
    case ExperimentKind::rwab:
      cfg.params = parse_rwab(params, "params");
      break;
  }
  if (const json* a = find(doc, "analysis")) cfg.analysis = parse_analysis(*a);
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON in ") + path.string() + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

}  // namespace driftlab
