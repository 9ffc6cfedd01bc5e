#include "timsim/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "timsim/errors.hpp"

namespace timsim {

std::string engine_name(EngineKind e) {
  switch (e) {
    case EngineKind::hybrid: return "hybrid";
    case EngineKind::continuum: return "continuum";
    case EngineKind::both: return "both";
  }
  return "unknown";
}

EngineKind parse_engine(const std::string& name) {
  if (name == "hybrid") return EngineKind::hybrid;
  if (name == "continuum") return EngineKind::continuum;
  if (name == "both") return EngineKind::both;
  throw ConfigError("engine must be 'hybrid', 'continuum' or 'both', got '" +
                    name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& ctx) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    throw ConfigError(ctx + ": expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, const std::string& ctx) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    throw ConfigError(ctx + ": expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_uint64(const std::string& v, const std::string& ctx) {
  errno = 0;
  char* end = nullptr;
  if (!v.empty() && v[0] == '-')
    throw ConfigError(ctx + ": expected a non-negative integer, got '" + v + "'");
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    throw ConfigError(ctx + ": expected a non-negative integer, got '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& v, const std::string& ctx) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(ctx + ": expected 'true' or 'false', got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v,
                                      const std::string& ctx) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_double(trim(item), ctx));
  return out;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(ScenarioConfig&, const std::string& value,
                                  const std::string& ctx)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto dbl = [&t](const std::string& key, double ModelParams::* field) {
      t[key] = [field](ScenarioConfig& c, const std::string& v,
                       const std::string& ctx) {
        c.params.*field = parse_double(v, ctx);
      };
    };
    auto cfg_dbl = [&t](const std::string& key, double ScenarioConfig::* field) {
      t[key] = [field](ScenarioConfig& c, const std::string& v,
                       const std::string& ctx) { c.*field = parse_double(v, ctx); };
    };
    t["dim"] = [](ScenarioConfig& c, const std::string& v, const std::string& ctx) {
      c.params.dim = static_cast<int>(parse_int(v, ctx));
    };
    t["points"] = [](ScenarioConfig& c, const std::string& v,
                     const std::string& ctx) {
      c.params.points = static_cast<int>(parse_int(v, ctx));
    };
    dbl("length", &ModelParams::length);
    dbl("tau", &ModelParams::tau);
    dbl("t_final", &ModelParams::t_final);
    dbl("alpha_n", &ModelParams::alpha_n);
    dbl("mu_n", &ModelParams::mu_n);
    dbl("zeta_n", &ModelParams::zeta_n);
    dbl("theta", &ModelParams::theta);
    dbl("alpha_c", &ModelParams::alpha_c);
    dbl("mu_c", &ModelParams::mu_c);
    dbl("beta_c", &ModelParams::beta_c);
    t["gamma_c"] = [](ScenarioConfig& c, const std::string& v,
                      const std::string& ctx) {
      // `auto` asks the engines to derive the sensitivity from the
      // chemotaxis step budget at construction.
      c.params.gamma_c = (v == "auto")
                             ? std::numeric_limits<double>::quiet_NaN()
                             : parse_double(v, ctx);
    };
    dbl("w_max", &ModelParams::w_max);
    dbl("beta_phi", &ModelParams::beta_phi);
    dbl("alpha_phi", &ModelParams::alpha_phi);
    dbl("kappa_phi", &ModelParams::kappa_phi);
    dbl("A", &ModelParams::A);
    t["engine"] = [](ScenarioConfig& c, const std::string& v,
                     const std::string&) { c.engine = parse_engine(v); };
    t["seed"] = [](ScenarioConfig& c, const std::string& v,
                   const std::string& ctx) { c.seed = parse_uint64(v, ctx); };
    t["replicates"] = [](ScenarioConfig& c, const std::string& v,
                         const std::string& ctx) {
      c.replicates = static_cast<int>(parse_int(v, ctx));
    };
    t["output_every"] = [](ScenarioConfig& c, const std::string& v,
                           const std::string& ctx) {
      c.output_every = static_cast<int>(parse_int(v, ctx));
    };
    t["snapshot_times"] = [](ScenarioConfig& c, const std::string& v,
                             const std::string& ctx) {
      c.snapshot_times = parse_double_list(v, ctx);
    };
    t["early_stop"] = [](ScenarioConfig& c, const std::string& v,
                         const std::string& ctx) {
      c.early_stop = parse_bool(v, ctx);
    };
    t["threads"] = [](ScenarioConfig& c, const std::string& v,
                      const std::string& ctx) {
      c.threads = static_cast<int>(parse_int(v, ctx));
    };
    cfg_dbl("score_radius", &ScenarioConfig::score_radius);
    cfg_dbl("score_core_fraction", &ScenarioConfig::score_core_fraction);
    t["t_low"] = [](ScenarioConfig& c, const std::string& v,
                    const std::string& ctx) {
      c.thresholds.t_low = parse_double(v, ctx);
    };
    t["t_high"] = [](ScenarioConfig& c, const std::string& v,
                     const std::string& ctx) {
      c.thresholds.t_high = parse_double(v, ctx);
    };
    t["exclusion_ratio"] = [](ScenarioConfig& c, const std::string& v,
                              const std::string& ctx) {
      c.thresholds.exclusion_ratio = parse_double(v, ctx);
    };
    cfg_dbl("sweep_alpha_phi_min", &ScenarioConfig::sweep_alpha_phi_min);
    cfg_dbl("sweep_alpha_phi_max", &ScenarioConfig::sweep_alpha_phi_max);
    t["sweep_alpha_phi_count"] = [](ScenarioConfig& c, const std::string& v,
                                    const std::string& ctx) {
      c.sweep_alpha_phi_count = static_cast<int>(parse_int(v, ctx));
    };
    cfg_dbl("sweep_w_max_min", &ScenarioConfig::sweep_w_max_min);
    cfg_dbl("sweep_w_max_max", &ScenarioConfig::sweep_w_max_max);
    t["sweep_w_max_count"] = [](ScenarioConfig& c, const std::string& v,
                                const std::string& ctx) {
      c.sweep_w_max_count = static_cast<int>(parse_int(v, ctx));
    };
    return t;
  }();
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& source_name) {
  ScenarioConfig cfg;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + content + "'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const auto it = key_table().find(key);
    if (it == key_table().end())
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": unknown config key '" + key + "'");
    const auto prev = seen.find(key);
    if (prev != seen.end())
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "' (first set on line " +
                        std::to_string(prev->second) + ")");
    seen[key] = lineno;
    it->second(cfg, value,
               source_name + ":" + std::to_string(lineno) + ": key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void save_config(const ScenarioConfig& cfg, std::ostream& out) {
  const ModelParams& p = cfg.params;
  out << "dim = " << p.dim << "\n";
  out << "points = " << p.points << "\n";
  out << "length = " << fmt17(p.length) << "\n";
  out << "tau = " << fmt17(p.tau) << "\n";
  out << "t_final = " << fmt17(p.t_final) << "\n";
  out << "alpha_n = " << fmt17(p.alpha_n) << "\n";
  out << "mu_n = " << fmt17(p.mu_n) << "\n";
  out << "zeta_n = " << fmt17(p.zeta_n) << "\n";
  out << "theta = " << fmt17(p.theta) << "\n";
  out << "alpha_c = " << fmt17(p.alpha_c) << "\n";
  out << "mu_c = " << fmt17(p.mu_c) << "\n";
  out << "beta_c = " << fmt17(p.beta_c) << "\n";
  if (std::isnan(p.gamma_c))
    out << "gamma_c = auto\n";
  else
    out << "gamma_c = " << fmt17(p.gamma_c) << "\n";
  out << "w_max = " << fmt17(p.w_max) << "\n";
  out << "beta_phi = " << fmt17(p.beta_phi) << "\n";
  out << "alpha_phi = " << fmt17(p.alpha_phi) << "\n";
  out << "kappa_phi = " << fmt17(p.kappa_phi) << "\n";
  out << "A = " << fmt17(p.A) << "\n";
  out << "engine = " << engine_name(cfg.engine) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "replicates = " << cfg.replicates << "\n";
  out << "output_every = " << cfg.output_every << "\n";
  out << "snapshot_times = ";
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
    out << (i ? "," : "") << fmt17(cfg.snapshot_times[i]);
  out << "\n";
  out << "early_stop = " << (cfg.early_stop ? "true" : "false") << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "score_radius = " << fmt17(cfg.score_radius) << "\n";
  out << "score_core_fraction = " << fmt17(cfg.score_core_fraction) << "\n";
  out << "t_low = " << fmt17(cfg.thresholds.t_low) << "\n";
  out << "t_high = " << fmt17(cfg.thresholds.t_high) << "\n";
  out << "exclusion_ratio = " << fmt17(cfg.thresholds.exclusion_ratio) << "\n";
  out << "sweep_alpha_phi_min = " << fmt17(cfg.sweep_alpha_phi_min) << "\n";
  out << "sweep_alpha_phi_max = " << fmt17(cfg.sweep_alpha_phi_max) << "\n";
  out << "sweep_alpha_phi_count = " << cfg.sweep_alpha_phi_count << "\n";
  out << "sweep_w_max_min = " << fmt17(cfg.sweep_w_max_min) << "\n";
  out << "sweep_w_max_max = " << fmt17(cfg.sweep_w_max_max) << "\n";
  out << "sweep_w_max_count = " << cfg.sweep_w_max_count << "\n";
}

void ScenarioConfig::validate() const {
  params.validate();
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (output_every < 1) throw ConfigError("output_every must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  for (const double t : snapshot_times)
    if (t < 0.0 || t > params.t_final)
      throw ConfigError("snapshot time " + std::to_string(t) +
                        " outside [0, t_final]");
  if (!(score_radius > 0.0)) throw ConfigError("score_radius must be > 0");
  if (!(score_core_fraction > 0.0 && score_core_fraction <= 1.0))
    throw ConfigError("score_core_fraction must be in (0, 1]");
  if (thresholds.t_low > thresholds.t_high)
    throw ConfigError("t_low must not exceed t_high");
  if (thresholds.exclusion_ratio < 0.0)
    throw ConfigError("exclusion_ratio must be >= 0");
  if (sweep_alpha_phi_count < 1 || sweep_w_max_count < 1)
    throw ConfigError("sweep axis counts must be >= 1");
  if (!(sweep_alpha_phi_min > 0.0))
    throw ConfigError("sweep_alpha_phi_min must be > 0 (log-spaced axis)");
  if (sweep_alpha_phi_max < sweep_alpha_phi_min)
    throw ConfigError("sweep_alpha_phi_max must be >= sweep_alpha_phi_min");
  if (!(sweep_w_max_min > 0.0))
    throw ConfigError("sweep_w_max_min must be > 0");
  if (sweep_w_max_max < sweep_w_max_min)
    throw ConfigError("sweep_w_max_max must be >= sweep_w_max_min");
}

const std::vector<EnvironmentPreset>& environment_presets() {
  static const std::vector<EnvironmentPreset> presets = {
      {"1", 0.0015, 2.96e5},
      {"2", 0.15, 2.22e5},
      {"3", 0.15, 8.88e5},
      {"4", 1.5, 8.88e5},
  };
  return presets;
}

const std::vector<TherapyPreset>& therapy_presets() {
  constexpr double keep = std::numeric_limits<double>::quiet_NaN();
  static const std::vector<TherapyPreset> presets = {
      {"none", 1.2e-4, keep, keep},
      {"anti_pd1", 1e-3, keep, keep},
      {"dual", 1e-3, 12.0, keep},
      {"chemo_anti_pd1", 1e-3, 12.0, 0.75},
  };
  return presets;
}

const TherapyPreset& therapy_preset(const std::string& name) {
  for (const auto& p : therapy_presets())
    if (p.name == name) return p;
  throw ConfigError("unknown therapy preset '" + name +
                    "'; expected none, anti_pd1, dual or chemo_anti_pd1");
}

ModelParams with_environment(const ModelParams& base,
                             const EnvironmentPreset& env) {
  ModelParams p = base;
  p.alpha_phi = env.alpha_phi;
  p.w_max = env.w_max;
  return p;
}

ModelParams with_therapy(const ModelParams& base, const TherapyPreset& preset) {
  ModelParams p = base;
  p.zeta_n = preset.zeta_n;
  if (!std::isnan(preset.alpha_c)) p.alpha_c = preset.alpha_c;
  if (!std::isnan(preset.alpha_n)) p.alpha_n = preset.alpha_n;
  p.t_final = 10.0;
  return p;
}

}  // namespace timsim
