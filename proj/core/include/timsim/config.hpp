#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "timsim/immunoscore.hpp"
#include "timsim/params.hpp"

namespace timsim {

enum class EngineKind { hybrid, continuum, both };

std::string engine_name(EngineKind e);
EngineKind parse_engine(const std::string& name);

/// Full description of one experiment: model parameters plus harness
/// settings (engine, seeding, outputs, scoring, sweep axes).
struct ScenarioConfig {
  ModelParams params;

  EngineKind engine = EngineKind::continuum;
  std::uint64_t seed = 1;
  int replicates = 1;
  /// Emit a time-series row every this many steps (the initial and final
  /// rows are always emitted).
  int output_every = 100;
  /// Times at which full field snapshots are written.
  std::vector<double> snapshot_times;
  /// Stop a run as soon as the tumour population hits zero.
  bool early_stop = false;
  /// Worker threads for replicate ensembles and sweeps; 0 = hardware count.
  int threads = 0;

  // Scoring.
  double score_radius = 0.144;
  double score_core_fraction = 0.65;
  ClassifyThresholds thresholds{};

  // Sweep axes: secretion rate alpha_phi (log-spaced) x crowding capacity
  // w_max (linearly spaced).
  double sweep_alpha_phi_min = 0.0015;
  double sweep_alpha_phi_max = 1.5;
  int sweep_alpha_phi_count = 10;
  double sweep_w_max_min = 0.74e5;
  double sweep_w_max_max = 8.88e5;
  int sweep_w_max_count = 10;

  /// Throws ConfigError on invalid settings (including params.validate()).
  void validate() const;
};

/// Parse a flat key=value file ('#' starts a comment, blank lines ignored).
/// Unknown keys, duplicate keys and malformed values raise ConfigError with
/// the offending key and line number.  The key `zeta_n` is mandatory.
ScenarioConfig parse_config(std::istream& in, const std::string& source_name);
ScenarioConfig load_config(const std::string& path);

/// Write a config in canonical key order with full precision ("%.17g"), so
/// that parse(save(cfg)) reproduces cfg exactly.
void save_config(const ScenarioConfig& cfg, std::ostream& out);

/// The four reference tumour microenvironments from the phenotype study:
/// combinations of chemoattractant secretion rate and crowding capacity.
struct EnvironmentPreset {
  std::string name;   // "1".."4"
  double alpha_phi;
  double w_max;
};
const std::vector<EnvironmentPreset>& environment_presets();

/// Treatment presets (all run to t = 10).  Each sets the listed keys to
/// absolute values and touches nothing else:
///   none            : zeta_n = 1.2e-4
///   anti_pd1        : zeta_n = 1e-3 (restored immune kill efficacy)
///   dual            : zeta_n = 1e-3, alpha_c = 12 (plus boosted influx)
///   chemo_anti_pd1  : zeta_n = 1e-3, alpha_c = 12, alpha_n = 0.75
///                     (plus halved tumour division)
/// Unset overrides are NaN.
struct TherapyPreset {
  std::string name;
  double zeta_n;
  double alpha_c;   // NaN = keep base value
  double alpha_n;   // NaN = keep base value
};
const std::vector<TherapyPreset>& therapy_presets();
const TherapyPreset& therapy_preset(const std::string& name);

/// Apply an environment or therapy preset to a copy of the parameters.
ModelParams with_environment(const ModelParams& base, const EnvironmentPreset& env);
ModelParams with_therapy(const ModelParams& base, const TherapyPreset& preset);

}  // namespace timsim
