#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "timsim/config.hpp"
#include "timsim/grid.hpp"
#include "timsim/immunoscore.hpp"

namespace timsim {

struct TimeSeriesRow {
  double t = 0.0;
  double rho_n = 0.0;   ///< total tumour cells
  double rho_c = 0.0;   ///< total T cells
  double phi_tot = 0.0; ///< total chemoattractant mass
  double score = 0.0;   ///< infiltration score
};

struct Snapshot {
  std::string field;  // "n", "c" or "phi"
  double t = 0.0;
  ScalarField data;   // density
};

/// Result of a single run (one engine, one seed).
struct RunRecord {
  std::vector<TimeSeriesRow> rows;  // strictly increasing t
  std::vector<Snapshot> snapshots;
  RegionCounts final_counts;
  Phenotype phenotype = Phenotype::cold;
  bool early_stopped = false;
  double phi_peak = 0.0;
  double phi_cap = 0.0;
  // Continuum runs only: total T-cell mass restored by positivity clamping.
  double clamped_mass = 0.0;

  const TimeSeriesRow& final_row() const { return rows.back(); }
};

/// Deterministic continuum run.
RunRecord run_continuum(const ScenarioConfig& cfg);

/// One stochastic run with an explicit seed.  Snapshots are collected only
/// when `want_snapshots` is set (the ensemble driver enables it for the
/// first replicate).
RunRecord run_hybrid(const ScenarioConfig& cfg, std::uint64_t seed,
                     bool want_snapshots);

/// Replicate ensemble.  For the hybrid engine, runs cfg.replicates
/// independent runs seeded cfg.seed + 0 .. cfg.seed + R - 1 on a worker
/// pool; the continuum engine is deterministic, so R is forced to 1.
/// Mean and sample variance are computed row-wise over the common prefix of
/// rows (runs stopped early contribute until their last row).
struct EnsembleRecord {
  std::vector<RunRecord> replicates;
  std::vector<TimeSeriesRow> mean_rows;
  std::vector<TimeSeriesRow> var_rows;  // sample variance; zeros for R = 1
  RegionCounts mean_final_counts;
  Phenotype phenotype = Phenotype::cold;
};
EnsembleRecord run_replicates(const ScenarioConfig& cfg);

/// One cell of a (alpha_phi, w_max) sweep.  Failed cells carry the error
/// text and NaN metrics so every requested cell is present in the output.
struct SweepCell {
  double alpha_phi = 0.0;
  double w_max = 0.0;
  double score_final = 0.0;
  double rho_n_final = 0.0;
  double rho_c_final = 0.0;
  RegionCounts final_counts;
  Phenotype label = Phenotype::cold;
  std::string error;  // empty = success

  bool failed() const { return !error.empty(); }
};

std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> linear_spaced(double lo, double hi, int count);

/// Run one cell per (alpha_phi, w_max) pair, row-major in the given order,
/// on a worker pool.  Cell failures are recorded, not fatal.
std::vector<SweepCell> run_sweep(const ScenarioConfig& cfg,
                                 const std::vector<double>& alpha_phi_values,
                                 const std::vector<double>& w_max_values);
/// Sweep over the axes configured in cfg.
std::vector<SweepCell> run_sweep(const ScenarioConfig& cfg);

/// Pick classification thresholds from a sweep: t_low and t_high are the
/// 33rd and 66th percentiles of the final scores over the successful cells.
ClassifyThresholds calibrate_thresholds(const std::vector<SweepCell>& cells,
                                        double exclusion_ratio);

/// Outcome of one (environment, treatment) combination.
struct TherapyOutcome {
  std::string environment;  // "1".."4"
  std::string treatment;    // preset name
  ModelParams params;       // the effective parameters used
  double rho_n_final = 0.0;
  double rho_c_final = 0.0;
  double score_final = 0.0;
  Phenotype label = Phenotype::cold;
};

/// Run the four reference environments under each requested treatment
/// preset (all presets when `preset_names` is empty) on a worker pool.
std::vector<TherapyOutcome> run_therapy(
    const ScenarioConfig& cfg, const std::vector<std::string>& preset_names);

}  // namespace timsim
