#include "timsim/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "timsim/continuum.hpp"
#include "timsim/errors.hpp"
#include "timsim/hybrid.hpp"
#include "timsim/init.hpp"

namespace timsim {

namespace {

/// Run fn(0..jobs-1) on up to `threads` workers (0 = hardware count).  Each
/// job writes only its own result slot, so the outcome is independent of
/// scheduling.  The first exception is rethrown after all jobs finish.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  if (jobs <= 0) return;
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    for (int j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        fn(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Shared run loop.  `Access` provides density views of the engine state:
/// n(), c(), phi() returning ScalarField copies.
template <typename Engine, typename Access>
RunRecord drive(Engine& eng, const Access& access, const ScenarioConfig& cfg,
                const ScoreRegions& regions, bool want_snapshots) {
  const double tau = cfg.params.tau;
  const long steps_total = std::llround(cfg.params.t_final / tau);

  std::map<long, double> snapshot_steps;  // step index -> requested time
  if (want_snapshots)
    for (const double t : cfg.snapshot_times)
      snapshot_steps.emplace(std::llround(t / tau), t);

  RunRecord rec;
  rec.phi_cap = eng.phi_cap();

  auto emit_row = [&](long k) {
    TimeSeriesRow row;
    row.t = static_cast<double>(k) * tau;
    row.rho_n = eng.tumour_mass();
    row.rho_c = eng.tcell_mass();
    row.phi_tot = eng.chemo_mass();
    row.score = infiltration_score(access.c(), regions);
    rec.rows.push_back(row);
  };
  auto emit_snapshot = [&](double t_label) {
    rec.snapshots.push_back({"n", t_label, access.n()});
    rec.snapshots.push_back({"c", t_label, access.c()});
    rec.snapshots.push_back({"phi", t_label, access.phi()});
  };

  emit_row(0);
  if (const auto it = snapshot_steps.find(0); it != snapshot_steps.end())
    emit_snapshot(it->second);

  for (long k = 1; k <= steps_total; ++k) {
    eng.step();
    if (const auto it = snapshot_steps.find(k); it != snapshot_steps.end())
      emit_snapshot(it->second);
    const bool output_step = (k % cfg.output_every == 0) || k == steps_total;
    if (output_step) emit_row(k);
    // A population below half a cell counts as eradicated in both engines
    // (the stochastic engine carries integer counts, so this means zero).
    if (cfg.early_stop && eng.tumour_mass() < 0.5) {
      if (!output_step) emit_row(k);
      rec.early_stopped = true;
      break;
    }
  }

  rec.final_counts = region_counts(access.c(), regions);
  rec.phenotype =
      classify(rec.rows.back().score, rec.final_counts, cfg.thresholds);
  rec.phi_peak = eng.phi_peak();
  rec.clamped_mass = access.clamped_mass();
  return rec;
}

struct ContinuumAccess {
  const ContinuumEngine& eng;
  ScalarField n() const { return eng.state().n; }
  ScalarField c() const { return eng.state().c; }
  ScalarField phi() const { return eng.state().phi; }
  double clamped_mass() const { return eng.clamped_mass(); }
};

struct HybridAccess {
  const HybridEngine& eng;
  ScalarField n() const { return eng.tumour_density(); }
  ScalarField c() const { return eng.tcell_density(); }
  ScalarField phi() const { return eng.state().phi; }
  double clamped_mass() const { return 0.0; }  // counts stay nonnegative
};

template <typename E>
[[noreturn]] void rethrow_with_context(const E& e, const std::string& note) {
  throw E(note + ": " + e.what());
}

}  // namespace

RunRecord run_continuum(const ScenarioConfig& cfg) {
  cfg.validate();
  const Grid g = cfg.params.grid();
  ContinuumState init = initial_continuum_state(g);
  const ScoreRegions regions =
      make_score_regions(init.n, cfg.score_radius, cfg.score_core_fraction);
  ContinuumEngine eng(std::move(init), cfg.params, vessel_sites(g));
  return drive(eng, ContinuumAccess{eng}, cfg, regions,
               /*want_snapshots=*/true);
}

RunRecord run_hybrid(const ScenarioConfig& cfg, std::uint64_t seed,
                     bool want_snapshots) {
  cfg.validate();
  const Grid g = cfg.params.grid();
  HybridEngine eng(initial_hybrid_state(g), cfg.params, vessel_sites(g), seed);
  const ScoreRegions regions = make_score_regions(
      eng.tumour_density(), cfg.score_radius, cfg.score_core_fraction);
  return drive(eng, HybridAccess{eng}, cfg, regions, want_snapshots);
}

EnsembleRecord run_replicates(const ScenarioConfig& cfg) {
  cfg.validate();
  EnsembleRecord ens;
  if (cfg.engine != EngineKind::hybrid) {
    // The continuum engine is deterministic: one replicate regardless of R.
    ens.replicates.push_back(run_continuum(cfg));
  } else {
    const int R = cfg.replicates;
    ens.replicates.resize(static_cast<std::size_t>(R));
    parallel_for(R, cfg.threads, [&](int r) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
      try {
        ens.replicates[static_cast<std::size_t>(r)] =
            run_hybrid(cfg, seed, /*want_snapshots=*/r == 0);
      } catch (const StepSizeError& e) {
        rethrow_with_context(e, "replicate seed " + std::to_string(seed));
      } catch (const NumericError& e) {
        rethrow_with_context(e, "replicate seed " + std::to_string(seed));
      } catch (const ConfigError& e) {
        rethrow_with_context(e, "replicate seed " + std::to_string(seed));
      }
    });
  }

  // Row-wise mean and sample variance over the common prefix (a replicate
  // stopped early contributes up to its last row).
  std::size_t rows = std::numeric_limits<std::size_t>::max();
  for (const auto& rec : ens.replicates)
    rows = std::min(rows, rec.rows.size());
  const std::size_t R = ens.replicates.size();
  ens.mean_rows.resize(rows);
  ens.var_rows.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    auto& mean = ens.mean_rows[i];
    auto& var = ens.var_rows[i];
    mean.t = var.t = ens.replicates[0].rows[i].t;
    for (const auto& rec : ens.replicates) {
      const auto& row = rec.rows[i];
      mean.rho_n += row.rho_n;
      mean.rho_c += row.rho_c;
      mean.phi_tot += row.phi_tot;
      mean.score += row.score;
    }
    mean.rho_n /= static_cast<double>(R);
    mean.rho_c /= static_cast<double>(R);
    mean.phi_tot /= static_cast<double>(R);
    mean.score /= static_cast<double>(R);
    if (R > 1) {
      for (const auto& rec : ens.replicates) {
        const auto& row = rec.rows[i];
        var.rho_n += (row.rho_n - mean.rho_n) * (row.rho_n - mean.rho_n);
        var.rho_c += (row.rho_c - mean.rho_c) * (row.rho_c - mean.rho_c);
        var.phi_tot +=
            (row.phi_tot - mean.phi_tot) * (row.phi_tot - mean.phi_tot);
        var.score += (row.score - mean.score) * (row.score - mean.score);
      }
      const double denom = static_cast<double>(R - 1);
      var.rho_n /= denom;
      var.rho_c /= denom;
      var.phi_tot /= denom;
      var.score /= denom;
    }
  }

  for (const auto& rec : ens.replicates) {
    ens.mean_final_counts.core += rec.final_counts.core;
    ens.mean_final_counts.margin += rec.final_counts.margin;
  }
  ens.mean_final_counts.core /= static_cast<double>(R);
  ens.mean_final_counts.margin /= static_cast<double>(R);
  const double mean_final_score =
      ens.mean_rows.empty() ? 0.0 : ens.mean_rows.back().score;
  ens.phenotype =
      classify(mean_final_score, ens.mean_final_counts, cfg.thresholds);
  return ens;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (int i = 0; i < count; ++i)
    out.push_back(std::pow(10.0, llo + (lhi - llo) * i / (count - 1)));
  return out;
}

std::vector<double> linear_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& cfg,
                                 const std::vector<double>& alpha_phi_values,
                                 const std::vector<double>& w_max_values) {
  cfg.validate();
  if (cfg.engine == EngineKind::both)
    throw ConfigError("sweep requires a single engine (hybrid or continuum)");
  if (alpha_phi_values.empty() || w_max_values.empty())
    throw ConfigError("sweep axis value lists must be nonempty");

  const int jobs =
      static_cast<int>(alpha_phi_values.size() * w_max_values.size());
  std::vector<SweepCell> cells(static_cast<std::size_t>(jobs));
  parallel_for(jobs, cfg.threads, [&](int j) {
    const std::size_t ai =
        static_cast<std::size_t>(j) / w_max_values.size();
    const std::size_t wi =
        static_cast<std::size_t>(j) % w_max_values.size();
    SweepCell& cell = cells[static_cast<std::size_t>(j)];
    cell.alpha_phi = alpha_phi_values[ai];
    cell.w_max = w_max_values[wi];
    ScenarioConfig cell_cfg = cfg;
    cell_cfg.params.alpha_phi = cell.alpha_phi;
    cell_cfg.params.w_max = cell.w_max;
    cell_cfg.snapshot_times.clear();
    cell_cfg.threads = 1;  // the pool parallelism lives at the cell level
    try {
      if (cfg.engine == EngineKind::continuum) {
        const RunRecord rec = run_continuum(cell_cfg);
        cell.score_final = rec.rows.back().score;
        cell.rho_n_final = rec.rows.back().rho_n;
        cell.rho_c_final = rec.rows.back().rho_c;
        cell.final_counts = rec.final_counts;
        cell.label = rec.phenotype;
      } else {
        const EnsembleRecord ens = run_replicates(cell_cfg);
        cell.score_final = ens.mean_rows.back().score;
        cell.rho_n_final = ens.mean_rows.back().rho_n;
        cell.rho_c_final = ens.mean_rows.back().rho_c;
        cell.final_counts = ens.mean_final_counts;
        cell.label = ens.phenotype;
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.score_final = cell.rho_n_final = cell.rho_c_final =
          std::numeric_limits<double>::quiet_NaN();
    }
  });
  return cells;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& cfg) {
  return run_sweep(cfg,
                   log_spaced(cfg.sweep_alpha_phi_min, cfg.sweep_alpha_phi_max,
                              cfg.sweep_alpha_phi_count),
                   linear_spaced(cfg.sweep_w_max_min, cfg.sweep_w_max_max,
                                 cfg.sweep_w_max_count));
}

ClassifyThresholds calibrate_thresholds(const std::vector<SweepCell>& cells,
                                        double exclusion_ratio) {
  std::vector<double> scores;
  for (const auto& cell : cells)
    if (!cell.failed()) scores.push_back(cell.score_final);
  if (scores.empty())
    throw NumericError("threshold calibration needs at least one sweep cell");
  ClassifyThresholds th;
  th.t_low = percentile(scores, 0.33);
  th.t_high = percentile(scores, 0.66);
  th.exclusion_ratio = exclusion_ratio;
  return th;
}

std::vector<TherapyOutcome> run_therapy(
    const ScenarioConfig& cfg, const std::vector<std::string>& preset_names) {
  cfg.validate();
  if (cfg.engine == EngineKind::both)
    throw ConfigError("therapy requires a single engine (hybrid or continuum)");
  std::vector<const TherapyPreset*> presets;
  if (preset_names.empty()) {
    for (const auto& p : therapy_presets()) presets.push_back(&p);
  } else {
    for (const auto& name : preset_names)
      presets.push_back(&therapy_preset(name));
  }
  const auto& envs = environment_presets();

  const int jobs = static_cast<int>(presets.size() * envs.size());
  std::vector<TherapyOutcome> outcomes(static_cast<std::size_t>(jobs));
  parallel_for(jobs, cfg.threads, [&](int j) {
    const std::size_t pi = static_cast<std::size_t>(j) / envs.size();
    const std::size_t ei = static_cast<std::size_t>(j) % envs.size();
    TherapyOutcome& out = outcomes[static_cast<std::size_t>(j)];
    out.environment = envs[ei].name;
    out.treatment = presets[pi]->name;
    ScenarioConfig run_cfg = cfg;
    run_cfg.params =
        with_therapy(with_environment(cfg.params, envs[ei]), *presets[pi]);
    run_cfg.snapshot_times.clear();
    run_cfg.threads = 1;
    out.params = run_cfg.params;
    if (cfg.engine == EngineKind::continuum) {
      const RunRecord rec = run_continuum(run_cfg);
      out.rho_n_final = rec.rows.back().rho_n;
      out.rho_c_final = rec.rows.back().rho_c;
      out.score_final = rec.rows.back().score;
      out.label = rec.phenotype;
    } else {
      const EnsembleRecord ens = run_replicates(run_cfg);
      out.rho_n_final = ens.mean_rows.back().rho_n;
      out.rho_c_final = ens.mean_rows.back().rho_c;
      out.score_final = ens.mean_rows.back().score;
      out.label = ens.phenotype;
    }
  });
  return outcomes;
}

}  // namespace timsim
