// Acceptance gate: end-to-end checks of the simulator against its contract.
// Each criterion prints exactly one [PASS]/[FAIL] line; the process exits
// nonzero if any criterion fails.  Invoke with --cli PATH (the command-line
// binary, used by the reproducibility criterion).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "timsim/chemo.hpp"
#include "timsim/config.hpp"
#include "timsim/continuum.hpp"
#include "timsim/csv.hpp"
#include "timsim/errors.hpp"
#include "timsim/grid.hpp"
#include "timsim/hybrid.hpp"
#include "timsim/immunoscore.hpp"
#include "timsim/init.hpp"
#include "timsim/run.hpp"

using namespace timsim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared scenario builders.

ScenarioConfig baseline_config(EngineKind engine) {
  ScenarioConfig cfg;
  cfg.params.zeta_n = 0.004;
  cfg.params.alpha_phi = 1.5;
  cfg.params.w_max = 2.96e5;
  cfg.engine = engine;
  cfg.replicates = engine == EngineKind::hybrid ? 3 : 1;
  cfg.threads = 3;
  cfg.output_every = 100;
  return cfg;
}

ScenarioConfig square_config(const EnvironmentPreset& env, EngineKind engine) {
  ScenarioConfig cfg;
  cfg.params.zeta_n = 1.2e-4;
  cfg.params = with_environment(cfg.params, env);
  cfg.engine = engine;
  cfg.replicates = engine == EngineKind::hybrid ? 3 : 1;
  cfg.threads = 3;
  cfg.output_every = 100;
  return cfg;
}

// ---------------------------------------------------------------------------
// Criterion 1+2 shared state.

struct PairedRuns {
  RunRecord continuum;
  EnsembleRecord hybrid;
  double continuum_seconds = 0.0;
  double hybrid_seconds = 0.0;
};

PairedRuns run_pair(const ScenarioConfig& cont_cfg,
                    const ScenarioConfig& hyb_cfg) {
  PairedRuns out;
  const auto t0 = Clock::now();
  out.continuum = run_continuum(cont_cfg);
  out.continuum_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  out.hybrid = run_replicates(hyb_cfg);
  out.hybrid_seconds = seconds_since(t1);
  return out;
}

/// Maximum relative deviation of the ensemble mean from the continuum curve,
/// evaluated wherever the continuum population exceeds `floor` cells.
struct Deviation {
  double max_rel = 0.0;
  double at_t = 0.0;
  std::string channel;
};

Deviation max_deviation(const RunRecord& cont, const EnsembleRecord& hyb,
                        double floor) {
  Deviation dev;
  const std::size_t rows = std::min(cont.rows.size(), hyb.mean_rows.size());
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& c = cont.rows[i];
    const auto& h = hyb.mean_rows[i];
    if (c.rho_n > floor) {
      const double rel = std::abs(h.rho_n - c.rho_n) / c.rho_n;
      if (rel > dev.max_rel) dev = {rel, c.t, "tumour"};
    }
    if (c.rho_c > floor) {
      const double rel = std::abs(h.rho_c - c.rho_c) / c.rho_c;
      if (rel > dev.max_rel) dev = {rel, c.t, "T-cell"};
    }
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Criterion 4: attractant solver oracle.

Criterion check_chemo_oracle() {
  Criterion crit{4, "attractant solver oracle (decay + mass identity)"};
  ModelParams p;
  p.zeta_n = 0.0;
  const Grid g = p.grid();

  // Uniform field with no source decays exactly like the ODE.
  ScalarField phi(g, 50.0);
  const ScalarField none(g);
  std::vector<double> scratch;
  const long steps = std::llround(1.0 / p.tau);
  for (long k = 0; k < steps; ++k) chemo_step(phi, none, p, scratch);
  const double expected = 50.0 * std::exp(-p.kappa_phi * 1.0);
  double max_err = 0.0;
  for (const double x : phi.v)
    max_err = std::max(max_err, std::abs(x - expected) / expected);
  const double decay_bound = 1.1 * p.kappa_phi * p.tau * 1.0;

  // Per-step mass identity on rough random fields with an active source.
  std::mt19937_64 gen(20260817);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField phi2(g), n2(g);
  for (double& x : phi2.v) x = 3.0e5 * u(gen);
  for (double& x : n2.v) x = 2.0e5 * u(gen);
  const double n_mass = total_mass(n2);
  double worst_identity = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double before = total_mass(phi2);
    chemo_step(phi2, n2, p, scratch);
    const double predicted =
        (1.0 - p.tau * p.kappa_phi) * before + p.tau * p.alpha_phi * n_mass;
    worst_identity = std::max(
        worst_identity, std::abs(total_mass(phi2) - predicted) /
                            std::max(std::abs(predicted), 1.0));
  }

  crit.pass = max_err < decay_bound && worst_identity < 1e-12;
  crit.detail = "decay error " + fmt(max_err) + " (bound " + fmt(decay_bound) +
                "), mass identity " + fmt(worst_identity) + " (bound 1e-12)";
  return crit;
}

// ---------------------------------------------------------------------------
// Criterion 5: transport scheme conserves mass.

Criterion check_flux_conservation() {
  Criterion crit{5, "T-cell transport mass conservation"};
  ModelParams p;
  p.zeta_n = 0.0;
  p.alpha_c = 0.0;
  p.mu_c = 0.0;
  p.gamma_c = 2e-6;  // explicit: the raw kernel does not derive `auto`
  const Grid g = p.grid();
  std::mt19937_64 gen(8675309);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField c(g), nk(g), phi(g);
  for (double& x : c.v) x = 1.0e5 * u(gen);
  for (double& x : nk.v) x = 1.0e5 * u(gen);
  for (double& x : phi.v) x = 1.0e3 * u(gen);
  const double mass0 = total_mass(c);
  std::vector<double> scratch;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    continuum_step_c(c, nk, phi, 0.0, 0.0, {}, p, scratch);
    worst = std::max(worst, std::abs(total_mass(c) - mass0) / mass0);
  }
  crit.pass = worst < 1e-10;
  crit.detail = "max relative drift " + fmt(worst) +
                " over 10000 steps (bound 1e-10)";
  return crit;
}

// ---------------------------------------------------------------------------
// Criterion 7: single-cell random-walk occupancy oracle.

Criterion check_random_walk() {
  Criterion crit{7, "random-walk occupancy oracle"};
  const int P = 9;
  ModelParams p;
  p.dim = 1;
  p.points = P;
  p.tau = 1.0;
  p.t_final = 20.0;
  p.zeta_n = 0.0;
  p.alpha_n = 0.0;
  p.mu_n = 0.0;
  p.alpha_c = 0.0;
  p.mu_c = 0.0;
  p.gamma_c = 0.0;
  p.beta_phi = 0.0;
  p.alpha_phi = 0.0;
  p.kappa_phi = 0.0;
  p.w_max = 1e300;           // exclusion factor is exactly 1
  const double chi = p.grid().spacing();
  p.beta_c = 0.6 * chi * chi / (2.0 * p.tau);  // per-direction hop prob 0.3

  // Exact 20-step occupancy from the transition matrix (blocked moves at the
  // walls turn into stays).
  const double q = p.beta_c * p.tau / (chi * chi);
  std::array<double, 9> exact{};
  exact[4] = 1.0;
  for (int step = 0; step < 20; ++step) {
    std::array<double, 9> next{};
    for (int i = 0; i < P; ++i) {
      const double ql = i > 0 ? q : 0.0;
      const double qr = i < P - 1 ? q : 0.0;
      next[static_cast<std::size_t>(i)] +=
          exact[static_cast<std::size_t>(i)] * (1.0 - ql - qr);
      if (i > 0)
        next[static_cast<std::size_t>(i - 1)] +=
            exact[static_cast<std::size_t>(i)] * ql;
      if (i < P - 1)
        next[static_cast<std::size_t>(i + 1)] +=
            exact[static_cast<std::size_t>(i)] * qr;
    }
    exact = next;
  }

  const Grid g = p.grid();
  const int replicates = 100000;
  std::array<std::int64_t, 9> occupancy{};
  for (int r = 0; r < replicates; ++r) {
    HybridState s;
    s.grid = g;
    s.tumour.assign(9, 0);
    s.tcell.assign(9, 0);
    s.tcell[4] = 1;
    s.phi = ScalarField(g);
    HybridEngine eng(std::move(s), p, {},
                     424242u + static_cast<std::uint64_t>(r));
    for (int k = 0; k < 20; ++k) eng.step();
    for (int i = 0; i < P; ++i)
      if (eng.state().tcell[static_cast<std::size_t>(i)] == 1) {
        occupancy[static_cast<std::size_t>(i)] += 1;
        break;
      }
  }
  double tv = 0.0;
  for (int i = 0; i < P; ++i)
    tv += std::abs(static_cast<double>(occupancy[static_cast<std::size_t>(i)]) /
                       replicates -
                   exact[static_cast<std::size_t>(i)]);
  tv *= 0.5;
  crit.pass = tv < 0.01;
  crit.detail = "total-variation distance " + fmt(tv) +
                " over 100000 replicates (bound 0.01)";
  return crit;
}

// ---------------------------------------------------------------------------
// Criterion 8: bytewise reproducibility of the command-line pipeline.

bool read_file(const fs::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

Criterion check_reproducibility(const std::string& cli) {
  Criterion crit{8, "bytewise reproducibility of the command-line pipeline"};
  if (cli.empty()) {
    crit.detail = "no --cli path given";
    return crit;
  }
  const fs::path base =
      fs::temp_directory_path() / "timsim_acceptance_repro";
  std::error_code ec;
  fs::remove_all(base, ec);
  fs::create_directories(base);
  const fs::path cfg_path = base / "config.txt";
  {
    std::ofstream cfg(cfg_path);
    cfg << "points = 21\n"
           "tau = 0.0002\n"
           "t_final = 0.05\n"
           "zeta_n = 0.004\n"
           "engine = both\n"
           "replicates = 2\n"
           "seed = 7\n"
           "output_every = 50\n"
           "snapshot_times = 0.025,0.05\n";
  }
  auto invoke = [&](const std::string& out_dir) {
    const std::string cmd = "'" + cli + "' run --config '" +
                            cfg_path.string() + "' --out '" + out_dir +
                            "' > '" + out_dir + ".log' 2>&1";
    return std::system(cmd.c_str());
  };
  const fs::path out1 = base / "first";
  const fs::path out2 = base / "second";
  if (invoke(out1.string()) != 0 || invoke(out2.string()) != 0) {
    crit.detail = "command-line run failed; see " + base.string();
    return crit;
  }

  std::vector<std::string> rel1, rel2;
  for (const auto& e : fs::recursive_directory_iterator(out1))
    if (e.is_regular_file())
      rel1.push_back(fs::relative(e.path(), out1).string());
  for (const auto& e : fs::recursive_directory_iterator(out2))
    if (e.is_regular_file())
      rel2.push_back(fs::relative(e.path(), out2).string());
  std::sort(rel1.begin(), rel1.end());
  std::sort(rel2.begin(), rel2.end());
  if (rel1 != rel2 || rel1.empty()) {
    crit.detail = "output file sets differ (" + std::to_string(rel1.size()) +
                  " vs " + std::to_string(rel2.size()) + " files)";
    return crit;
  }
  for (const auto& rel : rel1) {
    std::string a, b;
    if (!read_file(out1 / rel, a) || !read_file(out2 / rel, b) || a != b) {
      crit.detail = "file differs between identical runs: " + rel;
      return crit;
    }
  }
  crit.pass = true;
  crit.detail = std::to_string(rel1.size()) +
                " output files byte-identical across repeated runs";
  fs::remove_all(base, ec);
  return crit;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  int sweep_threads = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else if (arg == "--threads" && i + 1 < argc) {
      sweep_threads = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s --cli PATH [--threads N]\n", argv[0]);
      return 2;
    }
  }

  std::vector<Criterion> results;
  const auto wall0 = Clock::now();

  // --- Fast, self-contained oracles -------------------------------------
  std::printf("running solver oracles...\n");
  std::fflush(stdout);
  results.push_back(check_chemo_oracle());
  results.push_back(check_flux_conservation());
  results.push_back(check_random_walk());

  // --- Baseline eradication + cross-validation (criteria 1 and 2) -------
  std::printf("running baseline scenario (continuum + 3 replicates)...\n");
  std::fflush(stdout);
  Criterion c1{1, "baseline eradication within the runtime budget"};
  Criterion c2{2, "engine cross-validation within 10%"};
  try {
    const PairedRuns baseline = run_pair(baseline_config(EngineKind::continuum),
                                         baseline_config(EngineKind::hybrid));
    const double cont_final = baseline.continuum.final_row().rho_n;
    bool hybrid_zero = true;
    for (const auto& rep : baseline.hybrid.replicates)
      hybrid_zero = hybrid_zero && rep.final_row().rho_n == 0.0;
    const bool on_time =
        baseline.continuum_seconds < 300.0 && baseline.hybrid_seconds < 1800.0;

    // Reduced-scale fallback: must also eradicate (and is the deciding run
    // if this machine misses the full-scale runtime budget).
    std::printf("running reduced-scale eradication check...\n");
    std::fflush(stdout);
    ScenarioConfig small_cont = baseline_config(EngineKind::continuum);
    small_cont.params.points = 41;
    small_cont.params.t_final = 8.0;
    ScenarioConfig small_hyb = baseline_config(EngineKind::hybrid);
    small_hyb.params.points = 41;
    small_hyb.params.t_final = 8.0;
    const PairedRuns reduced = run_pair(small_cont, small_hyb);
    bool reduced_zero = reduced.continuum.final_row().rho_n < 1.0;
    for (const auto& rep : reduced.hybrid.replicates)
      reduced_zero = reduced_zero && rep.final_row().rho_n == 0.0;

    // A runtime miss downgrades the verdict to the reduced-scale run rather
    // than failing outright; both outcomes are reported.
    const bool full_ok = cont_final < 1.0 && hybrid_zero;
    c1.pass = on_time ? (full_ok && reduced_zero) : reduced_zero;
    c1.detail = "continuum rho_n(15) = " + fmt(cont_final) + " in " +
                fmt(baseline.continuum_seconds, 3) + " s; replicates " +
                (hybrid_zero ? "all eradicated" : "NOT all eradicated") +
                " in " + fmt(baseline.hybrid_seconds, 3) + " s" +
                (on_time ? "" : " (over budget)") + "; reduced scale " +
                (reduced_zero ? "eradicated" : "NOT eradicated");

    std::printf("running the four microenvironment scenarios...\n");
    std::fflush(stdout);
    std::vector<PairedRuns> squares;
    {
      // Continuum runs in parallel, then the replicate ensembles (each
      // already three-way parallel) one after another.
      std::vector<std::future<RunRecord>> cont_futures;
      for (const auto& env : environment_presets())
        cont_futures.push_back(std::async(std::launch::async, [&env] {
          return run_continuum(square_config(env, EngineKind::continuum));
        }));
      for (std::size_t e = 0; e < environment_presets().size(); ++e) {
        PairedRuns pr;
        pr.continuum = cont_futures[e].get();
        pr.hybrid = run_replicates(
            square_config(environment_presets()[e], EngineKind::hybrid));
        squares.push_back(std::move(pr));
      }
    }

    Deviation worst = max_deviation(baseline.continuum, baseline.hybrid, 100.0);
    std::string worst_where = "baseline";
    for (std::size_t e = 0; e < squares.size(); ++e) {
      const Deviation dev =
          max_deviation(squares[e].continuum, squares[e].hybrid, 100.0);
      if (dev.max_rel > worst.max_rel) {
        worst = dev;
        worst_where = "environment " + environment_presets()[e].name;
      }
    }
    c2.pass = worst.max_rel <= 0.10;
    c2.detail = "max relative deviation " + fmt(worst.max_rel) + " (" +
                worst.channel + ", " + worst_where + ", t = " +
                fmt(worst.at_t, 3) + "; bound 0.10)";

    // --- Infiltration-score ordering (criterion 3) ---------------------
    std::printf("running the calibration sweep...\n");
    std::fflush(stdout);
    Criterion c3{3, "infiltration-score ordering and phenotype labels"};
    ScenarioConfig sweep_cfg;
    sweep_cfg.params.zeta_n = 1.2e-4;
    sweep_cfg.engine = EngineKind::continuum;
    sweep_cfg.threads = sweep_threads;
    const std::vector<SweepCell> cells = run_sweep(sweep_cfg);
    int failed_cells = 0;
    for (const auto& cell : cells) failed_cells += cell.failed() ? 1 : 0;
    const ClassifyThresholds th = calibrate_thresholds(cells, 1.0);

    const double i1 = squares[0].continuum.final_row().score;
    const double i2 = squares[1].continuum.final_row().score;
    const double i3 = squares[2].continuum.final_row().score;
    const double i4 = squares[3].continuum.final_row().score;
    const Phenotype ph2 = classify(i2, squares[1].continuum.final_counts, th);
    const Phenotype ph3 = classify(i3, squares[2].continuum.final_counts, th);
    const bool ordering = i1 < std::min(i2, i3) && std::min(i2, i3) < i4;
    c3.pass = ordering && failed_cells == 0 &&
              ph2 == Phenotype::altered_excluded &&
              ph3 == Phenotype::altered_immunosuppressed;
    c3.detail = "I_f = [" + fmt(i1) + ", " + fmt(i2) + ", " + fmt(i3) + ", " +
                fmt(i4) + "], thresholds [" + fmt(th.t_low) + ", " +
                fmt(th.t_high) + "], labels [" + phenotype_label(ph2) + ", " +
                phenotype_label(ph3) + "], " +
                std::to_string(failed_cells) + " failed cells";
    results.push_back(std::move(c3));
  } catch (const std::exception& e) {
    c1.detail = std::string("exception: ") + e.what();
    c2.detail = c1.detail;
    Criterion c3{3, "infiltration-score ordering and phenotype labels"};
    c3.detail = c1.detail;
    results.push_back(std::move(c3));
  }
  results.push_back(std::move(c1));
  results.push_back(std::move(c2));

  // --- Treatment response trends (criterion 6) ---------------------------
  std::printf("running the treatment matrix...\n");
  std::fflush(stdout);
  Criterion c6{6, "treatment response trends"};
  try {
    ScenarioConfig cfg;
    cfg.params.zeta_n = 1.2e-4;
    cfg.engine = EngineKind::continuum;
    cfg.threads = sweep_threads;
    const std::vector<TherapyOutcome> grid = run_therapy(cfg, {});
    auto cell = [&](int preset, int env) -> const TherapyOutcome& {
      return grid[static_cast<std::size_t>(preset * 4 + env)];
    };
    const double none_cold = cell(0, 0).rho_n_final;
    const double none_hot = cell(0, 3).rho_n_final;
    const double pd1_cold = cell(1, 0).rho_n_final;
    const double pd1_hot = cell(1, 3).rho_n_final;
    const double dual_hot = cell(2, 3).rho_n_final;
    const double hot_drop = (none_hot - pd1_hot) / none_hot;
    const double cold_change = std::abs(pd1_cold - none_cold) / none_cold;
    bool combo_lowers_all = true;
    for (int e = 0; e < 4; ++e)
      combo_lowers_all = combo_lowers_all &&
                         cell(3, e).rho_n_final < cell(0, e).rho_n_final;
    c6.pass = hot_drop >= 0.20 && cold_change < 0.05 && dual_hot < pd1_hot &&
              combo_lowers_all;
    c6.detail = "kill-boost drop (hot) " + fmt(hot_drop) +
                " (need >= 0.2), (cold) " + fmt(cold_change) +
                " (need < 0.05); dual " + fmt(dual_hot) + " < " +
                fmt(pd1_hot) + " " + (dual_hot < pd1_hot ? "ok" : "VIOLATED") +
                "; combo lowers all: " + (combo_lowers_all ? "yes" : "no");
  } catch (const std::exception& e) {
    c6.detail = std::string("exception: ") + e.what();
  }
  results.push_back(std::move(c6));

  // --- Reproducibility (criterion 8) --------------------------------------
  std::printf("running reproducibility check...\n");
  std::fflush(stdout);
  results.push_back(check_reproducibility(cli));

  // --- Report -------------------------------------------------------------
  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  int passed = 0;
  std::printf("\n");
  for (const auto& r : results) {
    std::printf("[%s] %d. %s: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    passed += r.pass ? 1 : 0;
  }
  std::printf("acceptance: %d/%zu criteria passed in %.0f s\n", passed,
              results.size(), seconds_since(wall0));
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
