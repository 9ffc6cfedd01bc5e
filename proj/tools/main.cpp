// Command-line front end: `run`, `sweep` and `therapy` subcommands around
// the simulation library.  Exit codes: 0 success, 2 configuration or
// validation error, 3 numerical failure (step size / stability / negativity).

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "timsim/config.hpp"
#include "timsim/csv.hpp"
#include "timsim/errors.hpp"
#include "timsim/run.hpp"

namespace fs = std::filesystem;
using namespace timsim;

namespace {

std::vector<double> split_doubles(const std::string& list,
                                  const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError(flag + ": expected a comma-separated number list, got '" +
                        list + "'");
    }
  }
  if (out.empty())
    throw ConfigError(flag + ": expected a non-empty number list");
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path.string() + "'");
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir.string() +
                      "': " + ec.message());
}

void write_snapshots(const fs::path& dir, const std::vector<Snapshot>& snaps) {
  for (const auto& s : snaps) {
    auto out = open_output(dir / snapshot_filename(s.field, s.t));
    write_snapshot(out, s.data);
  }
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::string> engine;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario config file")
        ->required();
    cmd->add_option("--out", out_dir, "Output directory")->required();
    cmd->add_option("--engine", engine, "hybrid, continuum or both");
    cmd->add_option("--seed", seed, "Base random seed");
    cmd->add_option("--replicates", replicates, "Stochastic replicate count");
  }

  ScenarioConfig load() const {
    ScenarioConfig cfg = load_config(config_path);
    if (engine) cfg.engine = parse_engine(*engine);
    if (seed) cfg.seed = *seed;
    if (replicates) cfg.replicates = *replicates;
    cfg.validate();
    return cfg;
  }
};

void report_run(std::ostream& os, const std::string& engine,
                const std::vector<TimeSeriesRow>& rows, Phenotype phenotype) {
  const auto& last = rows.back();
  os << engine << ": t = " << format_float(last.t)
     << "  tumour = " << format_float(last.rho_n)
     << "  t_cells = " << format_float(last.rho_c)
     << "  immunoscore = " << format_float(last.score) << "  ("
     << phenotype_label(phenotype) << ")\n";
}

void run_one_engine(const ScenarioConfig& cfg, EngineKind engine,
                    const fs::path& out_root) {
  ScenarioConfig engine_cfg = cfg;
  engine_cfg.engine = engine;
  const fs::path dir = out_root / engine_name(engine);
  ensure_dir(dir);
  if (engine == EngineKind::continuum) {
    const RunRecord rec = run_continuum(engine_cfg);
    auto out = open_output(dir / "timeseries.csv");
    write_timeseries(out, rec.rows);
    write_snapshots(dir, rec.snapshots);
    report_run(std::cout, "continuum", rec.rows, rec.phenotype);
  } else {
    const EnsembleRecord ens = run_replicates(engine_cfg);
    auto out = open_output(dir / "timeseries.csv");
    write_timeseries(out, ens.mean_rows, ens.var_rows);
    for (std::size_t r = 0; r < ens.replicates.size(); ++r) {
      auto rep_out =
          open_output(dir / ("timeseries_rep" + std::to_string(r) + ".csv"));
      write_timeseries(rep_out, ens.replicates[r].rows);
    }
    write_snapshots(dir, ens.replicates[0].snapshots);
    report_run(std::cout, "hybrid", ens.mean_rows, ens.phenotype);
  }
}

int cmd_run(const CommonFlags& flags,
            const std::optional<std::string>& snapshots) {
  ScenarioConfig cfg = flags.load();
  if (snapshots) cfg.snapshot_times = split_doubles(*snapshots, "--snapshots");
  cfg.validate();
  const fs::path out_root = flags.out_dir;
  ensure_dir(out_root);
  {
    auto cfg_out = open_output(out_root / "config.txt");
    save_config(cfg, cfg_out);
  }
  if (cfg.engine == EngineKind::both) {
    run_one_engine(cfg, EngineKind::continuum, out_root);
    run_one_engine(cfg, EngineKind::hybrid, out_root);
  } else {
    run_one_engine(cfg, cfg.engine, out_root);
  }
  return 0;
}

int cmd_sweep(const CommonFlags& flags,
              const std::optional<std::string>& alpha_list,
              const std::optional<std::string>& wmax_list) {
  ScenarioConfig cfg = flags.load();
  std::vector<double> alphas =
      alpha_list ? split_doubles(*alpha_list, "--alpha-phi")
                 : log_spaced(cfg.sweep_alpha_phi_min, cfg.sweep_alpha_phi_max,
                              cfg.sweep_alpha_phi_count);
  std::vector<double> wmaxes =
      wmax_list ? split_doubles(*wmax_list, "--w-max")
                : linear_spaced(cfg.sweep_w_max_min, cfg.sweep_w_max_max,
                                cfg.sweep_w_max_count);
  const auto cells = run_sweep(cfg, alphas, wmaxes);
  const fs::path out_root = flags.out_dir;
  ensure_dir(out_root);
  auto out = open_output(out_root / "sweep.csv");
  write_sweep(out, cells);
  int failed = 0;
  for (const auto& c : cells)
    if (c.failed()) {
      ++failed;
      std::cerr << "cell (alpha_phi = " << format_float(c.alpha_phi)
                << ", w_max = " << format_float(c.w_max)
                << ") failed: " << c.error << "\n";
    }
  std::cout << "sweep: " << cells.size() - failed << "/" << cells.size()
            << " cells completed\n";
  return 0;
}

int cmd_therapy(const CommonFlags& flags,
                const std::optional<std::string>& preset) {
  ScenarioConfig cfg = flags.load();
  std::vector<std::string> presets;
  if (preset) presets.push_back(*preset);
  const auto outcomes = run_therapy(cfg, presets);
  const fs::path out_root = flags.out_dir;
  ensure_dir(out_root);
  auto out = open_output(out_root / "therapy.csv");
  write_therapy(out, outcomes);
  for (const auto& o : outcomes)
    std::cout << "environment " << o.environment << " + " << o.treatment
              << ": tumour = " << format_float(o.rho_n_final)
              << "  t_cells = " << format_float(o.rho_c_final) << "  ("
              << phenotype_label(o.label) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tumour-immune lattice/continuum simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, therapy_flags;
  std::optional<std::string> snapshots, alpha_list, wmax_list, preset;

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_flags.attach(run_cmd);
  run_cmd->add_option("--snapshots", snapshots,
                      "Comma-separated times for field snapshots");

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Scan the (alpha_phi, w_max) plane");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--alpha-phi", alpha_list,
                        "Comma-separated alpha_phi values");
  sweep_cmd->add_option("--w-max", wmax_list, "Comma-separated w_max values");

  CLI::App* therapy_cmd = app.add_subcommand(
      "therapy", "Run the reference environments under treatment presets");
  therapy_flags.attach(therapy_cmd);
  therapy_cmd->add_option(
      "--preset", preset, "none, anti_pd1, dual or chemo_anti_pd1 (default: all)");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return cmd_run(run_flags, snapshots);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, alpha_list, wmax_list);
    if (therapy_cmd->parsed()) return cmd_therapy(therapy_flags, preset);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const StepSizeError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
