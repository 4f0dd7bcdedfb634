// SPDX-License-Identifier: Apache-2.0
//
// fonspn command-line tool. Subcommands:
//   design-bank  dump analysis filter coefficients as CSV
//   bounds       print the fractional-order interval, step-size bound,
//                and steady-state prediction for a configuration
//   simulate     run one Monte Carlo experiment to a trace CSV
//   sweep-mu     empirical steady-state deviation over a step-size grid
//   steady       theory vs. empirical steady state for a list of step sizes
//
// Exit codes: 0 success, 2 configuration error, 3 all trials diverged.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fonspn/config.hpp"
#include "fonspn/csv.hpp"
#include "fonspn/experiment.hpp"
#include "fonspn/theory.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAllDiverged = 3;

struct Overrides {
  std::optional<std::string> algo;
  std::optional<double> mu, p, beta, eps;
  std::optional<int> trials, taps, threads;
  std::optional<long> samples, flip_at, steady_window, moment_frames;
  std::optional<long> master_seed;
};

// Every command-line flag wins over its config-file key.
void apply(const Overrides& ov, fonspn::ExperimentConfig& cfg) {
  using fonspn::Algorithm;
  if (ov.algo) {
    if (*ov.algo == "nsaf") cfg.algo.algorithm = Algorithm::Nsaf;
    else if (*ov.algo == "nspn") cfg.algo.algorithm = Algorithm::Nspn;
    else if (*ov.algo == "fonspn") cfg.algo.algorithm = Algorithm::Fonspn;
    else throw fonspn::ConfigError("--algo must be nsaf, nspn, or fonspn");
  }
  if (ov.mu) cfg.algo.mu = *ov.mu;
  if (ov.p) cfg.algo.p = *ov.p;
  if (ov.beta) cfg.algo.beta = *ov.beta;
  if (ov.eps) cfg.algo.eps = *ov.eps;
  if (ov.taps) cfg.algo.taps = *ov.taps;
  if (cfg.algo.algorithm == Algorithm::Nsaf) { cfg.algo.p = 2.0; cfg.algo.beta = 1.0; }
  if (cfg.algo.algorithm == Algorithm::Nspn) cfg.algo.beta = 1.0;
  if (ov.trials) cfg.trials = *ov.trials;
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.samples) cfg.total_samples = *ov.samples;
  if (ov.flip_at) cfg.flip_at = *ov.flip_at >= 0 ? std::optional<long>(*ov.flip_at) : std::nullopt;
  if (ov.steady_window) cfg.steady_window = *ov.steady_window;
  if (ov.moment_frames) cfg.moment_frames = *ov.moment_frames;
  if (ov.master_seed) cfg.master_seed = static_cast<std::uint64_t>(*ov.master_seed);
  cfg.validate();
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--algo", ov.algo, "Algorithm: nsaf, nspn, fonspn");
  cmd->add_option("--mu", ov.mu, "Step size");
  cmd->add_option("--p", ov.p, "Norm exponent");
  cmd->add_option("--beta", ov.beta, "Fractional order");
  cmd->add_option("--eps", ov.eps, "Regularization");
  cmd->add_option("--taps", ov.taps, "Adaptive filter length");
  cmd->add_option("--trials", ov.trials, "Monte Carlo trials");
  cmd->add_option("--samples", ov.samples, "Fullband samples per trial");
  cmd->add_option("--flip-at", ov.flip_at, "System sign flip index (-1 disables)");
  cmd->add_option("--steady-window", ov.steady_window, "Steady-state window (frames)");
  cmd->add_option("--moment-frames", ov.moment_frames, "Frames for moment estimation");
  cmd->add_option("--master-seed", ov.master_seed, "Master seed");
  cmd->add_option("--threads", ov.threads, "Worker threads (0 = auto)");
}

fonspn::SubbandMoments measure_moments(const fonspn::ExperimentConfig& cfg) {
  const fonspn::FilterBank bank = fonspn::design_bank(cfg.bands, cfg.bank_length);
  return fonspn::estimate_moments(bank, cfg.input, cfg.noise, cfg.algo.p,
                                  cfg.algo.beta, cfg.algo.taps,
                                  cfg.moment_frames,
                                  fonspn::substream_seed(cfg.master_seed, 3, 0));
}

void warn_on_model_mismatch(const fonspn::SubbandMoments& m) {
  if (!fonspn::analysis_assumption_holds(m))
    std::cerr << "warning: bound and steady-state formulas assume p - beta = 1 "
                 "(configured p - beta = " << m.p - m.beta << ")\n";
  if (m.heavy_tail)
    std::cerr << "warning: heavy-tailed source, estimated moments have no "
                 "finite population counterpart\n";
}

double steady_of_aggregate(const fonspn::AggregateTrace& agg, long window) {
  return fonspn::steady_state_msd_empirical(agg.mean_db, window).db;
}

int cmd_design_bank(int bands, int len, const std::string& out_path) {
  const fonspn::FilterBank bank = fonspn::design_bank(bands, len);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << "# bands = " << bands << ", length = " << len << "\n";
  for (const auto& f : bank.coeffs) {
    for (std::size_t n = 0; n < f.size(); ++n) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", f[n]);
      out << (n ? "," : "") << buf;
    }
    out << "\n";
  }
  std::cout << "wrote " << bands << " x " << len << " bank to " << out_path << "\n";
  return 0;
}

int cmd_bounds(const fonspn::ExperimentConfig& cfg, const std::string& out_path) {
  const fonspn::SubbandMoments m = measure_moments(cfg);
  warn_on_model_mismatch(m);

  const double alpha = std::min(fonspn::characteristic_exponent(cfg.input.driving),
                                fonspn::characteristic_exponent(cfg.noise.driving));
  std::vector<std::pair<std::string, double>> rows;
  const fonspn::BetaRange range = fonspn::beta_range(cfg.algo.p, alpha);
  rows.emplace_back("beta_lower_exclusive", range.lower);
  rows.emplace_back("beta_upper_inclusive", range.upper);
  const double bound = fonspn::step_size_bound(m);
  rows.emplace_back("mu_bound", bound);

  const std::vector<double> h0 = fonspn::make_true_system(cfg);
  double msd0 = 0.0;
  for (double v : h0) msd0 += v * v;
  rows.emplace_back("mu_bound_msd0", fonspn::step_size_bound_msd0(m, msd0));

  try {
    const double msd = fonspn::steady_state_msd(m, cfg.algo.mu);
    rows.emplace_back("steady_state_msd", msd);
    rows.emplace_back("steady_state_msd_db", 10.0 * std::log10(msd));
  } catch (const std::domain_error&) {
    std::cerr << "warning: mu = " << cfg.algo.mu
              << " lies outside the model's stability region\n";
    rows.emplace_back("steady_state_msd", std::numeric_limits<double>::infinity());
  }

  std::cout << fonspn::format_rows_csv(rows);
  if (!out_path.empty())
    fonspn::write_rows_csv(out_path, rows, fonspn::config_echo(cfg));
  return 0;
}

int cmd_simulate(const fonspn::ExperimentConfig& cfg, const std::string& out_path) {
  const fonspn::AggregateTrace agg = fonspn::run_experiment(cfg);
  fonspn::write_trace_csv(out_path, agg, fonspn::config_echo(cfg));
  if (agg.all_diverged()) {
    std::cerr << "all " << agg.trials << " trials diverged\n";
    return kExitAllDiverged;
  }
  std::cout << "wrote " << agg.mean_db.size() << " updates ("
            << agg.diverged_trials << "/" << agg.trials
            << " trials diverged) to " << out_path << "\n";
  return 0;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw fonspn::ConfigError("--grid expects start:stop:step");
  const double start = std::stod(spec.substr(0, c1));
  const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (!(step > 0.0) || stop < start)
    throw fonspn::ConfigError("--grid expects start <= stop and step > 0");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-12 * step; v += step) grid.push_back(v);
  return grid;
}

int cmd_sweep_mu(fonspn::ExperimentConfig cfg, const std::string& grid_spec,
                 const std::string& out_path) {
  const std::vector<double> grid = parse_grid(grid_spec);
  std::vector<std::pair<std::string, double>> rows;
  int dead_points = 0;
  for (double mu : grid) {
    cfg.algo.mu = mu;
    cfg.validate();
    const fonspn::AggregateTrace agg = fonspn::run_experiment(cfg);
    char key[64];
    std::snprintf(key, sizeof key, "steady_db@mu=%g", mu);
    if (agg.all_diverged()) {
      ++dead_points;
      rows.emplace_back(key, std::numeric_limits<double>::quiet_NaN());
      std::cerr << "mu = " << mu << ": all trials diverged\n";
    } else {
      rows.emplace_back(key, steady_of_aggregate(agg, cfg.steady_window));
    }
  }
  std::cout << fonspn::format_rows_csv(rows);
  if (!out_path.empty())
    fonspn::write_rows_csv(out_path, rows, fonspn::config_echo(cfg));
  return dead_points == static_cast<int>(grid.size()) ? kExitAllDiverged : 0;
}

int cmd_steady(fonspn::ExperimentConfig cfg, const std::vector<double>& mu_list,
               const std::string& out_path) {
  const fonspn::SubbandMoments m = measure_moments(cfg);
  warn_on_model_mismatch(m);
  std::vector<std::pair<std::string, double>> rows;
  int dead_points = 0;
  for (double mu : mu_list) {
    cfg.algo.mu = mu;
    cfg.validate();
    char key[64];
    std::snprintf(key, sizeof key, "theory_db@mu=%g", mu);
    try {
      rows.emplace_back(key, 10.0 * std::log10(fonspn::steady_state_msd(m, mu)));
    } catch (const std::domain_error&) {
      rows.emplace_back(key, std::numeric_limits<double>::infinity());
    }
    const fonspn::AggregateTrace agg = fonspn::run_experiment(cfg);
    std::snprintf(key, sizeof key, "empirical_db@mu=%g", mu);
    if (agg.all_diverged()) {
      ++dead_points;
      rows.emplace_back(key, std::numeric_limits<double>::quiet_NaN());
    } else {
      rows.emplace_back(key, steady_of_aggregate(agg, cfg.steady_window));
    }
  }
  std::cout << fonspn::format_rows_csv(rows);
  if (!out_path.empty())
    fonspn::write_rows_csv(out_path, rows, fonspn::config_echo(cfg));
  return dead_points == static_cast<int>(mu_list.size()) && !mu_list.empty()
             ? kExitAllDiverged
             : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FoNSPN subband adaptive filtering toolkit"};
  app.require_subcommand(1);

  // design-bank
  int db_bands = 4, db_len = 32;
  std::string db_out = "bank.csv";
  CLI::App* design = app.add_subcommand("design-bank", "Dump analysis filter coefficients");
  design->add_option("--bands", db_bands, "Number of subbands")->required();
  design->add_option("--len", db_len, "Filter length")->required();
  design->add_option("--out", db_out, "Output CSV path");

  struct CmdSpec {
    CLI::App* cmd = nullptr;
    std::string config_path;
    std::string out_path;
    Overrides ov;
  };
  auto make_cmd = [&](const char* name, const char* help, bool out_required) {
    CmdSpec spec;
    spec.cmd = app.add_subcommand(name, help);
    spec.cmd->add_option("--config", spec.config_path, "Config file")->required();
    auto* out = spec.cmd->add_option("--out", spec.out_path, "Output CSV path");
    if (out_required) out->required();
    return spec;
  };

  CmdSpec bounds = make_cmd("bounds", "Parameter bounds and steady-state prediction", false);
  CmdSpec simulate = make_cmd("simulate", "Run one Monte Carlo experiment", true);
  CmdSpec sweep = make_cmd("sweep-mu", "Steady-state deviation over a step-size grid", false);
  std::string grid_spec;
  sweep.cmd->add_option("--grid", grid_spec, "Step-size grid start:stop:step")->required();
  CmdSpec steady = make_cmd("steady", "Theory vs. empirical steady state", false);
  std::vector<double> mu_list;
  steady.cmd->add_option("--mu-list", mu_list, "Step sizes (comma separated)")
      ->required()
      ->delimiter(',');

  for (CmdSpec* spec : {&bounds, &simulate, &sweep, &steady})
    add_override_flags(spec->cmd, spec->ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) return cmd_design_bank(db_bands, db_len, db_out);
    for (CmdSpec* spec : {&bounds, &simulate, &sweep, &steady}) {
      if (!spec->cmd->parsed()) continue;
      fonspn::ExperimentConfig cfg = fonspn::load_config_file(spec->config_path);
      apply(spec->ov, cfg);
      if (spec == &bounds) return cmd_bounds(cfg, spec->out_path);
      if (spec == &simulate) return cmd_simulate(cfg, spec->out_path);
      if (spec == &sweep) return cmd_sweep_mu(cfg, grid_spec, spec->out_path);
      return cmd_steady(cfg, mu_list, spec->out_path);
    }
  } catch (const fonspn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
