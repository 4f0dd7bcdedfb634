// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo system-identification harness: builds the unknown system,
// generates per-trial signals from independent substreams, runs the
// configured adaptive filter over the subband decomposition, and records
// normalized mean-square-deviation learning curves.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fonspn/adaptive.hpp"
#include "fonspn/signalgen.hpp"

namespace fonspn {

// Configuration errors carry their own type so the CLI can map them to a
// dedicated exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  std::vector<double> coeffs;  // explicit unknown system; wins when non-empty
  std::uint64_t seed = 7;      // otherwise standard-normal taps from this seed
  bool unit_norm = false;      // scale to unit Euclidean norm
};

struct ExperimentConfig {
  SystemSpec system;
  Ar1Params input;                       // system input source
  Ar1Params noise{0.0, GaussianParams{0.001}};  // additive noise source
  int bands = 4;
  int bank_length = 32;
  AlgoConfig algo;
  int trials = 50;
  long total_samples = 200000;           // fullband samples per trial
  std::optional<long> flip_at;           // h0 -> -h0 at this fullband index
  long steady_window = 10000;            // frames for steady-state averaging
  std::uint64_t master_seed = 1;
  int threads = 0;                       // 0 = hardware concurrency
  long moment_frames = 50000;            // frames for moment estimation
  bool theory_guard = false;             // reject beta outside its interval

  void validate() const;  // throws ConfigError
};

// NMSD values are clamped to this floor (dB) so perfect convergence stays
// representable; anything above the ceiling marks the trial diverged.
inline constexpr double kNmsdFloorDb = -320.0;
inline constexpr double kDivergenceDb = 100.0;

struct TrialTrace {
  // Entry k is the NMSD after k updates; entry 0 is the initial state.
  std::vector<double> nmsd_db;
  bool diverged = false;  // trace is truncated at the divergence point
};

struct AggregateTrace {
  std::vector<double> mean_db;  // elementwise mean over non-diverged trials
  std::vector<double> p10_db;
  std::vector<double> p90_db;
  int diverged_trials = 0;
  int trials = 0;

  bool all_diverged() const { return trials > 0 && diverged_trials == trials; }
};

// The unknown system shared by all trials of an experiment.
std::vector<double> make_true_system(const ExperimentConfig& cfg);

// One trial: deterministic in (cfg, trial_index). Divergence is recorded
// in the trace, never thrown.
TrialTrace run_trial(const ExperimentConfig& cfg, int trial_index);

// All trials, optionally in parallel; the result is independent of the
// thread count. Diverged trials are excluded from the aggregate curves
// and counted.
AggregateTrace run_experiment(const ExperimentConfig& cfg);

struct SteadyState {
  double linear = 0.0;
  double db = 0.0;
};

// Mean of the last `window` linear-domain deviation values of a trace.
SteadyState steady_state_msd_empirical(std::span<const double> nmsd_db,
                                       long window);

// Flat key = value echo of a configuration, in config-file key order;
// embedded as comment rows in exported CSV files.
std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& cfg);

}  // namespace fonspn
