// SPDX-License-Identifier: Apache-2.0

#include "fonspn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fonspn/theory.hpp"

namespace fonspn {

namespace {

// Substream purposes under one master seed.
enum : std::uint64_t { kStreamInput = 1, kStreamNoise = 2 };

double percentile(std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    input.validate();
    noise.validate();
    algo.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (bands < 1 || bank_length < 1) throw ConfigError("config: bad bank geometry");
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (total_samples < 1) throw ConfigError("config: samples must be >= 1");
  if (steady_window < 1) throw ConfigError("config: steady_window must be >= 1");
  if (moment_frames < 1) throw ConfigError("config: moment_frames must be >= 1");
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  if (flip_at && (*flip_at < 1 || *flip_at >= total_samples))
    throw ConfigError("config: flip_at must lie inside the sample budget");
  if (!system.coeffs.empty() &&
      static_cast<int>(system.coeffs.size()) != algo.taps)
    throw ConfigError("config: explicit system length must equal algo taps");
  if (theory_guard && algo.algorithm == Algorithm::Fonspn) {
    const double alpha = std::min(characteristic_exponent(input.driving),
                                  characteristic_exponent(noise.driving));
    BetaRange range;
    try {
      range = beta_range(algo.p, alpha);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!range.contains(algo.beta))
      throw ConfigError("config: beta violates the stability interval (theory guard)");
  }
}

std::vector<double> make_true_system(const ExperimentConfig& cfg) {
  std::vector<double> h0 = cfg.system.coeffs.empty()
                               ? sample_gaussian(1.0, cfg.algo.taps, cfg.system.seed)
                               : cfg.system.coeffs;
  double norm_sq = 0.0;
  for (double v : h0) norm_sq += v * v;
  if (!(norm_sq > 0.0)) throw ConfigError("config: true system must be nonzero");
  if (cfg.system.unit_norm) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : h0) v *= inv;
  }
  return h0;
}

TrialTrace run_trial(const ExperimentConfig& cfg, int trial_index) {
  cfg.validate();
  const std::vector<double> h0 = make_true_system(cfg);
  const int taps = cfg.algo.taps;
  const long total = cfg.total_samples;

  const std::vector<double> x = generate_ar1(
      cfg.input, total, substream_seed(cfg.master_seed, kStreamInput, trial_index));
  const std::vector<double> noise = generate_ar1(
      cfg.noise, total, substream_seed(cfg.master_seed, kStreamNoise, trial_index));

  // Desired signal d = x * h0 + n with zero prehistory; the system flips
  // sign at flip_at when configured.
  const long flip = cfg.flip_at.value_or(total);
  std::vector<double> d(total);
  for (long k = 0; k < total; ++k) {
    const double sign = k < flip ? 1.0 : -1.0;
    double acc = noise[k];
    const long jmax = std::min<long>(taps - 1, k);
    for (long j = 0; j <= jmax; ++j) acc += sign * h0[j] * x[k - j];
    d[k] = acc;
  }

  double h0_norm_sq = 0.0;
  for (double v : h0) h0_norm_sq += v * v;

  const FilterBank bank = cfg.bands == 1 && cfg.bank_length == 1
                              ? FilterBank::identity()
                              : design_bank(cfg.bands, cfg.bank_length);
  SubbandStream stream(bank, x, d, taps);

  TrialTrace trace;
  trace.nmsd_db.reserve(stream.total_frames() + 1);
  FilterState state(taps);

  const auto nmsd_now = [&](long fullband_time) {
    const double sign = fullband_time < flip ? 1.0 : -1.0;
    double dev = 0.0;
    for (int j = 0; j < taps; ++j) {
      const double diff = sign * h0[j] - state.weights[j];
      dev += diff * diff;
    }
    return 10.0 * std::log10(std::max(dev / h0_norm_sq, 1e-32));
  };

  // Entry k holds the deviation after k updates; entry 0 is the initial
  // state, 0 dB for a zero-initialized filter against a unit-norm system.
  trace.nmsd_db.push_back(std::max(nmsd_now(0), kNmsdFloorDb));

  SubbandFrame frame;
  while (stream.next(frame)) {
    update(state, frame, cfg.algo);
    if (state.diverged) {
      trace.diverged = true;
      break;
    }
    const double nmsd = nmsd_now(frame.frame_index * bank.decimation);
    if (nmsd > kDivergenceDb) {
      trace.diverged = true;
      break;
    }
    trace.nmsd_db.push_back(std::max(nmsd, kNmsdFloorDb));
  }
  return trace;
}

AggregateTrace run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int trials = cfg.trials;
  std::vector<TrialTrace> traces(trials);

  unsigned hw = std::thread::hardware_concurrency();
  int nthreads = cfg.threads > 0 ? cfg.threads : static_cast<int>(hw ? hw : 1);
  nthreads = std::clamp(nthreads, 1, trials);

  if (nthreads == 1) {
    for (int t = 0; t < trials; ++t) traces[t] = run_trial(cfg, t);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
        traces[t] = run_trial(cfg, t);
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  AggregateTrace agg;
  agg.trials = trials;
  std::vector<const TrialTrace*> alive;
  for (const auto& tr : traces) {
    if (tr.diverged)
      ++agg.diverged_trials;
    else
      alive.push_back(&tr);
  }
  if (alive.empty()) return agg;

  const std::size_t frames = alive.front()->nmsd_db.size();
  agg.mean_db.resize(frames);
  agg.p10_db.resize(frames);
  agg.p90_db.resize(frames);
  std::vector<double> column(alive.size());
  for (std::size_t k = 0; k < frames; ++k) {
    double sum = 0.0;
    for (std::size_t t = 0; t < alive.size(); ++t) {
      column[t] = alive[t]->nmsd_db[k];
      sum += column[t];
    }
    std::sort(column.begin(), column.end());
    agg.mean_db[k] = sum / static_cast<double>(alive.size());
    agg.p10_db[k] = percentile(column, 0.10);
    agg.p90_db[k] = percentile(column, 0.90);
  }
  return agg;
}

SteadyState steady_state_msd_empirical(std::span<const double> nmsd_db,
                                       long window) {
  if (window < 1 || window > static_cast<long>(nmsd_db.size()))
    throw std::invalid_argument(
        "steady_state_msd_empirical: window exceeds trace length");
  double acc = 0.0;
  for (std::size_t k = nmsd_db.size() - window; k < nmsd_db.size(); ++k)
    acc += std::pow(10.0, nmsd_db[k] / 10.0);
  SteadyState out;
  out.linear = acc / static_cast<double>(window);
  out.db = 10.0 * std::log10(out.linear);
  return out;
}

}  // namespace fonspn
