// SPDX-License-Identifier: Apache-2.0

#include "fonspn/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace fonspn {

AlgoConfig AlgoConfig::nsaf(double mu, int taps, double eps) {
  AlgoConfig cfg{Algorithm::Nsaf, mu, 2.0, 1.0, taps, eps};
  cfg.validate();
  return cfg;
}

AlgoConfig AlgoConfig::nspn(double mu, double p, int taps, double eps) {
  AlgoConfig cfg{Algorithm::Nspn, mu, p, 1.0, taps, eps};
  cfg.validate();
  return cfg;
}

AlgoConfig AlgoConfig::fonspn(double mu, double p, double beta, int taps,
                              double eps) {
  AlgoConfig cfg{Algorithm::Fonspn, mu, p, beta, taps, eps};
  cfg.validate();
  return cfg;
}

void AlgoConfig::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("algo: mu must be > 0");
  if (!(p > 0.0)) throw std::invalid_argument("algo: p must be > 0");
  if (!std::isfinite(beta)) throw std::invalid_argument("algo: beta must be finite");
  if (taps < 1) throw std::invalid_argument("algo: taps must be >= 1");
  if (!(eps >= 0.0)) throw std::invalid_argument("algo: eps must be >= 0");
  if (algorithm == Algorithm::Nsaf && (p != 2.0 || beta != 1.0))
    throw std::invalid_argument("algo: nsaf requires p = 2 and beta = 1");
  if (algorithm == Algorithm::Nspn && beta != 1.0)
    throw std::invalid_argument("algo: nspn requires beta = 1");
}

std::vector<double> subband_errors(const FilterState& state,
                                   const SubbandFrame& frame) {
  const std::size_t taps = state.weights.size();
  std::vector<double> errors(frame.band_inputs.size());
  for (std::size_t i = 0; i < frame.band_inputs.size(); ++i) {
    const auto& x = frame.band_inputs[i];
    if (x.size() != taps)
      throw std::invalid_argument("subband_errors: regressor length mismatch");
    double acc = frame.band_desired[i];
    for (std::size_t j = 0; j < taps; ++j) acc -= x[j] * state.weights[j];
    errors[i] = acc;
  }
  return errors;
}

double gain(double e, double p, double beta) {
  if (!(p >= beta))
    throw std::invalid_argument("gain: requires p >= beta");
  return detail::gain_unchecked(e, p - beta);
}

double pnorm_pow_sum(std::span<const double> x, double p, double eps) {
  double acc = eps;
  if (p == 2.0) {
    for (double v : x) acc += v * v;
  } else if (p == 1.0) {
    for (double v : x) acc += std::abs(v);
  } else {
    for (double v : x) acc += std::pow(std::abs(v), p);
  }
  return acc;
}

void update(FilterState& state, const SubbandFrame& frame,
            const AlgoConfig& cfg) {
  if (state.diverged) return;

  const int taps = cfg.taps;
  if (static_cast<int>(state.weights.size()) != taps)
    throw std::invalid_argument("update: state size does not match config taps");

  const std::vector<double> errors = subband_errors(state, frame);
  std::vector<double> next = state.weights;

  const double q = cfg.p - cfg.beta;
  for (std::size_t i = 0; i < frame.band_inputs.size(); ++i) {
    const auto& x = frame.band_inputs[i];
    const double g = detail::gain_unchecked(errors[i], q);
    if (g == 0.0) continue;
    const double scale = cfg.mu * g / pnorm_pow_sum(x, cfg.p, cfg.eps);
    if (cfg.beta == 1.0) {
      for (int j = 0; j < taps; ++j) next[j] += scale * x[j];
    } else {
      const double bexp = cfg.beta - 1.0;
      for (int j = 0; j < taps; ++j)
        next[j] += scale * std::pow(std::abs(x[j]) + cfg.eps, bexp) * x[j];
    }
  }

  for (double w : next) {
    if (!std::isfinite(w)) {
      state.diverged = true;
      return;
    }
  }
  state.weights = std::move(next);
  ++state.update_count;
}

double fractional_power_derivative(double n, double beta, double x) {
  if (!(n > 0.0))
    throw std::invalid_argument("fractional_power_derivative: n must be > 0");
  if (!(beta <= n))
    throw std::invalid_argument("fractional_power_derivative: requires beta <= n");
  if (!(x > 0.0))
    throw std::invalid_argument("fractional_power_derivative: x must be > 0");
  return std::tgamma(n + 1.0) / std::tgamma(n + 1.0 - beta) * std::pow(x, n - beta);
}

}  // namespace fonspn
