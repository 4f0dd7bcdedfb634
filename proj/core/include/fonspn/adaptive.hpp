// SPDX-License-Identifier: Apache-2.0
//
// The adaptive filter family. NSAF, NSPN, and FoNSPN share one update
// rule acting on a mutable weight state:
//
//   h <- h + mu * sum_i g(e_i) * Xi^(beta-1) * x_i / (||x_i||_p^p + eps)
//
// with g(e) = sgn(e) |e|^(p - beta) and Xi = diag(|x_i|). beta = 1 gives
// the NSPN update, p = 2 with beta = 1 the classic NSAF update. The gamma
// ratio that the fractional derivative introduces is folded into mu, so
// mu stays comparable across beta.

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fonspn/filterbank.hpp"

namespace fonspn {

enum class Algorithm { Nsaf, Nspn, Fonspn };

struct AlgoConfig {
  Algorithm algorithm = Algorithm::Fonspn;
  double mu = 0.1;    // step size, > 0
  double p = 2.0;     // norm exponent
  double beta = 1.0;  // fractional order
  int taps = 20;      // L
  double eps = 1e-6;  // regularizer added to the norm denominator and to
                      // |x| inside the (beta - 1) power

  static AlgoConfig nsaf(double mu, int taps, double eps = 1e-6);
  static AlgoConfig nspn(double mu, double p, int taps, double eps = 1e-6);
  static AlgoConfig fonspn(double mu, double p, double beta, int taps,
                           double eps = 1e-6);

  // Throws std::invalid_argument on out-of-domain parameters or when the
  // selected algorithm pins p/beta to values other than the ones set
  // (Nsaf requires p = 2, beta = 1; Nspn requires beta = 1).
  void validate() const;
};

struct FilterState {
  std::vector<double> weights;  // current estimate, all finite
  long update_count = 0;
  bool diverged = false;  // any non-finite update freezes the state

  explicit FilterState(int taps) : weights(taps, 0.0) {}
};

// Per-band a-priori errors e_i = d_i - x_i . h.
std::vector<double> subband_errors(const FilterState& state,
                                   const SubbandFrame& frame);

// sgn(e) * |e|^(p - beta) with the sgn(0) = 0 convention, so gain(0) = 0
// even when p = beta. Requires p >= beta.
double gain(double e, double p, double beta);

// Sum of |x_j|^p over the regressor plus eps; the update denominator.
double pnorm_pow_sum(std::span<const double> x, double p, double eps = 0.0);

// Applies one decimated-time update in place. All band errors are taken
// against the pre-update weights and the band contributions summed. If the
// result is non-finite the weights are left untouched and the state is
// flagged diverged; further updates become no-ops.
void update(FilterState& state, const SubbandFrame& frame,
            const AlgoConfig& cfg);

// Order-beta derivative of x^n, Gamma(n+1)/Gamma(n+1-beta) * x^(n-beta),
// for n > 0, beta <= n, x > 0. Support routine for validating the
// fractional-calculus identity the update rule is built on; the update
// itself never calls it.
double fractional_power_derivative(double n, double beta, double x);

namespace detail {

// Shared with update(); no p >= beta check so that deliberately
// out-of-range configurations remain runnable in experiments.
inline double gain_unchecked(double e, double q) {
  if (e == 0.0) return 0.0;
  if (q == 1.0) return e;
  if (q == 0.0) return e > 0.0 ? 1.0 : -1.0;
  const double m = std::pow(std::abs(e), q);
  return e > 0.0 ? m : -m;
}

}  // namespace detail

}  // namespace fonspn
