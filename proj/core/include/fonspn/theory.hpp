// SPDX-License-Identifier: Apache-2.0
//
// Closed-form predictions for the FoNSPN family: the admissible interval
// of the fractional order, the mean-square step-size upper bound, and the
// steady-state mean-square-deviation fixed point. The expectations the
// formulas contain are replaced by ensemble averages measured on freshly
// generated subband signals.

#pragma once

#include <cstdint>
#include <vector>

#include "fonspn/filterbank.hpp"
#include "fonspn/signalgen.hpp"

namespace fonspn {

// Open-closed interval (lower, upper] of admissible fractional orders.
struct BetaRange {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double beta) const { return beta > lower && beta <= upper; }
};

// Stability interval for the fractional order: (p - alpha/2, p], where
// alpha is the characteristic exponent of the dominant noise process.
// Requires 0 < alpha <= 2 and 0 <= p <= alpha.
BetaRange beta_range(double p, double alpha);

// Ensemble-average moments of one band's subband signals, measured at a
// fixed (p, beta) operating point.
struct BandMoments {
  double abs_pow_beta_plus_1 = 0.0;  // E{ |x|^(beta+1) }
  double abs_pow_2beta = 0.0;        // E{ |x|^(2 beta) }
  double pnorm = 0.0;                // E{ ||x||_p^p } over the regressor
  double pnorm_sq = 0.0;             // E{ ||x||_p^(2p) }
  double var_x = 0.0;                // subband input variance
  double var_n = 0.0;                // subband noise variance
};

struct SubbandMoments {
  double p = 2.0;
  double beta = 1.0;
  int taps = 0;
  std::vector<BandMoments> bands;
  // Set when a stable source with alpha < 2 has 2 beta >= alpha: the
  // corresponding population moment is infinite and the empirical value
  // below is a finite sample artifact.
  bool heavy_tail = false;
};

// The step-size and steady-state formulas are derived under p - beta = 1.
// They still evaluate for other operating points, but callers should
// surface a model-validity warning when this returns false.
bool analysis_assumption_holds(const SubbandMoments& moments);

// Largest stable step size: min over bands of
//   2 E{|x|^(beta+1)} / ((var_x + var_n) * L * E{|x|^(2 beta)} / E{||x||_p^p}).
// Throws std::runtime_error when a denominator vanishes (insufficient data).
double step_size_bound(const SubbandMoments& moments);

// Variant that keeps the initial-deviation term instead of assuming the
// true system has unit norm; msd0 is the squared norm of the true system.
double step_size_bound_msd0(const SubbandMoments& moments, double msd0);

// Steady-state mean square deviation (linear scale) at step size mu.
// Throws std::domain_error when the denominator is non-positive, i.e.
// mu lies outside the model's stability region.
double steady_state_msd(const SubbandMoments& moments, double mu);

// Runs the bank over freshly generated input and noise and returns the
// ensemble-average moments over `frames` decimated frames (after a warmup
// stretch that is discarded). Deterministic per seed. Requires
// frames >= 10000.
SubbandMoments estimate_moments(const FilterBank& bank, const Ar1Params& input,
                                const Ar1Params& noise, double p, double beta,
                                int taps, long frames, std::uint64_t seed);

}  // namespace fonspn
