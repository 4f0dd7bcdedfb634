// SPDX-License-Identifier: Apache-2.0

#include "fonspn/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fonspn/adaptive.hpp"

namespace fonspn {

BetaRange beta_range(double p, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("beta_range: alpha must lie in (0, 2]");
  if (!(p >= 0.0 && p <= alpha))
    throw std::invalid_argument("beta_range: requires 0 <= p <= alpha");
  return BetaRange{p - 0.5 * alpha, p};
}

bool analysis_assumption_holds(const SubbandMoments& moments) {
  return std::abs(moments.p - moments.beta - 1.0) < 1e-9;
}

static void check_moments(const SubbandMoments& m) {
  if (m.bands.empty()) throw std::runtime_error("moments: no bands");
  if (m.taps < 1) throw std::runtime_error("moments: taps not set");
}

double step_size_bound_msd0(const SubbandMoments& moments, double msd0) {
  check_moments(moments);
  if (!(msd0 > 0.0))
    throw std::invalid_argument("step_size_bound: msd0 must be > 0");
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& b : moments.bands) {
    if (b.pnorm <= 0.0 || b.abs_pow_2beta <= 0.0 || b.var_x + b.var_n <= 0.0)
      throw std::runtime_error("step_size_bound: vanishing moment estimate");
    const double denom =
        (b.var_x * msd0 + b.var_n) * moments.taps * b.abs_pow_2beta / b.pnorm;
    bound = std::min(bound, 2.0 * b.abs_pow_beta_plus_1 * msd0 / denom);
  }
  return bound;
}

double step_size_bound(const SubbandMoments& moments) {
  // Headline form: the initial deviation is taken as unit norm, under
  // which it cancels out of the band ratio.
  return step_size_bound_msd0(moments, 1.0);
}

double steady_state_msd(const SubbandMoments& moments, double mu) {
  check_moments(moments);
  if (!(mu > 0.0)) throw std::invalid_argument("steady_state_msd: mu must be > 0");
  double noise_term = 0.0, drive_term = 0.0, input_term = 0.0;
  for (const auto& b : moments.bands) {
    if (b.pnorm <= 0.0 || b.pnorm_sq <= 0.0)
      throw std::runtime_error("steady_state_msd: vanishing moment estimate");
    noise_term += b.abs_pow_2beta / b.pnorm_sq * b.var_n;
    drive_term += b.abs_pow_beta_plus_1 / b.pnorm;
    input_term += b.abs_pow_2beta / b.pnorm_sq * b.var_x;
  }
  const double denom = 2.0 * drive_term - mu * moments.taps * input_term;
  if (!(denom > 0.0))
    throw std::domain_error(
        "steady_state_msd: mu outside the model's stability region");
  return mu * moments.taps * noise_term / denom;
}

SubbandMoments estimate_moments(const FilterBank& bank, const Ar1Params& input,
                                const Ar1Params& noise, double p, double beta,
                                int taps, long frames, std::uint64_t seed) {
  bank.validate();
  input.validate();
  noise.validate();
  if (taps < 1) throw std::invalid_argument("estimate_moments: taps must be >= 1");
  if (frames < 10000)
    throw std::invalid_argument("estimate_moments: needs >= 10^4 decimated frames");

  // Discard a warmup stretch so slow AR(1) transients do not bias the
  // variance estimates.
  const long warmup = frames / 10;
  const long total = (frames + warmup) * bank.decimation;
  const std::vector<double> x =
      generate_ar1(input, total, substream_seed(seed, 0, 0));
  const std::vector<double> n =
      generate_ar1(noise, total, substream_seed(seed, 1, 0));

  SubbandMoments m;
  m.p = p;
  m.beta = beta;
  m.taps = taps;
  m.bands.assign(bank.num_bands, BandMoments{});

  std::vector<double> sum_x(bank.num_bands, 0.0), sum_xx(bank.num_bands, 0.0);
  std::vector<double> sum_n(bank.num_bands, 0.0), sum_nn(bank.num_bands, 0.0);

  // The noise signal rides along in the desired slot, so one stream pass
  // yields input regressors and decimated subband noise samples together.
  SubbandStream stream(bank, x, n, taps);
  SubbandFrame frame;
  long used = 0;
  for (long k = 0; k < frames + warmup && stream.next(frame); ++k) {
    if (k < warmup) continue;
    ++used;
    for (int i = 0; i < bank.num_bands; ++i) {
      const auto& reg = frame.band_inputs[i];
      const double xi = reg[0];
      const double ax = std::abs(xi);
      auto& b = m.bands[i];
      b.abs_pow_beta_plus_1 += std::pow(ax, beta + 1.0);
      b.abs_pow_2beta += std::pow(ax, 2.0 * beta);
      const double pn = pnorm_pow_sum(reg, p);
      b.pnorm += pn;
      b.pnorm_sq += pn * pn;
      sum_x[i] += xi;
      sum_xx[i] += xi * xi;
      const double ni = frame.band_desired[i];
      sum_n[i] += ni;
      sum_nn[i] += ni * ni;
    }
  }
  if (used < frames)
    throw std::runtime_error("estimate_moments: generated signal too short");

  const double inv = 1.0 / static_cast<double>(used);
  for (int i = 0; i < bank.num_bands; ++i) {
    auto& b = m.bands[i];
    b.abs_pow_beta_plus_1 *= inv;
    b.abs_pow_2beta *= inv;
    b.pnorm *= inv;
    b.pnorm_sq *= inv;
    const double mean_x = sum_x[i] * inv;
    const double mean_n = sum_n[i] * inv;
    b.var_x = sum_xx[i] * inv - mean_x * mean_x;
    b.var_n = sum_nn[i] * inv - mean_n * mean_n;
  }

  for (const WhiteSpec* spec : {&input.driving, &noise.driving}) {
    if (const auto* sas = std::get_if<AlphaStableParams>(spec))
      if (sas->alpha < 2.0 && 2.0 * beta >= sas->alpha) m.heavy_tail = true;
  }
  return m;
}

}  // namespace fonspn
