// SPDX-License-Identifier: Apache-2.0

#include "fonspn/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fonspn {

namespace {

// Hamming-windowed sinc lowpass with cutoff `wc`, length D, linear phase.
std::vector<double> windowed_sinc(int len, double wc) {
  std::vector<double> h(len);
  const double mid = 0.5 * (len - 1);
  for (int n = 0; n < len; ++n) {
    const double t = n - mid;
    const double s = (std::abs(t) < 1e-12) ? wc / std::numbers::pi
                                           : std::sin(wc * t) / (std::numbers::pi * t);
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
    h[n] = s * w;
  }
  return h;
}

}  // namespace

void FilterBank::validate() const {
  if (num_bands < 1) throw std::invalid_argument("filter bank: num_bands must be >= 1");
  if (length < 1) throw std::invalid_argument("filter bank: length must be >= 1");
  if (decimation != num_bands)
    throw std::invalid_argument("filter bank: decimation must equal num_bands");
  if (static_cast<int>(coeffs.size()) != num_bands)
    throw std::invalid_argument("filter bank: expected one impulse response per band");
  for (const auto& f : coeffs)
    if (static_cast<int>(f.size()) != length)
      throw std::invalid_argument("filter bank: impulse response length mismatch");
}

FilterBank FilterBank::identity(int length) {
  FilterBank bank;
  bank.num_bands = 1;
  bank.length = length;
  bank.decimation = 1;
  bank.coeffs.assign(1, std::vector<double>(length, 0.0));
  bank.coeffs[0][0] = 1.0;
  return bank;
}

double amplitude_response(std::span<const double> fir, double omega) {
  double re = 0.0, im = 0.0;
  for (std::size_t n = 0; n < fir.size(); ++n) {
    re += fir[n] * std::cos(omega * static_cast<double>(n));
    im -= fir[n] * std::sin(omega * static_cast<double>(n));
  }
  return std::hypot(re, im);
}

FilterBank design_bank(int num_bands, int length) {
  if (num_bands < 1 || length < 2 || length % (2 * num_bands) != 0)
    throw std::invalid_argument(
        "design_bank: length must be a positive multiple of 2 * num_bands");

  const double edge = std::numbers::pi / (2.0 * num_bands);

  // Pick the prototype cutoff by bisection so that the amplitude at the
  // band edge is 1/sqrt(2) of the DC gain. A cutoff placed literally at
  // the band edge would cross at half amplitude instead and leave a large
  // dip in the power-complementarity sum.
  double lo = 0.5 * edge, hi = 2.0 * edge;
  std::vector<double> proto;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    proto = windowed_sinc(length, mid);
    const double ratio = amplitude_response(proto, edge) / amplitude_response(proto, 0.0);
    (ratio < std::numbers::sqrt2 / 2.0 ? lo : hi) = mid;
  }
  proto = windowed_sinc(length, 0.5 * (lo + hi));

  FilterBank bank;
  bank.num_bands = num_bands;
  bank.length = length;
  bank.decimation = num_bands;
  bank.coeffs.assign(num_bands, std::vector<double>(length));
  const double mid_tap = 0.5 * (length - 1);
  for (int i = 0; i < num_bands; ++i) {
    const double wi = (2 * i + 1) * edge;                      // band center
    const double phase = (i % 2 == 0 ? 1.0 : -1.0) * std::numbers::pi / 4.0;
    for (int n = 0; n < length; ++n)
      bank.coeffs[i][n] = 2.0 * proto[n] * std::cos(wi * (n - mid_tap) + phase);
  }

  // Unit passband gain in band 1; with power complementarity this makes
  // the summed coefficient energy of the bank approximately 1.
  const double g = amplitude_response(bank.coeffs[0], edge);
  for (auto& f : bank.coeffs)
    for (double& c : f) c /= g;

  return bank;
}

SubbandStream::SubbandStream(const FilterBank& bank, std::span<const double> input,
                             std::span<const double> desired, int taps)
    : bank_(&bank), input_(input), desired_(desired), taps_(taps) {
  bank.validate();
  if (taps < 1) throw std::invalid_argument("subband stream: taps must be >= 1");
  if (desired.size() != input.size())
    throw std::invalid_argument("subband stream: input/desired length mismatch");
  regressors_.assign(bank.num_bands, std::vector<double>(taps, 0.0));
}

long SubbandStream::total_frames() const {
  if (input_.empty()) return 0;
  return (static_cast<long>(input_.size()) - 1) / bank_->decimation + 1;
}

bool SubbandStream::next(SubbandFrame& frame) {
  const long target = frame_ * bank_->decimation;  // fullband time of this frame
  if (target >= static_cast<long>(input_.size())) return false;

  const int bands = bank_->num_bands;
  const int dlen = bank_->length;

  // Advance the per-band regressors sample by sample; signals are zero
  // before time 0.
  for (long n = consumed_; n <= target; ++n) {
    const long mmax = std::min<long>(dlen - 1, n);
    for (int i = 0; i < bands; ++i) {
      const double* f = bank_->coeffs[i].data();
      double acc = 0.0;
      for (long m = 0; m <= mmax; ++m) acc += f[m] * input_[n - m];
      auto& reg = regressors_[i];
      std::rotate(reg.rbegin(), reg.rbegin() + 1, reg.rend());
      reg[0] = acc;
    }
  }
  consumed_ = target + 1;

  frame.band_inputs.resize(bands);
  frame.band_desired.resize(bands);
  const long mmax = std::min<long>(dlen - 1, target);
  for (int i = 0; i < bands; ++i) {
    frame.band_inputs[i] = regressors_[i];
    const double* f = bank_->coeffs[i].data();
    double acc = 0.0;
    for (long m = 0; m <= mmax; ++m) acc += f[m] * desired_[target - m];
    frame.band_desired[i] = acc;
  }
  frame.frame_index = frame_++;
  return true;
}

}  // namespace fonspn
