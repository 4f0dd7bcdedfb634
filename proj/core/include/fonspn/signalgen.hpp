// SPDX-License-Identifier: Apache-2.0
//
// Seedable generators for the signals used in system identification:
// Gaussian white noise, symmetric alpha-stable impulsive noise, and
// AR(1)-colored versions of either.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace fonspn {

// Symmetric alpha-stable law with characteristic function
// exp(-dispersion * |t|^alpha). alpha = 2 is Gaussian with variance
// 2*dispersion, alpha = 1 is Cauchy with quartiles at +-dispersion.
struct AlphaStableParams {
  double alpha = 2.0;       // characteristic exponent, 0 < alpha <= 2
  double dispersion = 1.0;  // > 0
  void validate() const;
};

struct GaussianParams {
  double variance = 1.0;  // >= 0
  void validate() const;
};

using WhiteSpec = std::variant<GaussianParams, AlphaStableParams>;

// Characteristic exponent of the white process (2 for Gaussian).
double characteristic_exponent(const WhiteSpec& spec);

// First-order autoregressive coloring, y[k] = pole * y[k-1] + white[k]
// with y[-1] = 0. pole = 0 leaves the driving process untouched.
struct Ar1Params {
  double pole = 0.0;  // 0 <= pole < 1
  WhiteSpec driving = GaussianParams{1.0};
  void validate() const;
};

// Derives an independent generator seed from (master, purpose, index).
// Used to give every Monte Carlo trial its own reproducible substream;
// the result does not depend on evaluation order or thread count.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t purpose,
                             std::uint64_t index);

// `count` i.i.d. draws from the symmetric alpha-stable law via the
// Chambers-Mallows-Stuck transform. Identical (params, count, seed)
// gives identical output.
std::vector<double> sample_sas(const AlphaStableParams& params,
                               std::size_t count, std::uint64_t seed);

// `count` i.i.d. zero-mean Gaussian draws with the given variance.
std::vector<double> sample_gaussian(double variance, std::size_t count,
                                    std::uint64_t seed);

std::vector<double> sample_white(const WhiteSpec& spec, std::size_t count,
                                 std::uint64_t seed);

std::vector<double> color_ar1(std::span<const double> white,
                              const Ar1Params& params);

// White generation plus AR(1) coloring in one call.
std::vector<double> generate_ar1(const Ar1Params& params, std::size_t count,
                                 std::uint64_t seed);

}  // namespace fonspn
