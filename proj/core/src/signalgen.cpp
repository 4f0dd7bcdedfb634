// SPDX-License-Identifier: Apache-2.0

#include "fonspn/signalgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fonspn {

namespace {

// 53-bit uniform draw in the open interval (0, 1). Both endpoints are
// excluded, which the CMS and Box-Muller transforms require. Mapping the
// raw engine words ourselves keeps streams identical across standard
// library implementations.
inline double uniform_open(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
}

inline std::uint64_t splitmix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void AlphaStableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("alpha-stable: alpha must lie in (0, 2]");
  if (!(dispersion > 0.0))
    throw std::invalid_argument("alpha-stable: dispersion must be > 0");
}

void GaussianParams::validate() const {
  if (!(variance >= 0.0))
    throw std::invalid_argument("gaussian: variance must be >= 0");
}

void Ar1Params::validate() const {
  if (!(pole >= 0.0 && pole < 1.0))
    throw std::invalid_argument("ar1: pole must lie in [0, 1)");
  std::visit([](const auto& w) { w.validate(); }, driving);
}

double characteristic_exponent(const WhiteSpec& spec) {
  if (const auto* sas = std::get_if<AlphaStableParams>(&spec)) return sas->alpha;
  return 2.0;
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t purpose,
                             std::uint64_t index) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = splitmix(master + kGolden * (purpose + 1));
  return splitmix(z + kGolden * (index + 1));
}

std::vector<double> sample_sas(const AlphaStableParams& params,
                               std::size_t count, std::uint64_t seed) {
  params.validate();
  if (count == 0) throw std::invalid_argument("sample_sas: count must be >= 1");

  std::mt19937_64 eng(seed);
  std::vector<double> out(count);
  const double a = params.alpha;
  // Scale so that the characteristic function is exactly
  // exp(-dispersion * |t|^alpha).
  const double sigma = std::pow(params.dispersion, 1.0 / a);

  if (a == 1.0) {
    // Cauchy branch of the CMS transform.
    for (double& v : out) {
      const double u = std::numbers::pi * (uniform_open(eng) - 0.5);
      v = sigma * std::tan(u);
    }
    return out;
  }

  const double inv_a = 1.0 / a;
  const double ratio = (1.0 - a) / a;
  for (double& v : out) {
    const double u = std::numbers::pi * (uniform_open(eng) - 0.5);
    const double w = -std::log(uniform_open(eng));
    const double t1 = std::sin(a * u) / std::pow(std::cos(u), inv_a);
    const double t2 = std::pow(std::cos((1.0 - a) * u) / w, ratio);
    v = sigma * t1 * t2;
  }
  return out;
}

std::vector<double> sample_gaussian(double variance, std::size_t count,
                                    std::uint64_t seed) {
  if (!(variance >= 0.0))
    throw std::invalid_argument("sample_gaussian: variance must be >= 0");
  if (count == 0)
    throw std::invalid_argument("sample_gaussian: count must be >= 1");

  std::vector<double> out(count);
  if (variance == 0.0) return out;

  std::mt19937_64 eng(seed);
  const double sd = std::sqrt(variance);
  for (std::size_t i = 0; i < count; i += 2) {
    // Box-Muller pair.
    const double r = std::sqrt(-2.0 * std::log(uniform_open(eng)));
    const double phi = 2.0 * std::numbers::pi * uniform_open(eng);
    out[i] = sd * r * std::cos(phi);
    if (i + 1 < count) out[i + 1] = sd * r * std::sin(phi);
  }
  return out;
}

std::vector<double> sample_white(const WhiteSpec& spec, std::size_t count,
                                 std::uint64_t seed) {
  if (const auto* sas = std::get_if<AlphaStableParams>(&spec))
    return sample_sas(*sas, count, seed);
  return sample_gaussian(std::get<GaussianParams>(spec).variance, count, seed);
}

std::vector<double> color_ar1(std::span<const double> white,
                              const Ar1Params& params) {
  params.validate();
  if (white.empty()) throw std::invalid_argument("color_ar1: empty input");

  std::vector<double> y(white.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < white.size(); ++k) {
    prev = params.pole * prev + white[k];
    y[k] = prev;
  }
  return y;
}

std::vector<double> generate_ar1(const Ar1Params& params, std::size_t count,
                                 std::uint64_t seed) {
  params.validate();
  std::vector<double> white = sample_white(params.driving, count, seed);
  if (params.pole == 0.0) return white;
  return color_ar1(white, params);
}

}  // namespace fonspn
