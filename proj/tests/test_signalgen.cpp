// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fonspn/signalgen.hpp"

using namespace fonspn;

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size());
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(q * (v.size() - 1))];
}

constexpr std::size_t kBig = 1000000;

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(sample_sas({0.0, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_sas({2.5, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_sas({1.0, 0.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_sas({1.0, -1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_sas({1.0, 1.0}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian(-0.5, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian(1.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(color_ar1(std::vector<double>{1.0}, Ar1Params{1.0, GaussianParams{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(color_ar1(std::vector<double>{1.0}, Ar1Params{-0.1, GaussianParams{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(color_ar1(std::vector<double>{}, Ar1Params{0.5, GaussianParams{1.0}}),
                  std::invalid_argument);
}

TEST_CASE("seed determinism") {
  const AlphaStableParams sas{0.75, 1.0 / 60.0};
  CHECK(sample_sas(sas, 1000, 42) == sample_sas(sas, 1000, 42));
  CHECK(sample_gaussian(1.0, 1000, 42) == sample_gaussian(1.0, 1000, 42));
  CHECK(sample_sas(sas, 1000, 42) != sample_sas(sas, 1000, 43));
}

TEST_CASE("substream seeds are distinct") {
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 0, 1));
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 1, 0));
  CHECK(substream_seed(1, 0, 0) != substream_seed(2, 0, 0));
}

TEST_CASE("gaussian moments") {
  CHECK(sample_gaussian(0.0, 100, 7) == std::vector<double>(100, 0.0));
  const auto x = sample_gaussian(0.001, kBig, 7);
  CHECK(std::abs(mean(x)) < 1e-4);
  CHECK(variance(x) == doctest::Approx(0.001).epsilon(0.03));
}

TEST_CASE("alpha = 2 reduces to a gaussian with variance 2 * dispersion") {
  const double zeta = 1.0 / 60.0;
  const auto x = sample_sas({2.0, zeta}, kBig, 11);
  CHECK(variance(x) == doctest::Approx(2.0 * zeta).epsilon(0.03));

  // Kolmogorov-Smirnov against N(0, 2 zeta) at the 1% level.
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(2.0 * zeta);
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 0.5 * (1.0 + std::erf(sorted[i] / (sd * std::numbers::sqrt2)));
    const double lo = static_cast<double>(i) / sorted.size();
    const double hi = static_cast<double>(i + 1) / sorted.size();
    d = std::max({d, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  CHECK(d * std::sqrt(static_cast<double>(sorted.size())) < 1.628);
}

TEST_CASE("alpha = 1 is cauchy with quartiles at +-dispersion") {
  const double zeta = 0.1;
  auto x = sample_sas({1.0, zeta}, kBig, 13);
  CHECK(std::abs(quantile(x, 0.5)) < 0.05 * zeta);
  CHECK(quantile(x, 0.75) == doctest::Approx(zeta).epsilon(0.05));
  CHECK(quantile(x, 0.25) == doctest::Approx(-zeta).epsilon(0.05));
}

TEST_CASE("empirical characteristic function matches exp(-zeta |t|^alpha)") {
  const double zeta = 1.0 / 60.0;
  for (double alpha : {0.75, 1.0, 1.5, 2.0}) {
    const auto x = sample_sas({alpha, zeta}, kBig, 17);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      double acc = 0.0;
      for (double v : x) acc += std::cos(t * v);
      const double ecf = acc / static_cast<double>(x.size());
      CHECK(std::abs(ecf - std::exp(-zeta * std::pow(t, alpha))) < 0.01);
    }
  }
}

TEST_CASE("symmetry: mean sign is zero") {
  for (double alpha : {0.75, 1.0, 1.5, 2.0}) {
    const auto x = sample_sas({alpha, 1.0 / 60.0}, kBig, 19);
    double acc = 0.0;
    for (double v : x) acc += v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    CHECK(std::abs(acc / static_cast<double>(x.size())) < 0.01);
  }
}

TEST_CASE("tail quantile is nonincreasing in alpha") {
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {0.75, 1.0, 1.5, 2.0}) {
    auto x = sample_sas({alpha, 1.0 / 60.0}, kBig, 23);
    for (double& v : x) v = std::abs(v);
    const double q = quantile(x, 0.999);
    CHECK(q <= prev);
    prev = q;
  }
}

TEST_CASE("ar1 coloring") {
  const Ar1Params half{0.5, GaussianParams{1.0}};
  const std::vector<double> impulse{1.0, 0.0, 0.0};
  const auto resp = color_ar1(impulse, half);
  CHECK(resp == std::vector<double>{1.0, 0.5, 0.25});

  const auto white = sample_gaussian(1.0, 1000, 29);
  CHECK(color_ar1(white, Ar1Params{0.0, GaussianParams{1.0}}) == white);
}

TEST_CASE("ar1 stationary variance at pole 0.999") {
  const double pole = 0.999;
  const auto y = generate_ar1(Ar1Params{pole, GaussianParams{1.0}}, kBig, 31);
  const std::vector<double> tail(y.begin() + 10000, y.end());
  const double expected = 1.0 / (1.0 - pole * pole);
  CHECK(variance(tail) == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("generate_ar1 dispatches white kinds") {
  const Ar1Params stable{0.0, AlphaStableParams{1.0, 0.1}};
  CHECK(generate_ar1(stable, 100, 37) == sample_sas({1.0, 0.1}, 100, 37));
  CHECK(characteristic_exponent(stable.driving) == 1.0);
  CHECK(characteristic_exponent(WhiteSpec{GaussianParams{1.0}}) == 2.0);
}
