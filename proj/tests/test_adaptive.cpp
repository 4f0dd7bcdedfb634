// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fonspn/adaptive.hpp"
#include "fonspn/signalgen.hpp"

using namespace fonspn;

namespace {

SubbandFrame make_frame(std::vector<std::vector<double>> inputs,
                        std::vector<double> desired) {
  SubbandFrame frame;
  frame.band_inputs = std::move(inputs);
  frame.band_desired = std::move(desired);
  frame.frame_index = 0;
  return frame;
}

// Random single- or multi-band frames for property checks.
SubbandFrame random_frame(std::mt19937_64& eng, int bands, int taps) {
  std::normal_distribution<double> dist(0.0, 1.0);
  SubbandFrame frame;
  frame.band_inputs.resize(bands);
  frame.band_desired.resize(bands);
  for (int i = 0; i < bands; ++i) {
    frame.band_inputs[i].resize(taps);
    for (double& v : frame.band_inputs[i]) v = dist(eng);
    frame.band_desired[i] = dist(eng);
  }
  return frame;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(AlgoConfig::nsaf(0.5, 20));
  CHECK_NOTHROW(AlgoConfig::nspn(0.5, 0.7, 20));
  CHECK_NOTHROW(AlgoConfig::fonspn(0.5, 0.7, 0.65, 20));
  CHECK_THROWS_AS(AlgoConfig::fonspn(0.0, 0.7, 0.65, 20), std::invalid_argument);
  CHECK_THROWS_AS(AlgoConfig::fonspn(0.5, 0.7, 0.65, 0), std::invalid_argument);
  CHECK_THROWS_AS(AlgoConfig::fonspn(0.5, 0.7, 0.65, 20, -1.0), std::invalid_argument);

  AlgoConfig bad = AlgoConfig::nsaf(0.5, 20);
  bad.p = 0.7;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = AlgoConfig::nspn(0.5, 0.7, 20);
  bad.beta = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("subband errors") {
  FilterState state(2);

  SUBCASE("zero weights reproduce the desired signal") {
    const auto frame = make_frame({{2.0, 3.0}, {-1.0, 4.0}}, {1.5, -0.25});
    const auto e = subband_errors(state, frame);
    CHECK(e == std::vector<double>{1.5, -0.25});
  }

  SUBCASE("hand example") {
    state.weights = {1.0, -1.0};
    const auto frame = make_frame({{2.0, 3.0}}, {1.0});
    CHECK(subband_errors(state, frame)[0] == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("regressor length mismatch") {
    const auto frame = make_frame({{1.0, 2.0, 3.0}}, {1.0});
    CHECK_THROWS_AS(subband_errors(state, frame), std::invalid_argument);
  }
}

TEST_CASE("gain") {
  CHECK(gain(0.0, 2.0, 1.0) == 0.0);
  CHECK(gain(0.0, 0.7, 0.7) == 0.0);  // sgn(0) = 0 covers the p = beta case
  CHECK(gain(-3.0, 2.0, 1.0) == -3.0);
  CHECK(gain(5.0, 1.7, 0.7) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(gain(-2.0, 0.7, 0.65) == doctest::Approx(-std::pow(2.0, 0.05)).epsilon(1e-15));
  CHECK(gain(-2.0, 0.7, 0.65) == doctest::Approx(-1.03526).epsilon(1e-5));
  CHECK(gain(4.0, 0.7, 0.7) == 1.0);
  CHECK_THROWS_AS(gain(1.0, 0.7, 1.5), std::invalid_argument);
}

TEST_CASE("update hand examples") {
  SUBCASE("nsaf step") {
    FilterState state(2);
    const auto frame = make_frame({{1.0, -2.0}}, {1.0});
    update(state, frame, AlgoConfig::fonspn(0.5, 2.0, 1.0, 2, 0.0));
    CHECK(state.weights[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(state.weights[1] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(state.update_count == 1);
  }

  SUBCASE("fractional step") {
    FilterState state(2);
    const auto frame = make_frame({{1.0, -2.0}}, {1.0});
    update(state, frame, AlgoConfig::fonspn(0.3, 1.0, 0.5, 2, 0.0));
    CHECK(state.weights[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(state.weights[1] == doctest::Approx(-0.1 * std::numbers::sqrt2).epsilon(1e-12));
  }

  SUBCASE("zero regressors leave the weights unchanged") {
    FilterState state(2);
    state.weights = {0.5, -0.5};
    const auto frame = make_frame({{0.0, 0.0}}, {3.0});
    update(state, frame, AlgoConfig::fonspn(0.5, 2.0, 1.0, 2, 1e-6));
    CHECK(state.weights == std::vector<double>{0.5, -0.5});
  }
}

TEST_CASE("degeneration to the beta = 1 algorithms is bit exact") {
  std::mt19937_64 eng(99);
  const int taps = 20;

  FilterState general(taps), reference(taps);
  const auto fonspn_cfg = AlgoConfig::fonspn(0.25, 0.7, 1.0, taps);
  const auto nspn_cfg = AlgoConfig::nspn(0.25, 0.7, taps);
  for (int k = 0; k < 200; ++k) {
    const auto frame = random_frame(eng, 4, taps);
    update(general, frame, fonspn_cfg);
    update(reference, frame, nspn_cfg);
    REQUIRE(general.weights == reference.weights);
  }

  FilterState general2(taps), reference2(taps);
  const auto fonspn2 = AlgoConfig::fonspn(0.25, 2.0, 1.0, taps);
  const auto nsaf = AlgoConfig::nsaf(0.25, taps);
  for (int k = 0; k < 200; ++k) {
    const auto frame = random_frame(eng, 4, taps);
    update(general2, frame, fonspn2);
    update(reference2, frame, nsaf);
    REQUIRE(general2.weights == reference2.weights);
  }
}

TEST_CASE("update composes from gain, norm, and diagonal parts") {
  std::mt19937_64 eng(7);
  const int taps = 8;
  const auto cfg = AlgoConfig::fonspn(0.4, 1.2, 0.8, taps, 1e-6);

  FilterState state(taps);
  for (int k = 0; k < 50; ++k) {
    const auto frame = random_frame(eng, 2, taps);
    const auto errors = subband_errors(state, frame);
    std::vector<double> expected = state.weights;
    for (std::size_t i = 0; i < frame.band_inputs.size(); ++i) {
      const auto& x = frame.band_inputs[i];
      const double g = gain(errors[i], cfg.p, cfg.beta);
      const double den = pnorm_pow_sum(x, cfg.p, cfg.eps);
      for (int j = 0; j < taps; ++j)
        expected[j] += cfg.mu * g *
                       std::pow(std::abs(x[j]) + cfg.eps, cfg.beta - 1.0) *
                       x[j] / den;
    }
    update(state, frame, cfg);
    REQUIRE(state.weights == expected);
  }
}

TEST_CASE("increment aligns with the error-weighted regressor") {
  std::mt19937_64 eng(21);
  for (const auto& [p, beta] : std::vector<std::pair<double, double>>{
           {2.0, 1.0}, {0.7, 0.65}, {1.5, 0.9}}) {
    const auto cfg = AlgoConfig::fonspn(0.3, p, beta, 6);
    for (int k = 0; k < 100; ++k) {
      FilterState state(6);
      const auto frame = random_frame(eng, 1, 6);
      const double e = subband_errors(state, frame)[0];
      update(state, frame, cfg);
      double dot = 0.0;
      for (int j = 0; j < 6; ++j)
        dot += state.weights[j] * frame.band_inputs[0][j] * e;
      CHECK(dot >= 0.0);
    }
  }
}

TEST_CASE("increment grows sublinearly in the error for p - beta < 1") {
  const auto cfg = AlgoConfig::fonspn(0.3, 0.7, 0.65, 4);
  const std::vector<double> x{1.0, -2.0, 0.5, 3.0};
  auto increment_norm = [&](double d) {
    FilterState state(4);
    update(state, make_frame({x}, {d}), cfg);
    double acc = 0.0;
    for (double w : state.weights) acc += w * w;
    return std::sqrt(acc);
  };
  const double ratio = increment_norm(1000.0) / increment_norm(10.0);
  CHECK(ratio == doctest::Approx(std::pow(100.0, cfg.p - cfg.beta)).epsilon(1e-9));
  CHECK(ratio < 100.0);  // strictly sublinear growth
}

TEST_CASE("non-finite updates freeze the state") {
  FilterState state(2);
  state.weights = {1.0, 1.0};
  const auto frame = make_frame({{1e308, 1e308}}, {1e308});
  update(state, frame, AlgoConfig::fonspn(1e300, 2.0, 1.0, 2, 0.0));
  CHECK(state.diverged);
  CHECK(state.weights == std::vector<double>{1.0, 1.0});  // rolled back

  // Further updates are no-ops.
  update(state, make_frame({{1.0, 1.0}}, {1.0}), AlgoConfig::nsaf(0.5, 2));
  CHECK(state.weights == std::vector<double>{1.0, 1.0});
  CHECK(state.update_count == 0);
}

TEST_CASE("noise-free identification converges below -40 dB") {
  const int taps = 16;
  const auto h0 = sample_gaussian(1.0, taps, 123);
  const auto x = sample_gaussian(1.0, 5000, 321);
  std::vector<double> d(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    for (int j = 0; j <= std::min<int>(taps - 1, k); ++j)
      d[k] += h0[j] * x[k - j];

  SubbandStream stream(FilterBank::identity(), x, d, taps);
  FilterState state(taps);
  const auto cfg = AlgoConfig::fonspn(0.5, 2.0, 1.0, taps);
  SubbandFrame frame;
  while (stream.next(frame)) update(state, frame, cfg);

  double dev = 0.0, h0n = 0.0;
  for (int j = 0; j < taps; ++j) {
    dev += (h0[j] - state.weights[j]) * (h0[j] - state.weights[j]);
    h0n += h0[j] * h0[j];
  }
  CHECK(10.0 * std::log10(dev / h0n) < -40.0);
}

TEST_CASE("fractional power derivative") {
  CHECK(fractional_power_derivative(2.0, 1.0, 3.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(fractional_power_derivative(1.0, 0.5, 1.0) ==
        doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(fractional_power_derivative(1.0, 0.5, 1.0) == doctest::Approx(1.12838).epsilon(1e-5));
  CHECK(fractional_power_derivative(1.0, 1.0, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fractional_power_derivative(0.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fractional_power_derivative(1.0, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fractional_power_derivative(1.0, 0.5, 0.0), std::invalid_argument);
}
