// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qslstm/datasets.hpp"

using namespace qsl::data;

TEST_CASE("signal names round-trip") {
  for (auto k : {SignalKind::Sine, SignalKind::Sawtooth, SignalKind::SummedWaves,
                 SignalKind::DampedOscillator})
    CHECK(parse_signal_kind(to_string(k)) == k);
  CHECK_THROWS(parse_signal_kind("square"));
}

TEST_CASE("sine covers four periods on a closed grid") {
  const auto y = gen_sine(300, 4);
  REQUIRE(y.size() == 300);
  CHECK(y.front() == 0.0);
  CHECK(std::abs(y.back()) < 1e-12);
  CHECK(y[1] == doctest::Approx(std::sin(2 * std::numbers::pi * 4.0 / 299.0)));
  int crossings = 0;
  for (std::size_t k = 1; k < y.size(); ++k) crossings += (y[k - 1] < 0) != (y[k] < 0);
  CHECK(crossings >= 7);
  CHECK(crossings <= 8);
}

TEST_CASE("sawtooth ramps and wraps") {
  const auto y = gen_sawtooth(9, 2);
  // phase k/4: 0, .25, .5, .75, 1, ...
  CHECK(y[0] == -1.0);
  CHECK(y[1] == doctest::Approx(-0.5));
  CHECK(y[3] == doctest::Approx(0.5));
  CHECK(y[4] == doctest::Approx(-1.0));
  for (double v : gen_sawtooth(300, 4)) {
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("summed waves") {
  const SummedWaves w;
  CHECK(std::abs(summed_waves_at(w, 24.75)) <= 1e-9);
  CHECK(summed_waves_at(w, 0.0) == 2.0);
  CHECK(summed_waves_at(w, 99.0) == doctest::Approx(std::cos(22 * std::numbers::pi) + std::cos(18 * std::numbers::pi)));
  const auto y = gen_summed_waves(w, 300);
  CHECK(y.back() == doctest::Approx(summed_waves_at(w, 99.0)));
}

TEST_CASE("oscillator constants") {
  const Oscillator o;
  CHECK(o.omega0() == doctest::Approx(2.309401).epsilon(1e-6));
  CHECK(o.damping_ratio() == doctest::Approx(0.0288675).epsilon(1e-5));
  CHECK(o.omega_d() == doctest::Approx(2.309401 * std::sqrt(1 - 0.0288675 * 0.0288675)).epsilon(1e-6));
  CHECK(oscillator_at(o, 0.0) == 1.0);
}

TEST_CASE("oscillator closed form solves the equation of motion") {
  const Oscillator o;
  const double h = 1e-4;
  const double v0 = (oscillator_at(o, h) - oscillator_at(o, -h)) / (2 * h);
  CHECK(std::abs(v0) < 1e-7);
  for (int k = 1; k < 300; ++k) {
    const double t = 20.0 * k / 299.0;
    const double xm = oscillator_at(o, t - h), x = oscillator_at(o, t), xp = oscillator_at(o, t + h);
    const double acc = (xp - 2 * x + xm) / (h * h);
    const double vel = (xp - xm) / (2 * h);
    CHECK(std::abs(o.mass * acc + o.friction * vel + o.spring * x) <= 1e-6);
  }
  Oscillator over = o;
  over.friction = 10;
  CHECK_THROWS(oscillator_at(over, 1.0));
}

TEST_CASE("min-max scaling") {
  const auto [s, sc] = scale_minmax({2.0, 4.0, 6.0});
  CHECK(s == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(sc.inverse(0.0) == 4.0);
  CHECK(sc.inverse(sc.apply(5.3)) == doctest::Approx(5.3));
  CHECK_THROWS(scale_minmax({1.0, 1.0}));
  CHECK_THROWS(scale_minmax({}));
  for (auto kind : {SignalKind::Sine, SignalKind::Sawtooth, SignalKind::SummedWaves,
                    SignalKind::DampedOscillator}) {
    SignalConfig cfg;
    cfg.kind = kind;
    const auto [y, scaler] = scale_minmax(generate(cfg));
    CHECK(*std::min_element(y.begin(), y.end()) == -1.0);
    CHECK(*std::max_element(y.begin(), y.end()) == 1.0);
  }
}

TEST_CASE("windows and chronological split") {
  std::vector<double> series(10);
  for (std::size_t k = 0; k < 10; ++k) series[k] = static_cast<double>(k);
  const Dataset ds = make_windows(series, 4);
  REQUIRE(ds.size() == 6);
  CHECK(ds.samples[0].window.size() == 4);
  CHECK(ds.samples[0].window[3][0] == 3.0);
  CHECK(ds.samples[0].target[0] == 4.0);
  CHECK(ds.samples[5].start == 5);
  CHECK(ds.samples[5].target[0] == 9.0);
  CHECK_THROWS(make_windows(series, 10));
  CHECK_THROWS(make_windows(series, 0));

  const auto [train, val] = split_chronological(ds, 0.67);
  CHECK(train.size() == 4);
  CHECK(val.size() == 2);
  CHECK(val.samples[0].start == 4);

  const Dataset three = make_windows({0, 1, 2, 3, 4}, 2);
  const auto [t3, v3] = split_chronological(three, 0.67);
  CHECK(t3.size() == 2);
  CHECK(v3.size() == 1);

  const Dataset full = make_windows(gen_sine(300, 4), 4);
  CHECK(full.size() == 296);
  CHECK(split_chronological(full, 0.67).first.size() == 198);
  CHECK_THROWS(split_chronological(ds, 1.0));
  CHECK_THROWS(split_chronological(ds, 0.01));
}

TEST_CASE("config validation") {
  SignalConfig cfg;
  cfg.n_points = 1;
  CHECK_THROWS(cfg.validate());
  cfg = SignalConfig{};
  cfg.periods = 0;
  CHECK_THROWS(cfg.validate());
  cfg = SignalConfig{};
  cfg.kind = SignalKind::DampedOscillator;
  cfg.oscillator.friction = 100;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("generator hand examples") {
  CHECK(gen_sine(301, 1)[0] == 0.0);
  CHECK(gen_sine(301, 1)[75] == doctest::Approx(1.0).epsilon(1e-15));
  const auto saw = gen_sawtooth(301, 1);
  CHECK(saw[0] == -1.0);
  CHECK(std::abs(saw[150]) < 1e-12);
  const auto saw2 = gen_sawtooth(301, 2);
  CHECK(saw2[149] > 0.95);
  CHECK(saw2[150] == doctest::Approx(-1.0));
  CHECK(summed_waves_at(SummedWaves{}, 0.0) == 2.0);
}

TEST_CASE("scaler and window hand examples") {
  CHECK(scale_minmax({0, 5, 10}).first == std::vector<double>{-1, 0, 1});
  const std::vector<double> unit{-1.0, 0.3, 1.0, -0.2};
  const auto same = scale_minmax(unit).first;
  for (std::size_t k = 0; k < unit.size(); ++k) CHECK(std::abs(same[k] - unit[k]) <= 1e-12);

  const Dataset ds = make_windows({1, 2, 3, 4, 5}, 3);
  REQUIRE(ds.size() == 2);
  CHECK(ds.samples[0].window[0][0] == 1);
  CHECK(ds.samples[0].target[0] == 4);
  CHECK(ds.samples[1].target[0] == 5);
  CHECK(make_windows({1, 2, 3, 4, 5}, 4).size() == 1);

  std::vector<double> ten_plus(11);
  for (std::size_t k = 0; k < 11; ++k) ten_plus[k] = static_cast<double>(k);
  const auto [a, b] = split_chronological(make_windows(ten_plus, 1), 0.5);
  CHECK(a.size() == 5);
  CHECK(b.size() == 5);
}
