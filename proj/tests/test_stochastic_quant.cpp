// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "doctest.h"
#include "qslstm/stochastic_quant.hpp"

using namespace qsl::quant;
using qsl::lstm::Dims;

TEST_CASE("stochastic_round support and bias") {
  Prng prng(5);
  for (double w : {0.1, 0.5, -1.25, 3.7, -0.001, 126.9}) {
    const double lo = std::floor(w);
    const double p = w - lo;
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      const double q = stochastic_round(w, prng);
      REQUIRE((q == lo || q == lo + 1));
      sum += q;
      sq += q * q;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double sigma = std::sqrt(p * (1 - p) / n);
    INFO("w = " << w);
    CHECK(std::abs(mean - w) <= 4 * sigma);
    CHECK(var <= 1.5 * p * (1 - p));
    CHECK(var >= p * (1 - p) / 1.5);
  }
}

TEST_CASE("integers are returned unchanged without consuming randomness") {
  Prng a(9), b(9);
  for (double w : {0.0, -3.0, 17.0, -128.0}) CHECK(stochastic_round(w, a) == w);
  CHECK(a.next_u64() == b.next_u64());
  CHECK_THROWS_AS(stochastic_round(std::numeric_limits<double>::infinity(), a), std::domain_error);
}

TEST_CASE("rounding boundary rule") {
  // p <= frac rounds up, so frac near 1 almost always rounds up
  Prng prng(1);
  int ups = 0;
  for (int i = 0; i < 1000; ++i) ups += stochastic_round(2.999999, prng) == 3.0;
  CHECK(ups >= 995);
}

TEST_CASE("clamp range and STE mask") {
  QuantConfig cfg;
  CHECK(clamp(300.0, cfg) == 127.0);
  CHECK(clamp(-300.0, cfg) == -128.0);
  CHECK(clamp(5.0, cfg) == 5.0);
  CHECK(ste_mask(127.0, cfg) == 1.0);
  CHECK(ste_mask(-128.0, cfg) == 1.0);
  CHECK(ste_mask(127.5, cfg) == 0.0);
  CHECK(ste_mask(-128.01, cfg) == 0.0);
  CHECK(ste_mask(0.3, cfg) == 1.0);
  QuantConfig bad;
  bad.shots = 0;
  CHECK_THROWS(bad.validate());
  bad = QuantConfig{1, 3, 3};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("n-shot averaging shrinks the variance") {
  Prng prng(21);
  const double w = 0.3;
  for (std::size_t shots : {1U, 10U, 100U}) {
    QuantConfig cfg;
    cfg.shots = shots;
    const int n = 20000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      const double q = nshot_quantize(std::vector<double>{w}, cfg, prng)[0];
      sum += q;
      sq += q * q;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    const double want_var = w * (1 - w) / static_cast<double>(shots);
    INFO("shots = " << shots);
    CHECK(std::abs(mean - w) <= 4 * std::sqrt(want_var / n));
    CHECK(var <= 1.5 * want_var);
    CHECK(var >= want_var / 1.5);
  }
}

TEST_CASE("quantized values are clamped before averaging") {
  Prng prng(2);
  QuantConfig cfg{4, -2, 2};
  const Vector q = nshot_quantize(Vector{10.4, -7.2, 1.0}, cfg, prng);
  CHECK(q[0] == 2.0);
  CHECK(q[1] == -2.0);
  CHECK(q[2] == 1.0);
}

namespace {

LstmParams integer_params(const Dims& dims, Prng& prng) {
  LstmParams p = LstmParams::zeros(dims);
  for (auto t : p.tensors())
    for (double& v : t) v = std::floor(prng.uniform() * 5) - 2;
  return p;
}

}  // namespace

TEST_CASE("integer pre-activations make the stochastic cell exact") {
  // window of one with h0 = 0 and integer W, b, x gives integer MAC outputs
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Prng prng(seed);
    const Dims dims{2, 3, 1};
    LstmParams p = integer_params(dims, prng);
    std::vector<Vector> window{Vector{1.0, -2.0}};
    Prng draw(seed + 1000);
    const auto sr = slstm_sequence_forward(p, QuantConfig{}, window, draw);
    const auto cr = qsl::lstm::sequence_forward(p, window);
    CHECK(sr.prediction == cr.prediction);

    const Vector d{0.7};
    LstmParams gs = slstm_sequence_backward(p, sr.cache, d);
    LstmParams gc = qsl::lstm::sequence_backward(p, cr.cache, d);
    auto ts = gs.tensors();
    auto tc = gc.tensors();
    for (std::size_t t = 0; t < ts.size(); ++t)
      for (std::size_t i = 0; i < ts[t].size(); ++i) CHECK(ts[t][i] == doctest::Approx(tc[t][i]).epsilon(1e-14));
  }
}

TEST_CASE("clamped pre-activations block the gradient") {
  const Dims dims{1, 2, 1};
  LstmParams p = LstmParams::zeros(dims);
  p.b[qsl::lstm::kCandidate] = Vector{200.0, 1.0};
  p.b[qsl::lstm::kInput] = Vector{1.0, 1.0};
  p.b[qsl::lstm::kOutput] = Vector{1.0, 1.0};
  p.W_y(0, 0) = 1.0;
  p.W_y(0, 1) = 1.0;
  Prng prng(3);
  std::vector<Vector> window{Vector{1.0}};
  const auto r = slstm_sequence_forward(p, QuantConfig{}, window, prng);
  CHECK(r.cache.steps[0].record.pre[qsl::lstm::kCandidate][0] == 127.0);
  const LstmParams g = slstm_sequence_backward(p, r.cache, Vector{1.0});
  CHECK(g.b[qsl::lstm::kCandidate][0] == 0.0);
  CHECK(g.W[qsl::lstm::kCandidate](0, 2) == 0.0);
  CHECK(g.b[qsl::lstm::kCandidate][1] != 0.0);
  CHECK(g.b[qsl::lstm::kInput][0] != 0.0);
}

TEST_CASE("stochastic forward is reproducible per seed") {
  Prng init(4);
  LstmParams p = qsl::lstm::init_params(Dims{}, init);
  std::vector<Vector> window{Vector{0.3}, Vector{-0.2}, Vector{0.9}, Vector{0.1}};
  Prng a(77), b(77);
  QuantConfig cfg;
  cfg.shots = 3;
  CHECK(slstm_sequence_forward(p, cfg, window, a).prediction ==
        slstm_sequence_forward(p, cfg, window, b).prediction);
}

TEST_CASE("many shots approach the unquantized cell") {
  Prng init(8);
  LstmParams p = qsl::lstm::init_params(Dims{}, init);
  std::vector<Vector> window{Vector{0.5}, Vector{-0.5}, Vector{0.25}, Vector{0.75}};
  QuantConfig cfg;
  cfg.shots = 5000;
  Prng prng(1);
  const double s = slstm_sequence_forward(p, cfg, window, prng).prediction[0];
  const double c = qsl::lstm::sequence_forward(p, window).prediction[0];
  CHECK(std::abs(s - c) < 0.05);
}

TEST_CASE("quantizer hand examples") {
  Prng prng(31);
  for (int i = 0; i < 100; ++i) CHECK(stochastic_round(2.0, prng) == 2.0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) sum += stochastic_round(-1.25, prng);
  CHECK(std::abs(sum / 100000 + 1.25) < 0.005);
  int ones = 0;
  for (int i = 0; i < 100000; ++i) {
    const double q = stochastic_round(0.3, prng);
    REQUIRE((q == 0.0 || q == 1.0));
    ones += q == 1.0;
  }
  CHECK(std::abs(ones / 1e5 - 0.3) <= 3 * std::sqrt(0.3 * 0.7 / 1e5));

  CHECK(clamp(200, QuantConfig{}) == 127);
  CHECK(clamp(0, QuantConfig{1, -3, 9}) == 0);
  CHECK(clamp(-130, QuantConfig{}) == -128);

  CHECK(nshot_quantize(Vector{2.0}, QuantConfig{}, prng) == Vector{2.0});
  QuantConfig many;
  many.shots = 100000;
  CHECK(std::abs(nshot_quantize(Vector{0.3}, many, prng)[0] - 0.3) < 0.01);

  QuantConfig hundred;
  hundred.shots = 100;
  double s = 0, sq = 0;
  for (int i = 0; i < 2000; ++i) {
    const double q = nshot_quantize(Vector{0.5}, hundred, prng)[0];
    REQUIRE(q >= 0.0);
    REQUIRE(q <= 1.0);
    s += q;
    sq += q * q;
  }
  const double sd = std::sqrt(sq / 2000 - (s / 2000) * (s / 2000));
  CHECK(sd == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("stochastic cell edge cases") {
  Prng prng(32);
  LstmParams zero = LstmParams::zeros(Dims{});
  auto [next, step] = slstm_cell_forward(zero, QuantConfig{}, Vector{0.4}, CellState::zeros(5), prng);
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(step.record.act[qsl::lstm::kForget][r] == 0.5);
    CHECK(step.record.act[qsl::lstm::kOutput][r] == 0.5);
    CHECK(next.h[r] == 0.0);
  }

  Prng init(33);
  LstmParams p = qsl::lstm::init_params(Dims{1, 1, 1}, init);
  for (auto t : p.tensors())
    for (double& v : t) v = init.uniform() * 2 - 1;
  QuantConfig many;
  many.shots = 100000;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x{init.uniform() * 6 - 3};
    const CellState prev{Vector{init.uniform() * 2 - 1}, Vector{init.uniform() * 2 - 1}};
    const auto exact = qsl::lstm::lstm_cell_forward(p, x, prev).second;
    const auto noisy = slstm_cell_forward(p, many, x, prev, prng).second;
    for (std::size_t g = 0; g < 4; ++g) CHECK(std::abs(exact.act[g][0] - noisy.record.act[g][0]) < 0.01);
  }

  LstmParams wide = qsl::lstm::init_params(Dims{}, init);
  for (auto& w : wide.W)
    for (double& v : w.data()) v *= 200;
  const auto one = slstm_cell_forward(wide, QuantConfig{}, Vector{0.9}, CellState{Vector(5, 0.5), Vector(5, 0.0)}, prng).second;
  for (const auto& u : one.record.pre) {
    for (double v : u) {
      CHECK(v == std::floor(v));
      CHECK(v >= -128);
      CHECK(v <= 127);
    }
  }
}

TEST_CASE("stochastic backward with zero upstream gradient") {
  Prng prng(34);
  LstmParams p = qsl::lstm::init_params(Dims{}, prng);
  std::vector<Vector> window{Vector{0.1}, Vector{0.2}, Vector{0.3}, Vector{0.4}};
  const auto r = slstm_sequence_forward(p, QuantConfig{}, window, prng);
  LstmParams g = slstm_sequence_backward(p, r.cache, Vector{0.0});
  for (auto t : g.tensors())
    for (double v : t) CHECK(v == 0.0);
  StochasticCache bad = r.cache;
  bad.steps.clear();
  CHECK_THROWS_AS(slstm_sequence_backward(p, bad, Vector{1.0}), qsl::ShapeError);
}
