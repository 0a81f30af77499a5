// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qslstm/datasets.hpp"
#include "qslstm/models.hpp"
#include "qslstm/train_eval.hpp"

using namespace qsl::train;
using qsl::models::ModelConfig;
using qsl::models::ModelKind;
using qsl::models::ModelSpec;

namespace {

std::pair<qsl::data::Dataset, qsl::data::Dataset> sine_split() {
  const auto [y, sc] = qsl::data::scale_minmax(qsl::data::gen_sine(300, 4));
  return qsl::data::split_chronological(qsl::data::make_windows(y, 4), 0.67);
}

}  // namespace

TEST_CASE("mse, rmse and r2 examples") {
  const MseResult m = mse_and_grad(Vector{1.0, 2.0}, Vector{0.0, 4.0});
  CHECK(m.loss == doctest::Approx(2.5));
  CHECK(m.d_pred == Vector{1.0, -2.0});
  CHECK(rmse(Vector{1, 2, 3}, Vector{1, 2, 3}) == 0.0);
  CHECK(rmse(Vector{0, 0}, Vector{3, 4}) == doctest::Approx(std::sqrt(12.5)));
  CHECK(r2_score(Vector{1, 2, 3}, Vector{1, 2, 3}) == 1.0);
  CHECK(r2_score(Vector{2, 2, 2}, Vector{1, 2, 3}) == doctest::Approx(0.0));
  CHECK(r2_score(Vector{3, 2, 1}, Vector{1, 2, 3}) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(r2_score(Vector{1, 2}, Vector{5, 5}), std::domain_error);
  CHECK_THROWS_AS(rmse(Vector{1}, Vector{1, 2}), qsl::ShapeError);
  CHECK_THROWS(mse_and_grad(Vector{}, Vector{}));
}

TEST_CASE("rmsprop update rule") {
  Rmsprop opt(RmspropConfig{});
  Vector w{1.0, -1.0};
  Vector g{2.0, 0.0};
  opt.step({std::span<double>(w)}, {std::span<double>(g)});
  // first step: s = 0.01 g^2, so the move is lr * g / (0.1 |g| + eps)
  CHECK(w[0] == doctest::Approx(1.0 - 0.01 * 2.0 / (0.2 + 1e-8)).epsilon(1e-15));
  CHECK(1.0 - w[0] == doctest::Approx(0.09999).epsilon(1e-4));
  CHECK(w[1] == -1.0);
  CHECK(opt.accumulators()[0] == doctest::Approx(0.04));
  opt.step({std::span<double>(w)}, {std::span<double>(g)});
  const double s2 = 0.99 * 0.04 + 0.01 * 4.0;
  CHECK(opt.accumulators()[0] == doctest::Approx(s2));
  Vector other(3);
  CHECK_THROWS_AS(opt.step({std::span<double>(other)}, {std::span<double>(other)}), qsl::ShapeError);
  CHECK_THROWS(Rmsprop(RmspropConfig{0.0, 0.99, 1e-8}));
  CHECK_THROWS(Rmsprop(RmspropConfig{0.01, 1.0, 1e-8}));
}

TEST_CASE("model specs") {
  CHECK(ModelSpec{ModelKind::Classic, 1}.label() == "classic");
  CHECK(ModelSpec{ModelKind::QlstmShots, 1}.label() == "qlstm-shots-1");
  CHECK(ModelSpec{ModelKind::SlstmShots, 100}.label() == "slstm-shots-100");
  CHECK(ModelSpec{ModelKind::SlstmShots, 100}.eval_mode() == "shots:100");
  CHECK(ModelSpec{ModelKind::QlstmAnalytic, 1}.eval_mode() == "analytic");
  CHECK(ModelSpec{ModelKind::Classic, 1}.eval_mode() == "deterministic");
  CHECK(ModelSpec::parse_kind("slstm-shots") == ModelKind::SlstmShots);
  CHECK_THROWS(ModelSpec::parse_kind("transformer"));
}

TEST_CASE("model gradients are weighted MSE gradients") {
  ModelConfig cfg;
  cfg.dims = {1, 3, 1};
  cfg.n_qubits = 2;
  for (auto kind : {ModelKind::Classic, ModelKind::QlstmAnalytic}) {
    Prng init(12);
    auto model = qsl::models::make_model(ModelSpec{kind, 1}, cfg, init);
    const std::vector<Vector> window{Vector{0.2}, Vector{-0.4}, Vector{0.6}};
    const Vector target{0.3};
    Prng prng(1);
    model->zero_grad();
    model->accumulate_gradient(window, target, 0.25, prng);
    auto params = model->parameters();
    auto grads = model->gradients();
    REQUIRE(params.size() == grads.size());
    for (std::size_t t = 0; t < params.size(); ++t) {
      for (std::size_t i = 0; i < params[t].size(); i += 3) {
        const double saved = params[t][i];
        auto loss = [&](double v) {
          params[t][i] = v;
          const double e = model->predict(window, prng)[0] - target[0];
          return 0.25 * e * e;
        };
        const double fd = (loss(saved + 1e-6) - loss(saved - 1e-6)) / 2e-6;
        params[t][i] = saved;
        CHECK(oracle::close(grads[t][i], fd, 1e-4, 1e-8));
      }
    }
    model->zero_grad();
    for (auto g : model->gradients())
      for (double v : g) CHECK(v == 0.0);
  }
}

TEST_CASE("degenerate constant dataset is learned within 100 epochs") {
  qsl::data::Dataset train, val;
  train.window_len = val.window_len = 4;
  for (int k = 0; k < 60; ++k) {
    qsl::data::Sample s{std::vector<Vector>(4, Vector{0.3}), Vector{0.5}, 0};
    (k < 40 ? train : val).samples.push_back(s);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Prng init(seed + 100), prng(seed);
    auto model = qsl::models::make_model(ModelSpec{}, ModelConfig{}, init);
    TrainConfig cfg;
    cfg.epochs = 100;
    const RunRecord r = train_model(*model, train, val, cfg, prng);
    double best = 1.0;
    for (const auto& e : r.epochs) best = std::min(best, e.train_rmse);
    CHECK(best < 1e-3);
    CHECK(std::isnan(r.epochs.back().val_r2));
  }
}

TEST_CASE("run record bookkeeping") {
  RunRecord r;
  CHECK_THROWS_AS(r.best_epoch(), std::logic_error);
  r.epochs = {{1, 0, 0, 0.5, 0, 0}, {2, 0, 0, 0.2, 0, 0}, {3, 0, 0, 0.2, 0, 0}, {4, 0, 0, 0.3, 0, 0}};
  CHECK(r.best_epoch() == 2);

  auto [train, val] = sine_split();
  Prng init(1), prng(1);
  auto model = qsl::models::make_model(ModelSpec{}, ModelConfig{}, init);
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(train_model(*model, train, val, cfg, prng).best_epoch(), std::logic_error);
  cfg.epochs = 3;
  std::size_t seen = 0;
  const RunRecord rec = train_model(*model, train, val, cfg, prng, [&](const EpochMetrics& m) {
    CHECK(m.epoch == ++seen);
  });
  CHECK(seen == 3);
  CHECK(rec.eval_mode == "deterministic");
  CHECK(rec.seed == 1);
  CHECK(rec.wall_seconds >= 0.0);
}

TEST_CASE("training reduces the loss across seeds") {
  auto [train, val] = sine_split();
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Prng init = Prng(seed).split();
    Prng prng(seed);
    auto model = qsl::models::make_model(ModelSpec{}, ModelConfig{}, init);
    TrainConfig cfg;
    cfg.epochs = 10;
    const RunRecord r = train_model(*model, train, val, cfg, prng);
    improved += r.epochs.back().train_rmse < r.epochs.front().train_rmse;
  }
  CHECK(improved >= 18);
}

TEST_CASE("shuffled training is reproducible") {
  auto [train, val] = sine_split();
  auto run = [&](std::uint64_t seed) {
    Prng init(5), prng(seed);
    auto model = qsl::models::make_model(ModelSpec{}, ModelConfig{}, init);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.shuffle = true;
    return train_model(*model, train, val, cfg, prng).epochs.back().val_rmse;
  };
  CHECK(run(1) == run(1));
  CHECK(run(1) != run(2));
}

TEST_CASE("loss hand examples") {
  const MseResult same = mse_and_grad(Vector{0.4, -0.2}, Vector{0.4, -0.2});
  CHECK(same.loss == 0.0);
  CHECK(same.d_pred == Vector{0.0, 0.0});
  const MseResult one = mse_and_grad(Vector{1.0}, Vector{0.0});
  CHECK(one.loss == 1.0);
  CHECK(one.d_pred == Vector{2.0});
  const Vector target{0.3, -0.8, 1.1};
  const Vector fd = qsl::math::finite_diff_grad(
      [&](const Vector& p) { return mse_and_grad(p, target).loss; }, Vector{0.1, 0.2, -0.5});
  const Vector an = mse_and_grad(Vector{0.1, 0.2, -0.5}, target).d_pred;
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(fd[k] - an[k]) <= 1e-8);
  CHECK(rmse(Vector{1.1, 2.1, 3.1}, Vector{1, 2, 3}) == doctest::Approx(0.1));
}

TEST_CASE("rmsprop with zero gradient and unit gradient") {
  Rmsprop opt(RmspropConfig{});
  Vector w{0.5, 0.5};
  Vector zero{0.0, 0.0};
  opt.step({std::span<double>(w)}, {std::span<double>(zero)});
  CHECK(w == Vector{0.5, 0.5});
  Vector unit{1.0, 1.0};
  opt.step({std::span<double>(w)}, {std::span<double>(unit)});
  CHECK(0.5 - w[0] == doctest::Approx(0.01 / (0.1 + 1e-8)).epsilon(1e-12));
  CHECK(0.5 - w[0] == doctest::Approx(0.09999).epsilon(1e-4));
}

TEST_CASE("identical seeds give identical trajectories") {
  auto [train, val] = sine_split();
  auto run = [&] {
    Prng init(8), prng(8);
    auto model = qsl::models::make_model(ModelSpec{ModelKind::SlstmShots, 2}, ModelConfig{}, init);
    TrainConfig cfg;
    cfg.epochs = 2;
    const RunRecord r = train_model(*model, train, val, cfg, prng);
    std::vector<double> out;
    for (const auto& e : r.epochs) out.insert(out.end(), {e.train_rmse, e.val_rmse, e.val_r2});
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("classic model on the sine benchmark") {
  auto [train, val] = sine_split();
  Prng init = Prng(1).split();
  Prng prng(1);
  auto model = qsl::models::make_model(ModelSpec{}, ModelConfig{}, init);
  const RunRecord r = train_model(*model, train, val, TrainConfig{}, prng);
  CHECK(r.epochs.size() == 100);
  CHECK(r.best().val_rmse <= 0.08);
}
