// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/train_eval.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qsl::train {

MseResult mse_and_grad(std::span<const double> pred, std::span<const double> target) {
  math::check_size(target, pred.size(), "mse target");
  if (pred.empty()) throw std::invalid_argument("mse_and_grad: empty input");
  MseResult r;
  r.d_pred.resize(pred.size());
  const double n = static_cast<double>(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double e = pred[k] - target[k];
    r.loss += e * e;
    r.d_pred[k] = 2.0 * e / n;
  }
  r.loss /= n;
  return r;
}

double rmse(std::span<const double> preds, std::span<const double> targets) {
  math::check_size(targets, preds.size(), "rmse targets");
  if (preds.empty()) throw std::invalid_argument("rmse: empty input");
  double sse = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double e = preds[k] - targets[k];
    sse += e * e;
  }
  return std::sqrt(sse / static_cast<double>(preds.size()));
}

double r2_score(std::span<const double> preds, std::span<const double> targets) {
  math::check_size(targets, preds.size(), "r2 targets");
  if (preds.empty()) throw std::invalid_argument("r2_score: empty input");
  const double mean =
      std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    ss_res += (targets[k] - preds[k]) * (targets[k] - preds[k]);
    ss_tot += (targets[k] - mean) * (targets[k] - mean);
  }
  if (ss_tot == 0.0) throw std::domain_error("r2_score: targets have zero variance");
  return 1.0 - ss_res / ss_tot;
}

void RmspropConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(decay > 0.0 && decay < 1.0)) throw std::invalid_argument("decay must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

Rmsprop::Rmsprop(RmspropConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void Rmsprop::step(const std::vector<std::span<double>>& params,
                   const std::vector<std::span<double>>& grads) {
  if (params.size() != grads.size()) throw ShapeError("rmsprop: parameter/gradient count mismatch");
  if (layout_.empty()) {
    std::size_t total = 0;
    for (const auto& p : params) {
      layout_.push_back(p.size());
      total += p.size();
    }
    square_avg_.assign(total, 0.0);
  }
  if (layout_.size() != params.size()) throw ShapeError("rmsprop: tensor count changed");
  std::size_t offset = 0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (params[t].size() != layout_[t] || grads[t].size() != layout_[t]) {
      throw ShapeError("rmsprop: tensor " + std::to_string(t) + " has the wrong size");
    }
    for (std::size_t k = 0; k < layout_[t]; ++k) {
      const double g = grads[t][k];
      double& s = square_avg_[offset + k];
      s = cfg_.decay * s + (1.0 - cfg_.decay) * g * g;
      params[t][k] -= cfg_.learning_rate * g / (std::sqrt(s) + cfg_.epsilon);
    }
    offset += layout_[t];
  }
}

std::size_t RunRecord::best_epoch() const { return best().epoch; }

const EpochMetrics& RunRecord::best() const {
  if (epochs.empty()) throw std::logic_error("run has no epochs");
  const EpochMetrics* best = &epochs.front();
  for (const auto& e : epochs) {
    if (e.val_rmse < best->val_rmse) best = &e;
  }
  return *best;
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  optimizer.validate();
}

Evaluation evaluate(models::Model& model, const data::Dataset& ds, Prng& prng) {
  if (ds.empty()) throw std::invalid_argument("evaluate: empty dataset");
  Evaluation ev;
  Vector targets;
  for (const auto& s : ds.samples) {
    const Vector p = model.predict(s.window, prng);
    ev.predictions.insert(ev.predictions.end(), p.begin(), p.end());
    targets.insert(targets.end(), s.target.begin(), s.target.end());
  }
  ev.rmse = rmse(ev.predictions, targets);
  try {
    ev.r2 = r2_score(ev.predictions, targets);
  } catch (const std::domain_error&) {
    ev.r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return ev;
}

RunRecord train_model(models::Model& model, const data::Dataset& train, const data::Dataset& val,
                      const TrainConfig& cfg, Prng& prng,
                      const std::function<void(const EpochMetrics&)>& on_epoch) {
  cfg.validate();
  if (train.empty() || val.empty()) throw std::invalid_argument("train_model: empty dataset");
  using Clock = std::chrono::steady_clock;

  RunRecord record;
  record.seed = prng.seed();
  record.eval_mode = model.spec().eval_mode();
  Rmsprop opt(cfg.optimizer);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const auto run_start = Clock::now();
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto epoch_start = Clock::now();
    if (cfg.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(prng.uniform() * static_cast<double>(i));
        std::swap(order[i - 1], order[j]);
      }
    }
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      const double weight = 1.0 / static_cast<double>(end - begin);
      model.zero_grad();
      for (std::size_t k = begin; k < end; ++k) {
        const auto& s = train.samples[order[k]];
        model.accumulate_gradient(s.window, s.target, weight, prng);
      }
      opt.step(model.parameters(), model.gradients());
    }
    const Evaluation tr = evaluate(model, train, prng);
    const Evaluation va = evaluate(model, val, prng);
    EpochMetrics m{epoch, tr.rmse, tr.r2, va.rmse, va.r2,
                   std::chrono::duration<double>(Clock::now() - epoch_start).count()};
    record.epochs.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  record.wall_seconds = std::chrono::duration<double>(Clock::now() - run_start).count();
  return record;
}

}  // namespace qsl::train
