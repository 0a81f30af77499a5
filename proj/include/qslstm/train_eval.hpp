// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qslstm/core_math.hpp"
#include "qslstm/datasets.hpp"
#include "qslstm/models.hpp"

namespace qsl::train {

using math::Prng;
using math::Vector;

struct MseResult {
  double loss = 0.0;
  Vector d_pred;
};

/// mean((pred − target)²) and its gradient 2(pred − target)/n.
MseResult mse_and_grad(std::span<const double> pred, std::span<const double> target);

double rmse(std::span<const double> preds, std::span<const double> targets);

/// 1 − SS_res/SS_tot. Throws std::domain_error when the targets are constant.
double r2_score(std::span<const double> preds, std::span<const double> targets);

struct RmspropConfig {
  double learning_rate = 0.01;
  double decay = 0.99;
  double epsilon = 1e-8;

  void validate() const;
};

/// s ← ρs + (1−ρ)g²; θ ← θ − η·g/(√s + ε), over a fixed list of tensors.
/// The tensor layout is captured on the first step and enforced afterwards.
class Rmsprop {
 public:
  explicit Rmsprop(RmspropConfig cfg);

  void step(const std::vector<std::span<double>>& params,
            const std::vector<std::span<double>>& grads);

  std::span<const double> accumulators() const { return square_avg_; }
  const RmspropConfig& config() const { return cfg_; }

 private:
  RmspropConfig cfg_;
  std::vector<std::size_t> layout_;
  std::vector<double> square_avg_;
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_rmse = 0.0;
  double train_r2 = 0.0;
  double val_rmse = 0.0;
  double val_r2 = 0.0;
  double seconds = 0.0;
};

struct RunRecord {
  std::vector<EpochMetrics> epochs;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string eval_mode;

  /// Epoch (1-based) with the lowest validation RMSE; first one wins ties.
  /// Throws std::logic_error when no epochs were run.
  std::size_t best_epoch() const;
  const EpochMetrics& best() const;
};

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 4;
  RmspropConfig optimizer;
  bool shuffle = false;

  void validate() const;
};

struct Evaluation {
  double rmse = 0.0;
  double r2 = 0.0;  // NaN when the targets have zero variance
  Vector predictions;
};

/// Full forward pass over a dataset in the model's own expectation mode.
Evaluation evaluate(models::Model& model, const data::Dataset& ds, Prng& prng);

/// Chronological mini-batches (mean gradient per batch) with one RMSProp step
/// per batch; after each epoch both splits are re-evaluated from scratch.
RunRecord train_model(models::Model& model, const data::Dataset& train, const data::Dataset& val,
                      const TrainConfig& cfg, Prng& prng,
                      const std::function<void(const EpochMetrics&)>& on_epoch = {});

}  // namespace qsl::train
