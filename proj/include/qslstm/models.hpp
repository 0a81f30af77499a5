// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qslstm/lstm_classic.hpp"
#include "qslstm/qlstm.hpp"
#include "qslstm/stochastic_quant.hpp"

namespace qsl::models {

using math::Prng;
using math::Vector;

enum class ModelKind { Classic, QlstmAnalytic, QlstmShots, SlstmShots };

struct ModelSpec {
  ModelKind kind = ModelKind::Classic;
  std::size_t shots = 1;  // ignored by the deterministic kinds

  /// classic | qlstm-analytic | qlstm-shots | slstm-shots
  std::string kind_name() const;
  /// kind_name, suffixed with "-<shots>" for the shot-based kinds.
  std::string label() const;
  /// "deterministic", "analytic", or "shots:<k>"
  std::string eval_mode() const;

  static ModelKind parse_kind(std::string_view name);
};

struct ModelConfig {
  lstm::Dims dims;
  std::size_t n_qubits = 4;
  std::size_t depth = 1;
  bool project_input = true;
  bool project_output = true;
  long clamp_lo = -128;
  long clamp_hi = 127;
};

/// A trainable sequence-to-one regressor with its own gradient buffer.
class Model {
 public:
  virtual ~Model() = default;

  virtual Vector predict(lstm::Window window, Prng& prng) = 0;

  /// Forward and backward pass of weight·MSE(prediction, target); gradients are
  /// added to the buffer. Returns the prediction.
  virtual Vector accumulate_gradient(lstm::Window window, std::span<const double> target,
                                     double weight, Prng& prng) = 0;

  virtual std::vector<std::span<double>> parameters() = 0;
  virtual std::vector<std::span<double>> gradients() = 0;
  void zero_grad();

  const ModelSpec& spec() const { return spec_; }

 protected:
  explicit Model(ModelSpec spec) : spec_(spec) {}

 private:
  ModelSpec spec_;
};

/// Builds and initializes a model; all initialization draws come from `init`.
std::unique_ptr<Model> make_model(const ModelSpec& spec, const ModelConfig& cfg, Prng& init);

}  // namespace qsl::models
