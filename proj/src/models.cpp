// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/models.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsl::models {

std::string ModelSpec::kind_name() const {
  switch (kind) {
    case ModelKind::Classic: return "classic";
    case ModelKind::QlstmAnalytic: return "qlstm-analytic";
    case ModelKind::QlstmShots: return "qlstm-shots";
    case ModelKind::SlstmShots: return "slstm-shots";
  }
  return "unknown";
}

std::string ModelSpec::label() const {
  if (kind == ModelKind::QlstmShots || kind == ModelKind::SlstmShots) {
    return kind_name() + "-" + std::to_string(shots);
  }
  return kind_name();
}

std::string ModelSpec::eval_mode() const {
  switch (kind) {
    case ModelKind::Classic: return "deterministic";
    case ModelKind::QlstmAnalytic: return "analytic";
    default: return "shots:" + std::to_string(shots);
  }
}

ModelKind ModelSpec::parse_kind(std::string_view name) {
  if (name == "classic") return ModelKind::Classic;
  if (name == "qlstm-analytic") return ModelKind::QlstmAnalytic;
  if (name == "qlstm-shots") return ModelKind::QlstmShots;
  if (name == "slstm-shots") return ModelKind::SlstmShots;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

void Model::zero_grad() {
  for (auto g : gradients()) std::fill(g.begin(), g.end(), 0.0);
}

namespace {

Vector scaled_mse_grad(std::span<const double> pred, std::span<const double> target, double weight) {
  math::check_size(target, pred.size(), "target");
  Vector d(pred.size());
  const double scale = 2.0 * weight / static_cast<double>(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) d[k] = scale * (pred[k] - target[k]);
  return d;
}

void add_into(std::vector<std::span<double>> dst, std::vector<std::span<double>> src) {
  for (std::size_t t = 0; t < dst.size(); ++t) {
    for (std::size_t k = 0; k < dst[t].size(); ++k) dst[t][k] += src[t][k];
  }
}

class ClassicModel final : public Model {
 public:
  ClassicModel(const ModelSpec& spec, const ModelConfig& cfg, Prng& init)
      : Model(spec), params_(lstm::init_params(cfg.dims, init)), grads_(lstm::LstmParams::zeros(cfg.dims)) {}

  Vector predict(lstm::Window window, Prng&) override {
    return lstm::sequence_forward(params_, window).prediction;
  }

  Vector accumulate_gradient(lstm::Window window, std::span<const double> target, double weight,
                             Prng&) override {
    auto fwd = lstm::sequence_forward(params_, window);
    const Vector d = scaled_mse_grad(fwd.prediction, target, weight);
    lstm::LstmParams g = lstm::sequence_backward(params_, fwd.cache, d);
    add_into(grads_.tensors(), g.tensors());
    return fwd.prediction;
  }

  std::vector<std::span<double>> parameters() override { return params_.tensors(); }
  std::vector<std::span<double>> gradients() override { return grads_.tensors(); }

 private:
  lstm::LstmParams params_;
  lstm::LstmParams grads_;
};

class StochasticModel final : public Model {
 public:
  StochasticModel(const ModelSpec& spec, const ModelConfig& cfg, Prng& init)
      : Model(spec),
        params_(lstm::init_params(cfg.dims, init)),
        grads_(lstm::LstmParams::zeros(cfg.dims)),
        quant_{spec.shots, cfg.clamp_lo, cfg.clamp_hi} {
    quant_.validate();
  }

  Vector predict(lstm::Window window, Prng& prng) override {
    return quant::slstm_sequence_forward(params_, quant_, window, prng).prediction;
  }

  Vector accumulate_gradient(lstm::Window window, std::span<const double> target, double weight,
                             Prng& prng) override {
    auto fwd = quant::slstm_sequence_forward(params_, quant_, window, prng);
    const Vector d = scaled_mse_grad(fwd.prediction, target, weight);
    lstm::LstmParams g = quant::slstm_sequence_backward(params_, fwd.cache, d);
    add_into(grads_.tensors(), g.tensors());
    return fwd.prediction;
  }

  std::vector<std::span<double>> parameters() override { return params_.tensors(); }
  std::vector<std::span<double>> gradients() override { return grads_.tensors(); }

 private:
  lstm::LstmParams params_;
  lstm::LstmParams grads_;
  quant::QuantConfig quant_;
};

class QuantumModel final : public Model {
 public:
  QuantumModel(const ModelSpec& spec, const ModelConfig& cfg, Prng& init)
      : Model(spec),
        params_(qlstm::init_qlstm_params(dims_of(cfg), init)),
        grads_(qlstm::QlstmParams::zeros(dims_of(cfg))),
        mode_(spec.kind == ModelKind::QlstmAnalytic ? qsim::ExpectationMode::analytic()
                                                    : qsim::ExpectationMode::with_shots(spec.shots)) {}

  Vector predict(lstm::Window window, Prng& prng) override {
    return qlstm::qlstm_sequence_forward(params_, window, mode_, prng).prediction;
  }

  Vector accumulate_gradient(lstm::Window window, std::span<const double> target, double weight,
                             Prng& prng) override {
    auto fwd = qlstm::qlstm_sequence_forward(params_, window, mode_, prng);
    const Vector d = scaled_mse_grad(fwd.prediction, target, weight);
    qlstm::QlstmParams g = qlstm::qlstm_sequence_backward(params_, fwd.cache, d, prng);
    add_into(grads_.tensors(), g.tensors());
    return fwd.prediction;
  }

  std::vector<std::span<double>> parameters() override { return params_.tensors(); }
  std::vector<std::span<double>> gradients() override { return grads_.tensors(); }

 private:
  static qlstm::QlstmDims dims_of(const ModelConfig& cfg) {
    qlstm::QlstmDims d;
    d.lstm = cfg.dims;
    d.n_qubits = cfg.n_qubits;
    d.depth = cfg.depth;
    d.project_input = cfg.project_input;
    d.project_output = cfg.project_output;
    d.validate();
    return d;
  }

  qlstm::QlstmParams params_;
  qlstm::QlstmParams grads_;
  qsim::ExpectationMode mode_;
};

}  // namespace

std::unique_ptr<Model> make_model(const ModelSpec& spec, const ModelConfig& cfg, Prng& init) {
  switch (spec.kind) {
    case ModelKind::Classic: return std::make_unique<ClassicModel>(spec, cfg, init);
    case ModelKind::SlstmShots:
      if (spec.shots < 1) throw std::invalid_argument("shots must be >= 1");
      return std::make_unique<StochasticModel>(spec, cfg, init);
    case ModelKind::QlstmAnalytic:
    case ModelKind::QlstmShots:
      if (spec.kind == ModelKind::QlstmShots && spec.shots < 1) {
        throw std::invalid_argument("shots must be >= 1");
      }
      return std::make_unique<QuantumModel>(spec, cfg, init);
  }
  throw std::logic_error("unhandled model kind");
}

}  // namespace qsl::models
