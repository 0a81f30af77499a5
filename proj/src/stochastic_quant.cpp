// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/stochastic_quant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsl::quant {

void QuantConfig::validate() const {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (clamp_lo >= clamp_hi) throw std::invalid_argument("clamp_lo must be < clamp_hi");
}

double stochastic_round(double w, Prng& prng) {
  if (!std::isfinite(w)) throw std::domain_error("stochastic_round: non-finite input");
  const double fl = std::floor(w);
  const double frac = w - fl;
  if (frac == 0.0) return w;
  return prng.uniform() <= frac ? fl + 1.0 : fl;
}

double clamp(double q, const QuantConfig& cfg) {
  return std::clamp(q, static_cast<double>(cfg.clamp_lo), static_cast<double>(cfg.clamp_hi));
}

Vector nshot_quantize(std::span<const double> u, const QuantConfig& cfg, Prng& prng) {
  cfg.validate();
  Vector out(u.size());
  const double inv = 1.0 / static_cast<double>(cfg.shots);
  for (std::size_t k = 0; k < u.size(); ++k) {
    double acc = 0.0;
    for (std::size_t s = 0; s < cfg.shots; ++s) acc += clamp(stochastic_round(u[k], prng), cfg);
    out[k] = cfg.shots == 1 ? acc : acc * inv;
  }
  return out;
}

double ste_mask(double raw, const QuantConfig& cfg) {
  return (raw >= static_cast<double>(cfg.clamp_lo) && raw <= static_cast<double>(cfg.clamp_hi))
             ? 1.0
             : 0.0;
}

std::pair<CellState, StochasticStep> slstm_cell_forward(const LstmParams& p, const QuantConfig& cfg,
                                                        std::span<const double> x,
                                                        const CellState& prev, Prng& prng) {
  math::check_size(x, p.dims.input, "SLSTM input");
  math::check_size(prev.h, p.dims.hidden, "SLSTM hidden state");
  math::check_size(prev.c, p.dims.hidden, "SLSTM cell state");
  StochasticStep step;
  Vector v = lstm::concat_hidden_input(prev.h, x);
  PerGate<Vector> quantized;
  for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
    step.raw[g] = math::mat_vec_mac(p.W[g], v, p.b[g]);
    quantized[g] = nshot_quantize(step.raw[g], cfg, prng);
  }
  step.record = lstm::combine_gates(std::move(v), std::move(quantized), prev);
  CellState next{step.record.h, step.record.c};
  return {std::move(next), std::move(step)};
}

StochasticResult slstm_sequence_forward(const LstmParams& p, const QuantConfig& cfg,
                                        lstm::Window window, Prng& prng) {
  if (window.empty()) throw std::invalid_argument("slstm_sequence_forward: empty window");
  cfg.validate();
  StochasticResult r;
  r.cache.dims = p.dims;
  r.cache.cfg = cfg;
  r.cache.steps.reserve(window.size());
  CellState state = CellState::zeros(p.dims.hidden);
  for (const auto& x : window) {
    auto [next, step] = slstm_cell_forward(p, cfg, x, state, prng);
    state = std::move(next);
    r.cache.steps.push_back(std::move(step));
  }
  r.prediction = lstm::head_forward(p.W_y, p.b_y, state.h);
  return r;
}

LstmParams slstm_sequence_backward(const LstmParams& p, const StochasticCache& cache,
                                   std::span<const double> d_prediction) {
  if (!(cache.dims == p.dims) || cache.steps.empty()) {
    throw ShapeError("slstm_sequence_backward: cache does not match parameters");
  }
  for (const auto& s : cache.steps) {
    if (s.record.v.size() != p.dims.concat() || s.raw[0].size() != p.dims.hidden) {
      throw ShapeError("slstm_sequence_backward: cache step has wrong dimensions");
    }
  }
  math::check_size(d_prediction, p.dims.output, "d_prediction");

  std::vector<StepRecord> records;
  records.reserve(cache.steps.size());
  for (const auto& s : cache.steps) records.push_back(s.record);

  LstmParams grad = LstmParams::zeros(p.dims);
  Vector dh = lstm::head_backward(p.W_y, records.back().h, d_prediction, grad.W_y, grad.b_y);
  lstm::backprop_through_time(
      records, p.dims.hidden, std::move(dh), [&](std::size_t t, const PerGate<Vector>& d_quant) {
        const StochasticStep& s = cache.steps[t];
        Vector dv(p.dims.concat(), 0.0);
        for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
          Vector du(p.dims.hidden);
          for (std::size_t k = 0; k < du.size(); ++k) du[k] = d_quant[g][k] * ste_mask(s.raw[g][k], cache.cfg);
          math::outer_accumulate(grad.W[g], du, s.record.v);
          for (std::size_t k = 0; k < du.size(); ++k) grad.b[g][k] += du[k];
          math::mat_t_vec_accumulate(p.W[g], du, dv);
        }
        return dv;
      });
  return grad;
}

}  // namespace qsl::quant
