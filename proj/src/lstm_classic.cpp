// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/lstm_classic.hpp"

#include <cmath>
#include <string>

namespace qsl::lstm {

LstmParams LstmParams::zeros(const Dims& dims) {
  if (dims.input == 0 || dims.hidden == 0 || dims.output == 0) {
    throw std::invalid_argument("LSTM dimensions must be >= 1");
  }
  LstmParams p;
  p.dims = dims;
  for (std::size_t g = 0; g < kGateCount; ++g) {
    p.W[g] = Matrix(dims.hidden, dims.concat());
    p.b[g] = Vector(dims.hidden, 0.0);
  }
  p.W_y = Matrix(dims.output, dims.hidden);
  p.b_y = Vector(dims.output, 0.0);
  return p;
}

std::vector<std::span<double>> LstmParams::tensors() {
  std::vector<std::span<double>> out;
  for (std::size_t g = 0; g < kGateCount; ++g) {
    out.emplace_back(W[g].data());
    out.emplace_back(b[g]);
  }
  out.emplace_back(W_y.data());
  out.emplace_back(b_y);
  return out;
}

void LstmParams::check_shapes() const {
  for (std::size_t g = 0; g < kGateCount; ++g) {
    if (W[g].rows() != dims.hidden || W[g].cols() != dims.concat() || b[g].size() != dims.hidden) {
      throw ShapeError("LSTM gate " + std::to_string(g) + " has inconsistent shape");
    }
  }
  if (W_y.rows() != dims.output || W_y.cols() != dims.hidden || b_y.size() != dims.output) {
    throw ShapeError("LSTM output head has inconsistent shape");
  }
}

namespace {

void fill_uniform(std::span<double> values, double bound, Prng& prng) {
  for (double& v : values) v = (2.0 * prng.uniform() - 1.0) * bound;
}

}  // namespace

LstmParams init_params(const Dims& dims, Prng& prng) {
  LstmParams p = LstmParams::zeros(dims);
  const double gate_bound = 1.0 / std::sqrt(static_cast<double>(dims.concat()));
  for (auto& w : p.W) fill_uniform(w.data(), gate_bound, prng);
  fill_uniform(p.W_y.data(), 1.0 / std::sqrt(static_cast<double>(dims.hidden)), prng);
  return p;
}

Vector concat_hidden_input(std::span<const double> h, std::span<const double> x) {
  Vector v;
  v.reserve(h.size() + x.size());
  v.insert(v.end(), h.begin(), h.end());
  v.insert(v.end(), x.begin(), x.end());
  return v;
}

StepRecord combine_gates(Vector v, PerGate<Vector> pre, const CellState& prev) {
  const std::size_t hidden = prev.c.size();
  for (const auto& u : pre) math::check_size(u, hidden, "gate pre-activation");
  math::check_size(prev.h, hidden, "previous hidden state");

  StepRecord s;
  s.v = std::move(v);
  s.pre = std::move(pre);
  for (auto& a : s.act) a.resize(hidden);
  s.c_prev = prev.c;
  s.c.resize(hidden);
  s.tanh_c.resize(hidden);
  s.h.resize(hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    const double f = math::sigmoid(s.pre[kForget][k]);
    const double i = math::sigmoid(s.pre[kInput][k]);
    const double g = std::tanh(s.pre[kCandidate][k]);
    const double o = math::sigmoid(s.pre[kOutput][k]);
    s.act[kForget][k] = f;
    s.act[kInput][k] = i;
    s.act[kCandidate][k] = g;
    s.act[kOutput][k] = o;
    s.c[k] = f * prev.c[k] + i * g;
    s.tanh_c[k] = std::tanh(s.c[k]);
    s.h[k] = o * s.tanh_c[k];
  }
  return s;
}

GateGrads backprop_gates(const StepRecord& s, std::span<const double> dh,
                         std::span<const double> dc) {
  const std::size_t hidden = s.h.size();
  math::check_size(dh, hidden, "dh");
  math::check_size(dc, hidden, "dc");
  GateGrads out;
  for (auto& d : out.d_pre) d.resize(hidden);
  out.dc_prev.resize(hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    const double f = s.act[kForget][k];
    const double i = s.act[kInput][k];
    const double g = s.act[kCandidate][k];
    const double o = s.act[kOutput][k];
    const double tc = s.tanh_c[k];
    const double dc_total = dc[k] + dh[k] * o * (1.0 - tc * tc);
    out.d_pre[kForget][k] = dc_total * s.c_prev[k] * f * (1.0 - f);
    out.d_pre[kInput][k] = dc_total * g * i * (1.0 - i);
    out.d_pre[kCandidate][k] = dc_total * i * (1.0 - g * g);
    out.d_pre[kOutput][k] = dh[k] * tc * o * (1.0 - o);
    out.dc_prev[k] = dc_total * f;
  }
  return out;
}

void backprop_through_time(std::span<const StepRecord> steps, std::size_t hidden, Vector dh_last,
                           const StepBackward& step_backward) {
  Vector dh = std::move(dh_last);
  Vector dc(hidden, 0.0);
  for (std::size_t t = steps.size(); t-- > 0;) {
    GateGrads gg = backprop_gates(steps[t], dh, dc);
    const Vector dv = step_backward(t, gg.d_pre);
    if (dv.size() < hidden) throw ShapeError("step backward returned a short dv");
    dh.assign(dv.begin(), dv.begin() + static_cast<std::ptrdiff_t>(hidden));
    dc = std::move(gg.dc_prev);
  }
}

Vector head_forward(const Matrix& W_y, std::span<const double> b_y, std::span<const double> h) {
  return math::mat_vec_mac(W_y, h, b_y);
}

Vector head_backward(const Matrix& W_y, std::span<const double> h, std::span<const double> d_pred,
                     Matrix& dW_y, Vector& db_y) {
  math::outer_accumulate(dW_y, d_pred, h);
  math::check_size(db_y, d_pred.size(), "head bias gradient");
  for (std::size_t k = 0; k < d_pred.size(); ++k) db_y[k] += d_pred[k];
  Vector dh(W_y.cols(), 0.0);
  math::mat_t_vec_accumulate(W_y, d_pred, dh);
  return dh;
}

std::pair<CellState, StepRecord> lstm_cell_forward(const LstmParams& p, std::span<const double> x,
                                                   const CellState& prev) {
  math::check_size(x, p.dims.input, "LSTM input");
  math::check_size(prev.h, p.dims.hidden, "LSTM hidden state");
  math::check_size(prev.c, p.dims.hidden, "LSTM cell state");
  Vector v = concat_hidden_input(prev.h, x);
  PerGate<Vector> pre;
  for (std::size_t g = 0; g < kGateCount; ++g) pre[g] = math::mat_vec_mac(p.W[g], v, p.b[g]);
  StepRecord s = combine_gates(std::move(v), std::move(pre), prev);
  CellState next{s.h, s.c};
  return {std::move(next), std::move(s)};
}

SequenceResult sequence_forward(const LstmParams& p, Window window) {
  if (window.empty()) throw std::invalid_argument("sequence_forward: empty window");
  SequenceResult r;
  r.cache.dims = p.dims;
  r.cache.steps.reserve(window.size());
  CellState state = CellState::zeros(p.dims.hidden);
  for (const auto& x : window) {
    auto [next, step] = lstm_cell_forward(p, x, state);
    state = std::move(next);
    r.cache.steps.push_back(std::move(step));
  }
  r.prediction = head_forward(p.W_y, p.b_y, state.h);
  return r;
}

LstmParams sequence_backward(const LstmParams& p, const SequenceCache& cache,
                             std::span<const double> d_prediction) {
  if (!(cache.dims == p.dims) || cache.steps.empty()) {
    throw ShapeError("sequence_backward: cache does not match parameters");
  }
  for (const auto& s : cache.steps) {
    if (s.v.size() != p.dims.concat() || s.h.size() != p.dims.hidden) {
      throw ShapeError("sequence_backward: cache step has wrong dimensions");
    }
  }
  math::check_size(d_prediction, p.dims.output, "d_prediction");

  LstmParams grad = LstmParams::zeros(p.dims);
  Vector dh = head_backward(p.W_y, cache.steps.back().h, d_prediction, grad.W_y, grad.b_y);
  backprop_through_time(cache.steps, p.dims.hidden, std::move(dh),
                        [&](std::size_t t, const PerGate<Vector>& d_pre) {
                          const StepRecord& s = cache.steps[t];
                          Vector dv(p.dims.concat(), 0.0);
                          for (std::size_t g = 0; g < kGateCount; ++g) {
                            math::outer_accumulate(grad.W[g], d_pre[g], s.v);
                            for (std::size_t k = 0; k < p.dims.hidden; ++k) grad.b[g][k] += d_pre[g][k];
                            math::mat_t_vec_accumulate(p.W[g], d_pre[g], dv);
                          }
                          return dv;
                        });
  return grad;
}

}  // namespace qsl::lstm
