// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/qlstm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsl::qlstm {

void QlstmDims::validate() const {
  if (lstm.input == 0 || lstm.hidden == 0 || lstm.output == 0) {
    throw std::invalid_argument("QLSTM dimensions must be >= 1");
  }
  if (n_qubits < 2) throw std::invalid_argument("QLSTM needs at least 2 qubits");
  if (depth < 1) throw std::invalid_argument("VQC depth must be >= 1");
  if (!project_input && n_qubits != lstm.concat()) {
    throw std::invalid_argument("disabling the input projection requires n_qubits == hidden + input");
  }
  if (!project_output && n_qubits != lstm.hidden) {
    throw std::invalid_argument("disabling the output projection requires n_qubits == hidden");
  }
}

QlstmParams QlstmParams::zeros(const QlstmDims& dims) {
  dims.validate();
  QlstmParams p;
  p.dims = dims;
  const std::size_t hidden = dims.lstm.hidden;
  p.P_in = dims.project_input ? Matrix(dims.n_qubits, dims.lstm.concat())
                              : Matrix::identity(dims.n_qubits);
  p.b_in.assign(dims.n_qubits, 0.0);
  for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
    p.theta[g] = VqcParams::zeros(dims.n_qubits, dims.depth);
    p.P_out[g] = dims.project_output ? Matrix(hidden, dims.n_qubits) : Matrix::identity(hidden);
    p.b_out[g].assign(hidden, 0.0);
  }
  p.W_y = Matrix(dims.lstm.output, hidden);
  p.b_y.assign(dims.lstm.output, 0.0);
  return p;
}

std::vector<std::span<double>> QlstmParams::tensors() {
  std::vector<std::span<double>> out;
  if (dims.project_input) {
    out.emplace_back(P_in.data());
    out.emplace_back(b_in);
  }
  for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
    out.emplace_back(theta[g].angles);
    if (dims.project_output) {
      out.emplace_back(P_out[g].data());
      out.emplace_back(b_out[g]);
    }
  }
  out.emplace_back(W_y.data());
  out.emplace_back(b_y);
  return out;
}

void QlstmParams::check_shapes() const {
  const std::size_t hidden = dims.lstm.hidden;
  if (P_in.rows() != dims.n_qubits || P_in.cols() != dims.lstm.concat() ||
      b_in.size() != dims.n_qubits) {
    throw ShapeError("QLSTM input projection has inconsistent shape");
  }
  for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
    theta[g].validate();
    if (theta[g].n_qubits != dims.n_qubits || theta[g].depth != dims.depth) {
      throw ShapeError("QLSTM VQC parameters do not match the configured circuit");
    }
    if (P_out[g].rows() != hidden || P_out[g].cols() != dims.n_qubits || b_out[g].size() != hidden) {
      throw ShapeError("QLSTM output projection has inconsistent shape");
    }
  }
  if (W_y.rows() != dims.lstm.output || W_y.cols() != hidden || b_y.size() != dims.lstm.output) {
    throw ShapeError("QLSTM output head has inconsistent shape");
  }
}

namespace {

void fill_uniform(std::span<double> values, double bound, Prng& prng) {
  for (double& v : values) v = (2.0 * prng.uniform() - 1.0) * bound;
}

}  // namespace

QlstmParams init_qlstm_params(const QlstmDims& dims, Prng& prng) {
  QlstmParams p = QlstmParams::zeros(dims);
  if (dims.project_input) {
    fill_uniform(p.P_in.data(), 1.0 / std::sqrt(static_cast<double>(dims.lstm.concat())), prng);
  }
  for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
    fill_uniform(p.theta[g].angles, std::numbers::pi, prng);
    if (dims.project_output) {
      fill_uniform(p.P_out[g].data(), 1.0 / std::sqrt(static_cast<double>(dims.n_qubits)), prng);
    }
  }
  fill_uniform(p.W_y.data(), 1.0 / std::sqrt(static_cast<double>(dims.lstm.hidden)), prng);
  return p;
}

std::pair<CellState, QuantumStep> qlstm_cell_forward(const QlstmParams& p, std::span<const double> x,
                                                     const CellState& prev,
                                                     const ExpectationMode& mode, Prng& prng) {
  math::check_size(x, p.dims.lstm.input, "QLSTM input");
  math::check_size(prev.h, p.dims.lstm.hidden, "QLSTM hidden state");
  math::check_size(prev.c, p.dims.lstm.hidden, "QLSTM cell state");
  QuantumStep step;
  Vector v = lstm::concat_hidden_input(prev.h, x);
  step.z = math::mat_vec_mac(p.P_in, v, p.b_in);
  PerGate<Vector> pre;
  for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
    step.e[g] = qsim::vqc_forward(step.z, p.theta[g], mode, prng);
    pre[g] = math::mat_vec_mac(p.P_out[g], step.e[g], p.b_out[g]);
  }
  step.record = lstm::combine_gates(std::move(v), std::move(pre), prev);
  CellState next{step.record.h, step.record.c};
  return {std::move(next), std::move(step)};
}

QuantumResult qlstm_sequence_forward(const QlstmParams& p, lstm::Window window,
                                     const ExpectationMode& mode, Prng& prng) {
  if (window.empty()) throw std::invalid_argument("qlstm_sequence_forward: empty window");
  QuantumResult r;
  r.cache.dims = p.dims;
  r.cache.mode = mode;
  r.cache.steps.reserve(window.size());
  CellState state = CellState::zeros(p.dims.lstm.hidden);
  for (const auto& x : window) {
    auto [next, step] = qlstm_cell_forward(p, x, state, mode, prng);
    state = std::move(next);
    r.cache.steps.push_back(std::move(step));
  }
  r.prediction = lstm::head_forward(p.W_y, p.b_y, state.h);
  return r;
}

QlstmParams qlstm_sequence_backward(const QlstmParams& p, const QuantumCache& cache,
                                    std::span<const double> d_prediction, Prng& prng) {
  if (!(cache.dims == p.dims) || cache.steps.empty()) {
    throw ShapeError("qlstm_sequence_backward: cache does not match parameters");
  }
  for (const auto& s : cache.steps) {
    if (s.record.v.size() != p.dims.lstm.concat() || s.z.size() != p.dims.n_qubits) {
      throw ShapeError("qlstm_sequence_backward: cache step has wrong dimensions");
    }
  }
  math::check_size(d_prediction, p.dims.lstm.output, "d_prediction");

  std::vector<StepRecord> records;
  records.reserve(cache.steps.size());
  for (const auto& s : cache.steps) records.push_back(s.record);

  QlstmParams grad = QlstmParams::zeros(p.dims);
  const std::size_t hidden = p.dims.lstm.hidden;
  Vector dh = lstm::head_backward(p.W_y, records.back().h, d_prediction, grad.W_y, grad.b_y);
  lstm::backprop_through_time(
      records, hidden, std::move(dh), [&](std::size_t t, const PerGate<Vector>& d_pre) {
        const QuantumStep& s = cache.steps[t];
        Vector dz(p.dims.n_qubits, 0.0);
        for (std::size_t g = 0; g < lstm::kGateCount; ++g) {
          math::outer_accumulate(grad.P_out[g], d_pre[g], s.e[g]);
          for (std::size_t k = 0; k < hidden; ++k) grad.b_out[g][k] += d_pre[g][k];
          Vector de(p.dims.n_qubits, 0.0);
          math::mat_t_vec_accumulate(p.P_out[g], d_pre[g], de);
          const qsim::VqcGradient vg = qsim::parameter_shift_grad(s.z, p.theta[g], cache.mode, de, prng);
          for (std::size_t k = 0; k < vg.d_angles.size(); ++k) grad.theta[g].angles[k] += vg.d_angles[k];
          for (std::size_t k = 0; k < dz.size(); ++k) dz[k] += vg.d_input[k];
        }
        math::outer_accumulate(grad.P_in, dz, s.record.v);
        for (std::size_t k = 0; k < dz.size(); ++k) grad.b_in[k] += dz[k];
        Vector dv(p.dims.lstm.concat(), 0.0);
        math::mat_t_vec_accumulate(p.P_in, dz, dv);
        return dv;
      });
  return grad;
}

}  // namespace qsl::qlstm
