// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qslstm/core_math.hpp"

namespace qsl::lstm {

using math::Matrix;
using math::Prng;
using math::Vector;

/// Gate order used by every parameter and cache array in the project.
enum Gate : std::size_t { kForget = 0, kInput = 1, kCandidate = 2, kOutput = 3 };
inline constexpr std::size_t kGateCount = 4;

template <typename T>
using PerGate = std::array<T, kGateCount>;

/// A window of consecutive input vectors, oldest first.
using Window = std::span<const Vector>;

struct Dims {
  std::size_t input = 1;
  std::size_t hidden = 5;
  std::size_t output = 1;

  std::size_t concat() const { return hidden + input; }
  bool operator==(const Dims&) const = default;
};

/// Gate weights act on v = [h_{t-1}; x_t] (hidden entries first).
struct LstmParams {
  Dims dims;
  PerGate<Matrix> W;
  PerGate<Vector> b;
  Matrix W_y;
  Vector b_y;

  static LstmParams zeros(const Dims& dims);

  /// Views over every trainable tensor in a fixed order (gates, then head).
  std::vector<std::span<double>> tensors();
  void check_shapes() const;
};

/// Weights uniform on ±1/sqrt(fan_in), biases zero.
LstmParams init_params(const Dims& dims, Prng& prng);

struct CellState {
  Vector h;
  Vector c;

  static CellState zeros(std::size_t hidden) { return {Vector(hidden, 0.0), Vector(hidden, 0.0)}; }
};

/// Forward values of one time step. `pre` holds whatever was fed to the gate
/// nonlinearities (the MAC output, its quantized value, or a projected VQC
/// readout depending on the cell variant).
struct StepRecord {
  Vector v;
  PerGate<Vector> pre;
  PerGate<Vector> act;
  Vector c_prev;
  Vector c;
  Vector tanh_c;
  Vector h;
};

Vector concat_hidden_input(std::span<const double> h, std::span<const double> x);

/// σ/tanh on the gate pre-activations, then c_t = f∘c_{t−1} + i∘C̃ and
/// h_t = o∘tanh(c_t). Shared by the classic, stochastic and quantum cells.
StepRecord combine_gates(Vector v, PerGate<Vector> pre, const CellState& prev);

struct GateGrads {
  PerGate<Vector> d_pre;
  Vector dc_prev;
};

/// Reverse of combine_gates given dL/dh_t and dL/dc_t (from the future).
GateGrads backprop_gates(const StepRecord& step, std::span<const double> dh,
                         std::span<const double> dc);

/// Maps the pre-activation gradients of step t onto the variant's parameters
/// and returns dL/dv_t.
using StepBackward = std::function<Vector(std::size_t t, const PerGate<Vector>& d_pre)>;

/// Runs BPTT from the last step to the first, threading dh and dc.
void backprop_through_time(std::span<const StepRecord> steps, std::size_t hidden,
                           Vector dh_last, const StepBackward& step_backward);

/// Affine head: W_y·h + b_y.
Vector head_forward(const Matrix& W_y, std::span<const double> b_y, std::span<const double> h);
/// Accumulates head gradients and returns dL/dh.
Vector head_backward(const Matrix& W_y, std::span<const double> h, std::span<const double> d_pred,
                     Matrix& dW_y, Vector& db_y);

std::pair<CellState, StepRecord> lstm_cell_forward(const LstmParams& p, std::span<const double> x,
                                                   const CellState& prev);

struct SequenceCache {
  Dims dims;
  std::vector<StepRecord> steps;
};

struct SequenceResult {
  Vector prediction;
  SequenceCache cache;
};

/// Unrolls the cell over the window from a zero state and applies the head
/// to the final hidden state.
SequenceResult sequence_forward(const LstmParams& p, Window window);

/// Exact gradients of prediction·d_prediction with respect to every parameter.
LstmParams sequence_backward(const LstmParams& p, const SequenceCache& cache,
                             std::span<const double> d_prediction);

}  // namespace qsl::lstm
