// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qslstm/lstm_classic.hpp"
#include "qslstm/quantum_sim.hpp"

namespace qsl::qlstm {

using lstm::CellState;
using lstm::PerGate;
using lstm::StepRecord;
using math::Matrix;
using math::Prng;
using math::Vector;
using qsim::ExpectationMode;
using qsim::VqcParams;

struct QlstmDims {
  lstm::Dims lstm;
  std::size_t n_qubits = 4;
  std::size_t depth = 1;
  /// Trainable input projection [h; x] → qubits. When disabled the map is the
  /// identity, which requires n_qubits == hidden + input.
  bool project_input = true;
  /// Trainable per-gate output projections qubits → hidden. When disabled the
  /// map is the identity, which requires n_qubits == hidden.
  bool project_output = true;

  void validate() const;
  bool operator==(const QlstmDims&) const = default;
};

/// Four VQCs (one per gate) behind a shared input projection and per-gate
/// output projections, plus the affine output head.
struct QlstmParams {
  QlstmDims dims;
  Matrix P_in;
  Vector b_in;
  PerGate<VqcParams> theta;
  PerGate<Matrix> P_out;
  PerGate<Vector> b_out;
  Matrix W_y;
  Vector b_y;

  static QlstmParams zeros(const QlstmDims& dims);

  /// Trainable tensors only; disabled projections are excluded.
  std::vector<std::span<double>> tensors();
  void check_shapes() const;
};

/// Projections uniform on ±1/sqrt(fan_in), VQC angles uniform on [−π, π],
/// biases zero.
QlstmParams init_qlstm_params(const QlstmDims& dims, Prng& prng);

struct QuantumStep {
  StepRecord record;  // record.pre holds u_g = P_out_g·e_g + b_g
  Vector z;           // projected circuit input
  PerGate<Vector> e;  // per-gate Pauli-Z readouts
};

/// z = P_in·[h; x] + b_in; e_g = VQC(z; θ_g); u_g = P_out_g·e_g + b_g; then
/// the classic gate combination.
std::pair<CellState, QuantumStep> qlstm_cell_forward(const QlstmParams& p, std::span<const double> x,
                                                     const CellState& prev,
                                                     const ExpectationMode& mode, Prng& prng);

struct QuantumCache {
  QlstmDims dims;
  ExpectationMode mode = ExpectationMode::analytic();
  std::vector<QuantumStep> steps;
};

struct QuantumResult {
  Vector prediction;
  QuantumCache cache;
};

QuantumResult qlstm_sequence_forward(const QlstmParams& p, lstm::Window window,
                                     const ExpectationMode& mode, Prng& prng);

/// Hybrid BPTT: exact reverse mode through the classical maps, parameter-shift
/// through every VQC (in the cache's expectation mode, so shot-mode backward
/// passes draw from `prng`).
QlstmParams qlstm_sequence_backward(const QlstmParams& p, const QuantumCache& cache,
                                    std::span<const double> d_prediction, Prng& prng);

}  // namespace qsl::qlstm
