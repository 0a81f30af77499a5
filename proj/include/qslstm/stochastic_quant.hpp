// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qslstm/lstm_classic.hpp"

namespace qsl::quant {

using lstm::CellState;
using lstm::LstmParams;
using lstm::PerGate;
using lstm::StepRecord;
using math::Prng;
using math::Vector;

/// Integer-grid quantizer settings. The default clamp range is 8-bit signed.
struct QuantConfig {
  std::size_t shots = 1;
  long clamp_lo = -128;
  long clamp_hi = 127;

  void validate() const;
};

/// ⌊w⌋+1 with probability w−⌊w⌋, else ⌊w⌋. Integers are returned unchanged
/// without consuming a draw. Throws std::domain_error for non-finite w.
double stochastic_round(double w, Prng& prng);

double clamp(double q, const QuantConfig& cfg);

/// Mean over cfg.shots draws of clamp(stochastic_round(uᵢ)), elementwise.
Vector nshot_quantize(std::span<const double> u, const QuantConfig& cfg, Prng& prng);

/// Straight-through mask: 1 where the raw MAC output lies inside the clamp range.
double ste_mask(double raw, const QuantConfig& cfg);

struct StochasticStep {
  StepRecord record;     // record.pre holds the quantized values û
  PerGate<Vector> raw;   // unquantized MAC outputs u
};

/// Classic cell with each MAC output u replaced by nshot_quantize(u) before
/// its activation. Cell and hidden state arithmetic stays unquantized.
std::pair<CellState, StochasticStep> slstm_cell_forward(const LstmParams& p, const QuantConfig& cfg,
                                                        std::span<const double> x,
                                                        const CellState& prev, Prng& prng);

struct StochasticCache {
  lstm::Dims dims;
  QuantConfig cfg;
  std::vector<StochasticStep> steps;
};

struct StochasticResult {
  Vector prediction;
  StochasticCache cache;
};

StochasticResult slstm_sequence_forward(const LstmParams& p, const QuantConfig& cfg,
                                        lstm::Window window, Prng& prng);

/// BPTT through the realized forward values, with the quantizer's derivative
/// taken as the straight-through mask.
LstmParams slstm_sequence_backward(const LstmParams& p, const StochasticCache& cache,
                                   std::span<const double> d_prediction);

}  // namespace qsl::quant
