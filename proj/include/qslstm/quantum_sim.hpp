// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qslstm/core_math.hpp"

namespace qsl::qsim {

using Complex = std::complex<double>;
using math::Prng;
using math::Vector;

/// 2×2 complex matrix, row-major: [[m00, m01], [m10, m11]].
struct Gate2 {
  Complex m00, m01, m10, m11;
};

Gate2 hadamard();
/// [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]
Gate2 ry(double theta);
/// diag(e^{−iθ/2}, e^{iθ/2})
Gate2 rz(double theta);
/// R(α, β, γ) = Rz(γ)·Ry(β)·Rz(α)
Gate2 rot(double alpha, double beta, double gamma);
Gate2 matmul(const Gate2& a, const Gate2& b);
bool is_unitary(const Gate2& g, double tol = 1e-10);

/// Dense n-qubit state. Qubit 0 is the most significant bit of the basis index.
class Statevector {
 public:
  /// |0…0⟩ on n qubits.
  explicit Statevector(std::size_t n_qubits);
  /// Throws unless the length is a power of two and the norm is 1 within 1e-10.
  static Statevector from_amplitudes(std::vector<Complex> amplitudes);

  std::size_t n_qubits() const { return n_; }
  std::span<const Complex> amplitudes() const { return amp_; }
  /// Σ|αᵢ|²
  double norm_squared() const;

  /// Rejects non-unitary gates and out-of-range qubits.
  void apply_gate(const Gate2& g, std::size_t qubit);
  void apply_cnot(std::size_t control, std::size_t target);

  /// No validation; used by the circuit runner on known-good gates.
  void apply_gate_unchecked(const Gate2& g, std::size_t qubit);
  void apply_cnot_unchecked(std::size_t control, std::size_t target);

 private:
  std::size_t mask(std::size_t qubit) const { return std::size_t{1} << (n_ - 1 - qubit); }

  std::size_t n_;
  std::vector<Complex> amp_;
};

Statevector apply_1q_gate(Statevector s, const Gate2& g, std::size_t qubit);
Statevector apply_cnot(Statevector s, std::size_t control, std::size_t target);

/// Rotation angles of the variational ansatz, laid out [layer][qubit][α, β, γ].
struct VqcParams {
  std::size_t n_qubits = 4;
  std::size_t depth = 1;
  Vector angles;

  static VqcParams zeros(std::size_t n_qubits, std::size_t depth);
  std::size_t angles_per_layer() const { return n_qubits * 3; }
  std::span<const double> layer(std::size_t l) const {
    return std::span<const double>(angles).subspan(l * angles_per_layer(), angles_per_layer());
  }
  void validate() const;
};

/// Exact expectation values or an average over a finite number of shots.
class ExpectationMode {
 public:
  static ExpectationMode analytic() { return ExpectationMode(0); }
  static ExpectationMode with_shots(std::size_t shots);

  bool is_analytic() const { return shots_ == 0; }
  std::size_t shots() const { return shots_; }
  std::string label() const;

  bool operator==(const ExpectationMode&) const = default;

 private:
  explicit ExpectationMode(std::size_t shots) : shots_(shots) {}
  std::size_t shots_;
};

/// Per qubit i: H, Ry(arctan xᵢ), Rz(arctan xᵢ²). Expects a fresh |0…0⟩.
Statevector encode_input(Statevector s, std::span<const double> x);

/// CNOT ring i→i+1, CNOT ring i→i+2 (skipped for two qubits, where it would
/// be a self-loop), then R(αᵢ, βᵢ, γᵢ) on every qubit.
Statevector variational_layer(Statevector s, std::span<const double> layer_angles);

/// ⟨Zᵢ⟩ = Σ_b (±1)|α_b|². Throws if the state is not normalized.
Vector pauli_z_expectations_analytic(const Statevector& s);

/// Born-rule sampling of `shots` basis states; per-qubit mean of ±1 outcomes.
Vector sample_measurement(const Statevector& s, std::size_t shots, Prng& prng);

Vector vqc_forward(std::span<const double> x, const VqcParams& p, const ExpectationMode& mode,
                   Prng& prng);

inline constexpr double kShift = std::numbers::pi / 2.0;

/// (f(θ + π/2) − f(θ − π/2)) / 2, exact for Pauli-rotation generators.
double shift_rule_derivative(const std::function<double(double)>& f, double theta);

struct VqcGradient {
  Vector d_angles;
  Vector d_input;
};

/// Gradient of d_out·vqc_forward(x, p) by the parameter-shift rule, for both
/// the rotation angles and the inputs (through the arctan encodings).
VqcGradient parameter_shift_grad(std::span<const double> x, const VqcParams& p,
                                 const ExpectationMode& mode, std::span<const double> d_out,
                                 Prng& prng);

}  // namespace qsl::qsim
