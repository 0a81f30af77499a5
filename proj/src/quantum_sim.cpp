// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsl::qsim {

Gate2 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, r, -r};
}

Gate2 ry(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}

Gate2 rz(double theta) {
  const Complex lo = std::polar(1.0, -theta / 2.0);
  const Complex hi = std::polar(1.0, theta / 2.0);
  return {lo, 0.0, 0.0, hi};
}

Gate2 matmul(const Gate2& a, const Gate2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

Gate2 rot(double alpha, double beta, double gamma) {
  return matmul(rz(gamma), matmul(ry(beta), rz(alpha)));
}

bool is_unitary(const Gate2& g, double tol) {
  // G†G = I
  const Complex a = std::conj(g.m00) * g.m00 + std::conj(g.m10) * g.m10;
  const Complex b = std::conj(g.m00) * g.m01 + std::conj(g.m10) * g.m11;
  const Complex d = std::conj(g.m01) * g.m01 + std::conj(g.m11) * g.m11;
  return std::abs(a - 1.0) <= tol && std::abs(b) <= tol && std::abs(d - 1.0) <= tol;
}

Statevector::Statevector(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits == 0 || n_qubits > 24) throw std::invalid_argument("qubit count must be in [1, 24]");
  amp_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amp_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t len = amplitudes.size();
  if (len < 2 || (len & (len - 1)) != 0) {
    throw ShapeError("statevector length must be a power of two >= 2");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < len) ++n;
  Statevector s(n);
  s.amp_ = std::move(amplitudes);
  if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("statevector is not normalized");
  }
  return s;
}

double Statevector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amp_) acc += std::norm(a);
  return acc;
}

void Statevector::apply_gate(const Gate2& g, std::size_t qubit) {
  if (qubit >= n_) throw std::out_of_range("gate qubit index out of range");
  if (!is_unitary(g)) throw std::invalid_argument("gate is not unitary");
  apply_gate_unchecked(g, qubit);
}

void Statevector::apply_gate_unchecked(const Gate2& g, std::size_t qubit) {
  const std::size_t m = mask(qubit);
  const std::size_t dim = amp_.size();
  for (std::size_t base = 0; base < dim; base += 2 * m) {
    for (std::size_t k = base; k < base + m; ++k) {
      const Complex a0 = amp_[k];
      const Complex a1 = amp_[k + m];
      amp_[k] = g.m00 * a0 + g.m01 * a1;
      amp_[k + m] = g.m10 * a0 + g.m11 * a1;
    }
  }
}

void Statevector::apply_cnot(std::size_t control, std::size_t target) {
  if (control >= n_ || target >= n_) throw std::out_of_range("CNOT qubit index out of range");
  if (control == target) throw std::invalid_argument("CNOT control and target must differ");
  apply_cnot_unchecked(control, target);
}

void Statevector::apply_cnot_unchecked(std::size_t control, std::size_t target) {
  const std::size_t cm = mask(control);
  const std::size_t tm = mask(target);
  for (std::size_t k = 0; k < amp_.size(); ++k) {
    if ((k & cm) != 0 && (k & tm) == 0) std::swap(amp_[k], amp_[k | tm]);
  }
}

Statevector apply_1q_gate(Statevector s, const Gate2& g, std::size_t qubit) {
  s.apply_gate(g, qubit);
  return s;
}

Statevector apply_cnot(Statevector s, std::size_t control, std::size_t target) {
  s.apply_cnot(control, target);
  return s;
}

VqcParams VqcParams::zeros(std::size_t n_qubits, std::size_t depth) {
  VqcParams p;
  p.n_qubits = n_qubits;
  p.depth = depth;
  p.angles.assign(n_qubits * depth * 3, 0.0);
  p.validate();
  return p;
}

void VqcParams::validate() const {
  if (depth < 1) throw std::invalid_argument("VQC depth must be >= 1");
  if (n_qubits < 2) throw std::invalid_argument("VQC needs at least 2 qubits");
  if (angles.size() != depth * angles_per_layer()) {
    throw ShapeError("VQC angle count must equal depth * n_qubits * 3");
  }
}

ExpectationMode ExpectationMode::with_shots(std::size_t shots) {
  if (shots < 1) throw std::invalid_argument("shot count must be >= 1");
  return ExpectationMode(shots);
}

std::string ExpectationMode::label() const {
  return is_analytic() ? std::string("analytic") : "shots:" + std::to_string(shots_);
}

namespace {

void check_fresh(const Statevector& s) {
  const auto amp = s.amplitudes();
  if (amp[0] != Complex{1.0, 0.0} ||
      std::any_of(amp.begin() + 1, amp.end(), [](const Complex& a) { return a != Complex{}; })) {
    throw std::invalid_argument("encode_input expects the |0...0> state");
  }
}

Gate2 encoding_gate(double angle_y, double angle_z) {
  return matmul(rz(angle_z), matmul(ry(angle_y), hadamard()));
}

void apply_rings(Statevector& s) {
  const std::size_t n = s.n_qubits();
  for (std::size_t q = 0; q < n; ++q) s.apply_cnot_unchecked(q, (q + 1) % n);
  if (n >= 3) {
    for (std::size_t q = 0; q < n; ++q) s.apply_cnot_unchecked(q, (q + 2) % n);
  }
}

void apply_rotations(Statevector& s, std::span<const double> layer_angles) {
  for (std::size_t q = 0; q < s.n_qubits(); ++q) {
    s.apply_gate_unchecked(rot(layer_angles[3 * q], layer_angles[3 * q + 1], layer_angles[3 * q + 2]),
                           q);
  }
}

// Everything the circuit depends on, as raw rotation angles.
struct CircuitAngles {
  Vector enc_y;
  Vector enc_z;
  Vector var;
};

CircuitAngles circuit_angles(std::span<const double> x, const VqcParams& p) {
  CircuitAngles a;
  a.enc_y.resize(x.size());
  a.enc_z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    a.enc_y[i] = std::atan(x[i]);
    a.enc_z[i] = std::atan(x[i] * x[i]);
  }
  a.var = p.angles;
  return a;
}

Statevector run_circuit(const CircuitAngles& a, std::size_t depth) {
  const std::size_t n = a.enc_y.size();
  Statevector s(n);
  for (std::size_t q = 0; q < n; ++q) s.apply_gate_unchecked(encoding_gate(a.enc_y[q], a.enc_z[q]), q);
  const std::span<const double> var(a.var);
  for (std::size_t l = 0; l < depth; ++l) {
    apply_rings(s);
    apply_rotations(s, var.subspan(l * 3 * n, 3 * n));
  }
  return s;
}

Vector measure(const Statevector& s, const ExpectationMode& mode, Prng& prng) {
  return mode.is_analytic() ? pauli_z_expectations_analytic(s)
                            : sample_measurement(s, mode.shots(), prng);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

Statevector encode_input(Statevector s, std::span<const double> x) {
  math::check_size(x, s.n_qubits(), "encode_input");
  check_fresh(s);
  for (std::size_t q = 0; q < x.size(); ++q) {
    s.apply_gate_unchecked(encoding_gate(std::atan(x[q]), std::atan(x[q] * x[q])), q);
  }
  return s;
}

Statevector variational_layer(Statevector s, std::span<const double> layer_angles) {
  if (s.n_qubits() < 2) throw std::invalid_argument("variational layer needs at least 2 qubits");
  math::check_size(layer_angles, 3 * s.n_qubits(), "variational layer angles");
  apply_rings(s);
  apply_rotations(s, layer_angles);
  return s;
}

Vector pauli_z_expectations_analytic(const Statevector& s) {
  const std::size_t n = s.n_qubits();
  const auto amp = s.amplitudes();
  Vector z(n, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const double p = std::norm(amp[k]);
    total += p;
    for (std::size_t q = 0; q < n; ++q) {
      const bool one = (k >> (n - 1 - q)) & 1U;
      z[q] += one ? -p : p;
    }
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("state is not normalized");
  return z;
}

Vector sample_measurement(const Statevector& s, std::size_t shots, Prng& prng) {
  if (shots < 1) throw std::invalid_argument("shot count must be >= 1");
  const std::size_t n = s.n_qubits();
  const auto amp = s.amplitudes();
  std::vector<double> cumulative(amp.size());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const double p = std::norm(amp[k]);
    acc += p;
    cumulative[k] = acc;
    if (p > 0.0) last_nonzero = k;
  }
  std::vector<long> ones(n, 0);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    const double u = prng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    if (k > last_nonzero) k = last_nonzero;
    for (std::size_t q = 0; q < n; ++q) ones[q] += (k >> (n - 1 - q)) & 1U;
  }
  Vector z(n);
  const double inv = 1.0 / static_cast<double>(shots);
  for (std::size_t q = 0; q < n; ++q) {
    z[q] = static_cast<double>(static_cast<long>(shots) - 2 * ones[q]) * inv;
  }
  return z;
}

Vector vqc_forward(std::span<const double> x, const VqcParams& p, const ExpectationMode& mode,
                   Prng& prng) {
  p.validate();
  math::check_size(x, p.n_qubits, "VQC input");
  return measure(run_circuit(circuit_angles(x, p), p.depth), mode, prng);
}

double shift_rule_derivative(const std::function<double(double)>& f, double theta) {
  const double up = f(theta + kShift);
  const double down = f(theta - kShift);
  return 0.5 * (up - down);
}

VqcGradient parameter_shift_grad(std::span<const double> x, const VqcParams& p,
                                 const ExpectationMode& mode, std::span<const double> d_out,
                                 Prng& prng) {
  p.validate();
  math::check_size(x, p.n_qubits, "VQC input");
  math::check_size(d_out, p.n_qubits, "VQC output gradient");
  const std::size_t n = p.n_qubits;
  VqcGradient grad{Vector(p.angles.size(), 0.0), Vector(n, 0.0)};
  if (std::all_of(d_out.begin(), d_out.end(), [](double d) { return d == 0.0; })) return grad;

  CircuitAngles angles = circuit_angles(x, p);
  std::vector<Gate2> rots(p.depth * n);
  for (std::size_t k = 0; k < rots.size(); ++k) {
    rots[k] = rot(angles.var[3 * k], angles.var[3 * k + 1], angles.var[3 * k + 2]);
  }

  // Runs layers [first, depth) starting from `s` which already has the rings
  // of layer `first` applied; `swap` replaces one rotation of that layer.
  auto finish = [&](Statevector s, std::size_t first, std::size_t swap_qubit, const Gate2& swap_gate) {
    for (std::size_t l = first; l < p.depth; ++l) {
      if (l != first) apply_rings(s);
      for (std::size_t q = 0; q < n; ++q) {
        s.apply_gate_unchecked(l == first && q == swap_qubit ? swap_gate : rots[l * n + q], q);
      }
    }
    return dot(d_out, measure(s, mode, prng));
  };

  // Unshifted states right after each layer's CNOT rings.
  std::vector<Statevector> after_rings;
  {
    Statevector s(n);
    for (std::size_t q = 0; q < n; ++q) s.apply_gate_unchecked(encoding_gate(angles.enc_y[q], angles.enc_z[q]), q);
    for (std::size_t l = 0; l < p.depth; ++l) {
      apply_rings(s);
      after_rings.push_back(s);
      for (std::size_t q = 0; q < n; ++q) s.apply_gate_unchecked(rots[l * n + q], q);
    }
  }

  for (std::size_t k = 0; k < angles.var.size(); ++k) {
    const std::size_t layer = k / (3 * n);
    const std::size_t qubit = (k / 3) % n;
    const std::size_t base = 3 * (k / 3);
    grad.d_angles[k] = shift_rule_derivative(
        [&](double theta) {
          double a[3] = {angles.var[base], angles.var[base + 1], angles.var[base + 2]};
          a[k - base] = theta;
          return finish(after_rings[layer], layer, qubit, rot(a[0], a[1], a[2]));
        },
        angles.var[k]);
  }

  auto encoded_eval = [&](std::size_t qubit, double angle_y, double angle_z) {
    Statevector s(n);
    for (std::size_t q = 0; q < n; ++q) {
      s.apply_gate_unchecked(q == qubit ? encoding_gate(angle_y, angle_z)
                                        : encoding_gate(angles.enc_y[q], angles.enc_z[q]),
                             q);
    }
    apply_rings(s);
    return finish(std::move(s), 0, n, Gate2{});
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double d_enc_y = shift_rule_derivative(
        [&](double theta) { return encoded_eval(i, theta, angles.enc_z[i]); }, angles.enc_y[i]);
    const double d_enc_z = shift_rule_derivative(
        [&](double theta) { return encoded_eval(i, angles.enc_y[i], theta); }, angles.enc_z[i]);
    const double x2 = x[i] * x[i];
    grad.d_input[i] = d_enc_y / (1.0 + x2) + d_enc_z * 2.0 * x[i] / (1.0 + x2 * x2);
  }
  return grad;
}

}  // namespace qsl::qsim
