// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/core_math.hpp"

#include <cmath>
#include <string>

namespace qsl::math {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void check_size(std::span<const double> v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(expected) +
                     ", got " + std::to_string(v.size()));
  }
}

Vector mat_vec_mac(const Matrix& W, std::span<const double> v, std::span<const double> b) {
  check_size(v, W.cols(), "mat_vec_mac input");
  check_size(b, W.rows(), "mat_vec_mac bias");
  Vector out(W.rows());
  for (std::size_t i = 0; i < W.rows(); ++i) {
    const auto row = W.row(i);
    double acc = b[i];
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

void mat_t_vec_accumulate(const Matrix& W, std::span<const double> g, std::span<double> out) {
  check_size(g, W.rows(), "mat_t_vec_accumulate gradient");
  check_size(out, W.cols(), "mat_t_vec_accumulate output");
  for (std::size_t i = 0; i < W.rows(); ++i) {
    const auto row = W.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j] * g[i];
  }
}

void outer_accumulate(Matrix& dW, std::span<const double> g, std::span<const double> v) {
  check_size(g, dW.rows(), "outer_accumulate rows");
  check_size(v, dW.cols(), "outer_accumulate cols");
  for (std::size_t i = 0; i < dW.rows(); ++i) {
    for (std::size_t j = 0; j < dW.cols(); ++j) dW(i, j) += g[i] * v[j];
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Prng Prng::split() { return Prng(mix_seed(next_u64())); }

Vector finite_diff_grad(const std::function<double(const Vector&)>& f, const Vector& x,
                        double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: step must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw std::domain_error("finite_diff_grad: non-finite function value at coordinate " +
                              std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace qsl::math
