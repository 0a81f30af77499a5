// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsl {

/// Raised when operand dimensions disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace math {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// W·v + b. Throws ShapeError unless W.cols == |v| and W.rows == |b|.
Vector mat_vec_mac(const Matrix& W, std::span<const double> v, std::span<const double> b);

/// out += Wᵀ·g
void mat_t_vec_accumulate(const Matrix& W, std::span<const double> g, std::span<double> out);

/// dW += g·vᵀ
void outer_accumulate(Matrix& dW, std::span<const double> g, std::span<const double> v);

void check_size(std::span<const double> v, std::size_t expected, const char* what);

double sigmoid(double x);

/// Seedable uniform generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard, so draws are reproducible across
/// toolchains. Doubles are built from the top 53 bits of each 64-bit word.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Next draw, uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next_u64() { return engine_(); }

  /// Independent child stream; advances this stream by one draw.
  Prng split();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Central-difference gradient: (f(x + h·eᵢ) − f(x − h·eᵢ)) / 2h.
/// Throws std::domain_error if f returns a non-finite value.
Vector finite_diff_grad(const std::function<double(const Vector&)>& f, const Vector& x,
                        double h = 1e-5);

}  // namespace math
}  // namespace qsl
