// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qslstm/core_math.hpp"

namespace qsl::data {

using math::Vector;

enum class SignalKind { Sine, Sawtooth, SummedWaves, DampedOscillator };

std::string to_string(SignalKind kind);
/// Accepts sine, sawtooth, summed_waves, damped_oscillator.
SignalKind parse_signal_kind(std::string_view name);

struct SummedWaves {
  double a1 = 1.0;
  double a2 = 1.0;
  double lambda1 = 9.0;
  double lambda2 = 11.0;
  double x_max = 99.0;
};

struct Oscillator {
  double mass = 0.75;
  double spring = 4.0;
  double friction = 0.1;
  double t_max = 20.0;
  double x0 = 1.0;
  double v0 = 0.0;

  double omega0() const;
  double damping_ratio() const;
  double omega_d() const;
};

struct SignalConfig {
  SignalKind kind = SignalKind::Sine;
  std::size_t n_points = 300;
  double periods = 4.0;
  SummedWaves waves;
  Oscillator oscillator;

  void validate() const;
};

/// yₖ = sin(2π·periods·k/(n−1))
std::vector<double> gen_sine(std::size_t n_points, double periods);
/// yₖ = 2(φ − ⌊φ⌋) − 1 with φ = periods·k/(n−1)
std::vector<double> gen_sawtooth(std::size_t n_points, double periods);

double summed_waves_at(const SummedWaves& cfg, double x);
/// Samples summed_waves_at on a uniform grid over [0, x_max].
std::vector<double> gen_summed_waves(const SummedWaves& cfg, std::size_t n_points);

/// Closed-form underdamped solution. Throws for χ >= 1.
double oscillator_at(const Oscillator& cfg, double t);
/// Samples oscillator_at on a uniform grid over [0, t_max].
std::vector<double> gen_damped_oscillator(const Oscillator& cfg, std::size_t n_points);

std::vector<double> generate(const SignalConfig& cfg);

struct Scaler {
  double min = 0.0;
  double max = 1.0;

  double apply(double y) const { return 2.0 * (y - min) / (max - min) - 1.0; }
  double inverse(double s) const { return (s + 1.0) * 0.5 * (max - min) + min; }
};

/// Affine map of [min, max] onto [−1, 1]. Throws for constant series.
std::pair<std::vector<double>, Scaler> scale_minmax(const std::vector<double>& series);

struct Sample {
  std::vector<Vector> window;  // window_len vectors of length 1
  Vector target;               // the value right after the window
  std::size_t start = 0;       // series index of window[0]
};

struct Dataset {
  std::vector<Sample> samples;
  std::size_t window_len = 0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// One (window, next value) pair per start index k = 0 … len − window_len − 1.
Dataset make_windows(const std::vector<double>& series, std::size_t window_len);

/// First round(fraction·n) samples train, the rest validate; order is kept.
std::pair<Dataset, Dataset> split_chronological(const Dataset& ds, double train_fraction);

}  // namespace qsl::data
