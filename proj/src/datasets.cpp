// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsl::data {

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::Sine: return "sine";
    case SignalKind::Sawtooth: return "sawtooth";
    case SignalKind::SummedWaves: return "summed_waves";
    case SignalKind::DampedOscillator: return "damped_oscillator";
  }
  return "unknown";
}

SignalKind parse_signal_kind(std::string_view name) {
  if (name == "sine") return SignalKind::Sine;
  if (name == "sawtooth") return SignalKind::Sawtooth;
  if (name == "summed_waves") return SignalKind::SummedWaves;
  if (name == "damped_oscillator") return SignalKind::DampedOscillator;
  throw std::invalid_argument("unknown dataset '" + std::string(name) + "'");
}

double Oscillator::omega0() const { return std::sqrt(spring / mass); }
double Oscillator::damping_ratio() const { return friction / (2.0 * std::sqrt(mass * spring)); }
double Oscillator::omega_d() const {
  const double chi = damping_ratio();
  return omega0() * std::sqrt(1.0 - chi * chi);
}

void SignalConfig::validate() const {
  if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");
  switch (kind) {
    case SignalKind::Sine:
    case SignalKind::Sawtooth:
      if (!(periods > 0.0)) throw std::invalid_argument("periods must be positive");
      break;
    case SignalKind::SummedWaves:
      if (!(waves.lambda1 > 0.0) || !(waves.lambda2 > 0.0)) {
        throw std::invalid_argument("wavelengths must be positive");
      }
      if (!(waves.x_max > 0.0)) throw std::invalid_argument("x_max must be positive");
      break;
    case SignalKind::DampedOscillator:
      if (!(oscillator.mass > 0.0) || !(oscillator.spring > 0.0) || !(oscillator.friction > 0.0)) {
        throw std::invalid_argument("oscillator mass, spring and friction must be positive");
      }
      if (!(oscillator.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
      if (oscillator.damping_ratio() >= 1.0) {
        throw std::invalid_argument("oscillator must be underdamped (damping ratio < 1)");
      }
      break;
  }
}

namespace {

void require_points(std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");
}

double grid(std::size_t k, std::size_t n_points, double span) {
  return span * static_cast<double>(k) / static_cast<double>(n_points - 1);
}

}  // namespace

std::vector<double> gen_sine(std::size_t n_points, double periods) {
  require_points(n_points);
  std::vector<double> y(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    y[k] = std::sin(2.0 * std::numbers::pi * grid(k, n_points, periods));
  }
  return y;
}

std::vector<double> gen_sawtooth(std::size_t n_points, double periods) {
  require_points(n_points);
  std::vector<double> y(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double phase = grid(k, n_points, periods);
    y[k] = 2.0 * (phase - std::floor(phase)) - 1.0;
  }
  return y;
}

double summed_waves_at(const SummedWaves& cfg, double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  return cfg.a1 * std::cos(two_pi * x / cfg.lambda1) + cfg.a2 * std::cos(two_pi * x / cfg.lambda2);
}

std::vector<double> gen_summed_waves(const SummedWaves& cfg, std::size_t n_points) {
  require_points(n_points);
  if (!(cfg.lambda1 > 0.0) || !(cfg.lambda2 > 0.0)) {
    throw std::invalid_argument("wavelengths must be positive");
  }
  std::vector<double> y(n_points);
  for (std::size_t k = 0; k < n_points; ++k) y[k] = summed_waves_at(cfg, grid(k, n_points, cfg.x_max));
  return y;
}

double oscillator_at(const Oscillator& cfg, double t) {
  const double chi = cfg.damping_ratio();
  if (chi >= 1.0) throw std::invalid_argument("oscillator must be underdamped (damping ratio < 1)");
  const double w0 = cfg.omega0();
  const double wd = cfg.omega_d();
  return std::exp(-chi * w0 * t) *
         (cfg.x0 * std::cos(wd * t) + (cfg.v0 + chi * w0 * cfg.x0) / wd * std::sin(wd * t));
}

std::vector<double> gen_damped_oscillator(const Oscillator& cfg, std::size_t n_points) {
  require_points(n_points);
  std::vector<double> y(n_points);
  for (std::size_t k = 0; k < n_points; ++k) y[k] = oscillator_at(cfg, grid(k, n_points, cfg.t_max));
  return y;
}

std::vector<double> generate(const SignalConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case SignalKind::Sine: return gen_sine(cfg.n_points, cfg.periods);
    case SignalKind::Sawtooth: return gen_sawtooth(cfg.n_points, cfg.periods);
    case SignalKind::SummedWaves: return gen_summed_waves(cfg.waves, cfg.n_points);
    case SignalKind::DampedOscillator: return gen_damped_oscillator(cfg.oscillator, cfg.n_points);
  }
  throw std::logic_error("unhandled signal kind");
}

std::pair<std::vector<double>, Scaler> scale_minmax(const std::vector<double>& series) {
  if (series.empty()) throw std::invalid_argument("scale_minmax: empty series");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (!(*hi > *lo)) throw std::invalid_argument("scale_minmax: constant series");
  Scaler scaler{*lo, *hi};
  std::vector<double> out(series.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    out[k] = std::clamp(scaler.apply(series[k]), -1.0, 1.0);
  }
  return {std::move(out), scaler};
}

Dataset make_windows(const std::vector<double>& series, std::size_t window_len) {
  if (window_len == 0) throw std::invalid_argument("window length must be >= 1");
  if (series.size() <= window_len) {
    throw std::invalid_argument("series too short for window length " + std::to_string(window_len));
  }
  Dataset ds;
  ds.window_len = window_len;
  const std::size_t count = series.size() - window_len;
  ds.samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Sample s;
    s.start = k;
    s.window.reserve(window_len);
    for (std::size_t j = 0; j < window_len; ++j) s.window.push_back(Vector{series[k + j]});
    s.target = Vector{series[k + window_len]};
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

std::pair<Dataset, Dataset> split_chronological(const Dataset& ds, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(ds.size())));
  if (n_train == 0 || n_train >= ds.size()) {
    throw std::invalid_argument("split leaves an empty training or validation set");
  }
  Dataset train{{ds.samples.begin(), ds.samples.begin() + static_cast<std::ptrdiff_t>(n_train)},
                ds.window_len};
  Dataset val{{ds.samples.begin() + static_cast<std::ptrdiff_t>(n_train), ds.samples.end()},
              ds.window_len};
  return {std::move(train), std::move(val)};
}

}  // namespace qsl::data
