// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qslstm/datasets.hpp"
#include "qslstm/models.hpp"
#include "qslstm/train_eval.hpp"

namespace qsl::harness {

/// Invalid configuration value; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce one run. Defaults give hidden 5, window 4,
/// batch 4, 100 epochs, 4 qubits, depth 1.
struct ExperimentConfig {
  data::SignalConfig signal;
  models::ModelSpec model;
  std::size_t hidden_dim = 5;
  std::size_t window_len = 4;
  std::size_t epochs = 100;
  std::size_t batch_size = 4;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> init_seed;  // defaults to seed
  std::size_t n_qubits = 4;
  std::size_t depth = 1;
  bool project_input = true;
  bool project_output = true;
  long clamp_lo = -128;
  long clamp_hi = 127;
  double train_fraction = 0.67;
  train::RmspropConfig optimizer;
  bool shuffle = false;
  bool epoch_timing = false;  // when false the epochs.csv seconds column is 0
  std::string output_dir = "results";

  /// Sets a field from its string form. Keys use snake_case or kebab-case
  /// (e.g. "hidden_dim" or "hidden-dim"). Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  std::uint64_t effective_init_seed() const { return init_seed.value_or(seed); }
  models::ModelConfig model_config() const;
  train::TrainConfig train_config() const;
};

/// Keys accepted by ExperimentConfig::set, in snake_case.
const std::vector<std::string>& config_keys();

/// Flat JSON object of every field (plus the derived eval_mode).
std::string config_to_json(const ExperimentConfig& cfg);
/// Accepts a bare config object or a summary.json (uses its "config" member).
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct PreparedData {
  std::vector<double> series;  // scaled to [−1, 1]
  data::Scaler scaler;
  data::Dataset train;
  data::Dataset val;
};

PreparedData prepare_data(const ExperimentConfig& cfg);

struct ExperimentResult {
  ExperimentConfig config;
  PreparedData data;
  train::RunRecord record;
};

/// Generates the dataset, trains, and returns the record. No files are written.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Creates the directory if needed and checks that a file can be written there.
void ensure_writable_dir(const std::filesystem::path& dir);

std::string format_epochs_csv(const train::RunRecord& record, bool epoch_timing);
std::string format_summary_json(const ExperimentResult& result);
std::string format_dataset_csv(const std::vector<double>& series);

/// Writes epochs.csv, summary.json and dataset.csv into `dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// "%.6g"; NaN prints as "nan".
std::string format_number(double v);

}  // namespace qsl::harness
