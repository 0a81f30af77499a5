// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qslstm/experiment.hpp"

namespace qsl::harness {

struct TableRow {
  std::string model;
  std::string dataset;
  double train_rmse = 0.0;
  double train_r2 = 0.0;
  double val_rmse = 0.0;
  double val_r2 = 0.0;
  double wall_seconds = 0.0;
  bool duplicate = false;
};

struct Table {
  std::vector<TableRow> rows;  // sorted by model name
  std::vector<std::string> warnings;

  std::string csv() const;
  std::string text() const;
};

/// Parses summary.json files into a comparison table. Malformed files are
/// skipped with a warning; throws ParseError if none could be read.
Table build_table(const std::vector<std::filesystem::path>& summaries);

struct Convergence {
  std::string csv;  // model,epoch,val_rmse
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

/// Concatenates the val_rmse column of each epochs.csv, copying the values
/// verbatim. The model name comes from summary.json next to each file, or
/// the parent directory name when that is missing.
Convergence build_convergence(const std::vector<std::filesystem::path>& epoch_files);

/// Runtime rendered like "24.88s", "56.34m" or "4.816h".
std::string format_runtime(double seconds);

struct BatchPlan {
  ExperimentConfig base;
  std::vector<data::SignalKind> datasets;
  std::vector<models::ModelSpec> models;
  std::vector<std::uint64_t> seeds;
  std::size_t jobs = 1;
  std::filesystem::path output_dir = "results";
};

/// Parses "classic", "qlstm-analytic", "qlstm-shots:1" / "qlstm-shots-1",
/// "slstm-shots:100" / "slstm-shots-100".
models::ModelSpec parse_model_label(const std::string& label);

struct BatchOutcome {
  std::vector<std::filesystem::path> run_dirs;
  std::vector<std::string> failures;
};

/// Runs every dataset × model × seed combination on up to `jobs` threads,
/// each in <out>/<dataset>/<model-label>/seed-<seed>, then writes table.csv,
/// table.txt and convergence.csv per dataset.
BatchOutcome run_batch(const BatchPlan& plan);

}  // namespace qsl::harness
