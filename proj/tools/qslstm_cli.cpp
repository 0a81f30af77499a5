// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Everything goes through the C API in qslstm.h.

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qslstm/qslstm.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct ConfigDeleter {
  void operator()(qsl_config* c) const { qsl_config_destroy(c); }
};
struct RunDeleter {
  void operator()(qsl_run* r) const { qsl_run_destroy(r); }
};
struct TextDeleter {
  void operator()(qsl_text* t) const { qsl_text_destroy(t); }
};
using ConfigPtr = std::unique_ptr<qsl_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<qsl_run, RunDeleter>;
using TextPtr = std::unique_ptr<qsl_text, TextDeleter>;

int report(qsl_status status, const char* context) {
  std::fprintf(stderr, "qslstm: %s: %s\n", context, qsl_last_error());
  switch (status) {
    case QSL_ERROR_INVALID_ARGUMENT:
    case QSL_ERROR_SHAPE: return kExitConfig;
    case QSL_ERROR_IO: return kExitIo;
    default: return kExitFailure;
  }
}

void print_warnings(const TextPtr& warnings) {
  if (warnings && qsl_text_size(warnings.get()) > 0) {
    std::fprintf(stderr, "%s", qsl_text_data(warnings.get()));
  }
}

// Experiment options shared by `run` and `batch`. Values are forwarded as
// strings; validation happens in the library.
struct ConfigOptions {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool shuffle = false;
  bool epoch_timing = false;

  void attach(CLI::App* app, bool per_run) {
    app->add_option("--config", config_file, "JSON config or summary.json to start from");
    struct Opt {
      const char* key;
      const char* help;
    };
    std::vector<Opt> opts = {
        {"n-points", "samples in the generated series (300)"},
        {"periods", "periods for sine/sawtooth (4)"},
        {"a1", "summed waves amplitude A1 (1)"},
        {"a2", "summed waves amplitude A2 (1)"},
        {"lambda1", "summed waves wavelength 1 (9)"},
        {"lambda2", "summed waves wavelength 2 (11)"},
        {"x-max", "summed waves grid end (99)"},
        {"mass", "oscillator mass m (0.75)"},
        {"spring", "oscillator spring constant k (4)"},
        {"friction", "oscillator friction c (0.1)"},
        {"t-max", "oscillator time span (20)"},
        {"x0", "oscillator initial position (1)"},
        {"v0", "oscillator initial velocity (0)"},
        {"shots", "shots for qlstm-shots / slstm-shots (1)"},
        {"hidden-dim", "LSTM hidden dimension (5)"},
        {"window-len", "input window length (4)"},
        {"epochs", "training epochs (100)"},
        {"batch-size", "mini-batch size (4)"},
        {"init-seed", "seed for parameter initialization (defaults to --seed)"},
        {"n-qubits", "qubits per VQC (4)"},
        {"depth", "variational layers per VQC (1)"},
        {"project-input", "trainable input projection for QLSTM (true)"},
        {"project-output", "trainable output projections for QLSTM (true)"},
        {"clamp-lo", "quantizer lower clamp (-128)"},
        {"clamp-hi", "quantizer upper clamp (127)"},
        {"train-fraction", "chronological training fraction (0.67)"},
        {"learning-rate", "RMSProp learning rate (0.01)"},
        {"decay", "RMSProp decay (0.99)"},
        {"epsilon", "RMSProp epsilon (1e-8)"},
    };
    if (per_run) {
      opts.push_back({"dataset", "sine | sawtooth | summed_waves | damped_oscillator"});
      opts.push_back({"model", "classic | qlstm-analytic | qlstm-shots | slstm-shots"});
      opts.push_back({"seed", "run seed (0)"});
    }
    for (const auto& o : opts) app->add_option(std::string("--") + o.key, values[o.key], o.help);
    app->add_flag("--shuffle", shuffle, "shuffle training pairs each epoch");
    app->add_flag("--epoch-timing", epoch_timing,
                  "write per-epoch seconds to epochs.csv (breaks byte-identical reruns)");
  }

  // Builds a config from the file (if any) and every option given on the command line.
  int build(CLI::App* app, ConfigPtr& out) const {
    qsl_config* raw = nullptr;
    if (qsl_status s = qsl_config_create(&raw); s != QSL_OK) return report(s, "config");
    out.reset(raw);
    if (!config_file.empty()) {
      if (qsl_status s = qsl_config_load(out.get(), config_file.c_str()); s != QSL_OK) {
        return report(s, "config");
      }
    }
    for (const auto& [key, value] : values) {
      if (app->count("--" + key) == 0) continue;
      if (qsl_status s = qsl_config_set(out.get(), key.c_str(), value.c_str()); s != QSL_OK) {
        return report(s, "invalid option");
      }
    }
    if (shuffle) qsl_config_set(out.get(), "shuffle", "true");
    if (epoch_timing) qsl_config_set(out.get(), "epoch_timing", "true");
    return 0;
  }
};

int cmd_run(CLI::App* app, const ConfigOptions& opts, const std::string& output, bool quiet) {
  ConfigPtr cfg;
  if (int rc = opts.build(app, cfg); rc != 0) return rc;
  if (!output.empty()) {
    if (qsl_status s = qsl_config_set(cfg.get(), "output", output.c_str()); s != QSL_OK) {
      return report(s, "invalid option");
    }
  }
  if (qsl_status s = qsl_config_validate(cfg.get()); s != QSL_OK) return report(s, "invalid configuration");
  const std::string dir = qsl_config_output_dir(cfg.get());
  if (qsl_status s = qsl_prepare_output_dir(dir.c_str()); s != QSL_OK) return report(s, "output");

  qsl_run* raw = nullptr;
  if (qsl_status s = qsl_run_create(cfg.get(), &raw); s != QSL_OK) return report(s, "training");
  RunPtr run(raw);
  if (qsl_status s = qsl_run_write(run.get(), dir.c_str()); s != QSL_OK) return report(s, "output");

  if (!quiet) {
    size_t best = 0;
    qsl_epoch_metrics m{};
    if (qsl_run_best_epoch(run.get(), &best) == QSL_OK && qsl_run_epoch(run.get(), best - 1, &m) == QSL_OK) {
      std::printf("best epoch %zu: train_rmse=%.4f val_rmse=%.4f val_r2=%.4f (%.2fs) -> %s\n", best,
                  m.train_rmse, m.val_rmse, m.val_r2, qsl_run_wall_seconds(run.get()), dir.c_str());
    }
  }
  return 0;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

int cmd_table(const std::vector<std::string>& files, const std::string& csv_out) {
  const auto paths = c_strings(files);
  qsl_text* text_raw = nullptr;
  qsl_text* warn_raw = nullptr;
  const qsl_status s = qsl_emit_table(paths.data(), paths.size(), csv_out.empty() ? nullptr : csv_out.c_str(),
                                      &text_raw, &warn_raw);
  TextPtr text(text_raw);
  TextPtr warnings(warn_raw);
  print_warnings(warnings);
  if (s != QSL_OK) return report(s, "table");
  std::printf("%s", qsl_text_data(text.get()));
  return 0;
}

int cmd_convergence(const std::vector<std::string>& files, const std::string& out) {
  const auto paths = c_strings(files);
  qsl_text* csv_raw = nullptr;
  qsl_text* warn_raw = nullptr;
  const qsl_status s = qsl_emit_convergence(paths.data(), paths.size(), out.empty() ? nullptr : out.c_str(),
                                            &csv_raw, &warn_raw);
  TextPtr csv(csv_raw);
  TextPtr warnings(warn_raw);
  print_warnings(warnings);
  if (s != QSL_OK) return report(s, "convergence");
  if (out.empty()) std::printf("%s", qsl_text_data(csv.get()));
  return 0;
}

int cmd_batch(CLI::App* app, const ConfigOptions& opts, const std::vector<std::string>& datasets,
              const std::vector<std::string>& models, const std::vector<std::uint64_t>& seeds,
              std::size_t jobs, const std::string& out) {
  ConfigPtr cfg;
  if (int rc = opts.build(app, cfg); rc != 0) return rc;
  const auto ds = c_strings(datasets);
  const auto ms = c_strings(models);
  qsl_text* fail_raw = nullptr;
  const qsl_status s = qsl_batch(cfg.get(), ds.data(), ds.size(), ms.data(), ms.size(), seeds.data(),
                                 seeds.size(), jobs, out.c_str(), &fail_raw);
  TextPtr failures(fail_raw);
  print_warnings(failures);
  if (s != QSL_OK) return report(s, "batch");
  std::printf("batch complete: %zu runs under %s\n", datasets.size() * models.size() * seeds.size(),
              out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSTM / quantum LSTM / stochastic LSTM time-series benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qsl_version());

  auto* run = app.add_subcommand("run", "train one model on one dataset and write its results");
  ConfigOptions run_opts;
  run_opts.attach(run, true);
  std::string run_output;
  bool quiet = false;
  run->add_option("-o,--output", run_output, "output directory (results)");
  run->add_flag("-q,--quiet", quiet, "suppress the summary line");

  auto* table = app.add_subcommand("table", "comparison table from summary.json files");
  std::vector<std::string> table_files;
  std::string table_csv;
  table->add_option("summaries", table_files, "summary.json files")->required();
  table->add_option("--csv", table_csv, "also write the table as CSV to this path");

  auto* conv = app.add_subcommand("convergence", "long-format validation RMSE curves");
  std::vector<std::string> conv_files;
  std::string conv_out;
  conv->add_option("epochs", conv_files, "epochs.csv files")->required();
  conv->add_option("-o,--out", conv_out, "write CSV here instead of stdout");

  auto* batch = app.add_subcommand("batch", "run a dataset x model x seed grid");
  ConfigOptions batch_opts;
  batch_opts.attach(batch, false);
  std::vector<std::string> batch_datasets{"sine", "sawtooth", "summed_waves", "damped_oscillator"};
  std::vector<std::string> batch_models{"classic", "qlstm-analytic", "qlstm-shots:1", "slstm-shots:1",
                                        "slstm-shots:100"};
  std::vector<std::uint64_t> batch_seeds{0};
  std::size_t jobs = 1;
  std::string batch_out = "results";
  batch->add_option("--datasets", batch_datasets, "datasets to run")->delimiter(',');
  batch->add_option("--models", batch_models, "model labels, e.g. slstm-shots:100")->delimiter(',');
  batch->add_option("--seeds", batch_seeds, "seeds")->delimiter(',');
  batch->add_option("-j,--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  batch->add_option("-o,--out", batch_out, "output root directory");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run, run_opts, run_output, quiet);
  if (table->parsed()) return cmd_table(table_files, table_csv);
  if (conv->parsed()) return cmd_convergence(conv_files, conv_out);
  if (batch->parsed()) return cmd_batch(batch, batch_opts, batch_datasets, batch_models, batch_seeds, jobs, batch_out);
  return kExitFailure;
}
