// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/qslstm.h"

#include <new>
#include <string>
#include <vector>

#include "qslstm/experiment.hpp"
#include "qslstm/reports.hpp"

struct qsl_config {
  qsl::harness::ExperimentConfig cfg;
};

struct qsl_run {
  qsl::harness::ExperimentResult result;
};

struct qsl_text {
  std::string data;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_field;

qsl_status fail(qsl_status status, const std::string& message, std::string field = {}) {
  g_error = message;
  g_error_field = std::move(field);
  return status;
}

template <typename F>
qsl_status guarded(F&& body) {
  try {
    body();
    return QSL_OK;
  } catch (const qsl::harness::ConfigError& e) {
    return fail(QSL_ERROR_INVALID_ARGUMENT, e.what(), e.field());
  } catch (const qsl::ShapeError& e) {
    return fail(QSL_ERROR_SHAPE, e.what());
  } catch (const qsl::harness::IoError& e) {
    return fail(QSL_ERROR_IO, e.what());
  } catch (const qsl::harness::ParseError& e) {
    return fail(QSL_ERROR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(QSL_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::logic_error& e) {
    return fail(QSL_ERROR_STATE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QSL_ERROR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(QSL_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(QSL_ERROR_INTERNAL, "unknown error");
  }
}

qsl_status null_argument(const char* name) {
  return fail(QSL_ERROR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

void give_text(qsl_text** out, std::string s) {
  if (out != nullptr) *out = new qsl_text{std::move(s)};
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

std::vector<std::filesystem::path> to_paths(const char* const* paths, size_t count) {
  std::vector<std::filesystem::path> out;
  for (size_t i = 0; i < count; ++i) {
    if (paths[i] == nullptr) throw std::invalid_argument("path list contains NULL");
    out.emplace_back(paths[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* qsl_version(void) { return "0.1.0"; }
const char* qsl_last_error(void) { return g_error.c_str(); }
const char* qsl_last_error_field(void) { return g_error_field.c_str(); }

const char* qsl_status_name(qsl_status status) {
  switch (status) {
    case QSL_OK: return "ok";
    case QSL_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case QSL_ERROR_SHAPE: return "shape mismatch";
    case QSL_ERROR_IO: return "i/o error";
    case QSL_ERROR_PARSE: return "parse error";
    case QSL_ERROR_STATE: return "invalid state";
    case QSL_ERROR_OUT_OF_MEMORY: return "out of memory";
    case QSL_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qsl_text_data(const qsl_text* text) { return text ? text->data.c_str() : ""; }
size_t qsl_text_size(const qsl_text* text) { return text ? text->data.size() : 0; }
void qsl_text_destroy(qsl_text* text) { delete text; }

qsl_status qsl_config_create(qsl_config** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new qsl_config{}; });
}

qsl_status qsl_config_clone(const qsl_config* cfg, qsl_config** out) {
  if (cfg == nullptr) return null_argument("cfg");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new qsl_config{*cfg}; });
}

void qsl_config_destroy(qsl_config* cfg) { delete cfg; }

qsl_status qsl_config_set(qsl_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr) return null_argument("cfg");
  if (key == nullptr || value == nullptr) return null_argument("key/value");
  return guarded([&] { cfg->cfg.set(key, value); });
}

qsl_status qsl_config_load(qsl_config* cfg, const char* path) {
  if (cfg == nullptr) return null_argument("cfg");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { cfg->cfg = qsl::harness::load_config(path); });
}

qsl_status qsl_config_validate(const qsl_config* cfg) {
  if (cfg == nullptr) return null_argument("cfg");
  return guarded([&] { cfg->cfg.validate(); });
}

qsl_status qsl_config_to_json(const qsl_config* cfg, qsl_text** out) {
  if (cfg == nullptr) return null_argument("cfg");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { give_text(out, qsl::harness::config_to_json(cfg->cfg)); });
}

const char* qsl_config_output_dir(const qsl_config* cfg) {
  return cfg ? cfg->cfg.output_dir.c_str() : "";
}

qsl_status qsl_prepare_output_dir(const char* directory) {
  if (directory == nullptr) return null_argument("directory");
  return guarded([&] { qsl::harness::ensure_writable_dir(directory); });
}

qsl_status qsl_run_create(const qsl_config* cfg, qsl_run** out) {
  if (cfg == nullptr) return null_argument("cfg");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new qsl_run{qsl::harness::run_experiment(cfg->cfg)}; });
}

void qsl_run_destroy(qsl_run* run) { delete run; }

size_t qsl_run_epoch_count(const qsl_run* run) { return run ? run->result.record.epochs.size() : 0; }

qsl_status qsl_run_epoch(const qsl_run* run, size_t index, qsl_epoch_metrics* out) {
  if (run == nullptr) return null_argument("run");
  if (out == nullptr) return null_argument("out");
  const auto& epochs = run->result.record.epochs;
  if (index >= epochs.size()) return fail(QSL_ERROR_INVALID_ARGUMENT, "epoch index out of range");
  const auto& e = epochs[index];
  *out = qsl_epoch_metrics{e.epoch, e.train_rmse, e.train_r2, e.val_rmse, e.val_r2, e.seconds};
  return QSL_OK;
}

qsl_status qsl_run_best_epoch(const qsl_run* run, size_t* out) {
  if (run == nullptr) return null_argument("run");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = run->result.record.best_epoch(); });
}

double qsl_run_wall_seconds(const qsl_run* run) { return run ? run->result.record.wall_seconds : 0.0; }

qsl_status qsl_run_write(const qsl_run* run, const char* directory) {
  if (run == nullptr) return null_argument("run");
  if (directory == nullptr) return null_argument("directory");
  return guarded([&] { qsl::harness::write_outputs(run->result, directory); });
}

qsl_status qsl_run_summary_json(const qsl_run* run, qsl_text** out) {
  if (run == nullptr) return null_argument("run");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { give_text(out, qsl::harness::format_summary_json(run->result)); });
}

qsl_status qsl_emit_table(const char* const* summary_paths, size_t count, const char* csv_path,
                          qsl_text** text, qsl_text** warnings) {
  if (summary_paths == nullptr && count > 0) return null_argument("summary_paths");
  return guarded([&] {
    const auto table = qsl::harness::build_table(to_paths(summary_paths, count));
    if (csv_path != nullptr) qsl::harness::write_text_file(csv_path, table.csv());
    give_text(text, table.text());
    give_text(warnings, join_lines(table.warnings));
  });
}

qsl_status qsl_emit_convergence(const char* const* epoch_paths, size_t count, const char* csv_path,
                                qsl_text** csv, qsl_text** warnings) {
  if (epoch_paths == nullptr && count > 0) return null_argument("epoch_paths");
  return guarded([&] {
    auto conv = qsl::harness::build_convergence(to_paths(epoch_paths, count));
    if (csv_path != nullptr) qsl::harness::write_text_file(csv_path, conv.csv);
    give_text(warnings, join_lines(conv.warnings));
    give_text(csv, std::move(conv.csv));
  });
}

qsl_status qsl_batch(const qsl_config* base, const char* const* datasets, size_t n_datasets,
                     const char* const* models, size_t n_models, const uint64_t* seeds,
                     size_t n_seeds, size_t jobs, const char* out_dir, qsl_text** failures) {
  if (base == nullptr) return null_argument("base");
  if (out_dir == nullptr) return null_argument("out_dir");
  if ((datasets == nullptr && n_datasets > 0) || (models == nullptr && n_models > 0) ||
      (seeds == nullptr && n_seeds > 0)) {
    return null_argument("datasets/models/seeds");
  }
  return guarded([&] {
    qsl::harness::BatchPlan plan;
    plan.base = base->cfg;
    for (size_t i = 0; i < n_datasets; ++i) {
      try {
        plan.datasets.push_back(qsl::data::parse_signal_kind(datasets[i] ? datasets[i] : ""));
      } catch (const std::invalid_argument& e) {
        throw qsl::harness::ConfigError("dataset", e.what());
      }
    }
    for (size_t i = 0; i < n_models; ++i) {
      plan.models.push_back(qsl::harness::parse_model_label(models[i] ? models[i] : ""));
    }
    plan.seeds.assign(seeds, seeds + n_seeds);
    plan.jobs = jobs;
    plan.output_dir = out_dir;
    const auto outcome = qsl::harness::run_batch(plan);
    give_text(failures, join_lines(outcome.failures));
    if (!outcome.failures.empty()) {
      throw std::runtime_error(std::to_string(outcome.failures.size()) + " batch run(s) failed");
    }
  });
}

}  // extern "C"
