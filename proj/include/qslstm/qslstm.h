/* Copyright 2026 The qslstm Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the qslstm benchmark library. Every object is an opaque
 * handle owned by the caller and released with its *_destroy function.
 * Functions return a qsl_status; on failure qsl_last_error() describes the
 * problem for the calling thread until its next failing call.
 */
#ifndef QSLSTM_QSLSTM_H
#define QSLSTM_QSLSTM_H

#include <stddef.h>
#include <stdint.h>

#if defined(QSL_BUILDING_LIBRARY)
#define QSL_API __attribute__((visibility("default")))
#else
#define QSL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsl_status {
  QSL_OK = 0,
  QSL_ERROR_INVALID_ARGUMENT = 1, /* bad config value or API argument */
  QSL_ERROR_SHAPE = 2,            /* dimension mismatch */
  QSL_ERROR_IO = 3,               /* file could not be read or written */
  QSL_ERROR_PARSE = 4,            /* malformed JSON/CSV input */
  QSL_ERROR_STATE = 5,            /* e.g. best epoch of an empty run */
  QSL_ERROR_OUT_OF_MEMORY = 6,
  QSL_ERROR_INTERNAL = 7
} qsl_status;

typedef struct qsl_config qsl_config;
typedef struct qsl_run qsl_run;
typedef struct qsl_text qsl_text;

typedef struct qsl_epoch_metrics {
  size_t epoch; /* 1-based */
  double train_rmse;
  double train_r2;
  double val_rmse;
  double val_r2;
  double seconds;
} qsl_epoch_metrics;

QSL_API const char* qsl_version(void);
QSL_API const char* qsl_last_error(void);
/* Offending configuration key of the last QSL_ERROR_INVALID_ARGUMENT, or "". */
QSL_API const char* qsl_last_error_field(void);
QSL_API const char* qsl_status_name(qsl_status status);

/* Owned strings returned by the library. */
QSL_API const char* qsl_text_data(const qsl_text* text);
QSL_API size_t qsl_text_size(const qsl_text* text);
QSL_API void qsl_text_destroy(qsl_text* text);

/* Experiment configuration with the library defaults. */
QSL_API qsl_status qsl_config_create(qsl_config** out);
QSL_API qsl_status qsl_config_clone(const qsl_config* cfg, qsl_config** out);
QSL_API void qsl_config_destroy(qsl_config* cfg);
/* key in snake_case or kebab-case, e.g. "hidden-dim"; value in string form. */
QSL_API qsl_status qsl_config_set(qsl_config* cfg, const char* key, const char* value);
/* Loads a config object or the "config" member of a summary.json. */
QSL_API qsl_status qsl_config_load(qsl_config* cfg, const char* path);
QSL_API qsl_status qsl_config_validate(const qsl_config* cfg);
QSL_API qsl_status qsl_config_to_json(const qsl_config* cfg, qsl_text** out);
/* Output directory from the "output" key. */
QSL_API const char* qsl_config_output_dir(const qsl_config* cfg);

/* Creates the directory if needed and checks that it is writable. */
QSL_API qsl_status qsl_prepare_output_dir(const char* directory);

/* Generates the dataset and trains; blocks until training completes. */
QSL_API qsl_status qsl_run_create(const qsl_config* cfg, qsl_run** out);
QSL_API void qsl_run_destroy(qsl_run* run);
QSL_API size_t qsl_run_epoch_count(const qsl_run* run);
QSL_API qsl_status qsl_run_epoch(const qsl_run* run, size_t index, qsl_epoch_metrics* out);
/* 1-based epoch with the lowest validation RMSE. */
QSL_API qsl_status qsl_run_best_epoch(const qsl_run* run, size_t* out);
QSL_API double qsl_run_wall_seconds(const qsl_run* run);
/* Writes epochs.csv, summary.json and dataset.csv. */
QSL_API qsl_status qsl_run_write(const qsl_run* run, const char* directory);
QSL_API qsl_status qsl_run_summary_json(const qsl_run* run, qsl_text** out);

/* Comparison table over summary.json files. Writes CSV to csv_path when it is
 * non-NULL; *text receives the aligned table and *warnings one line per
 * skipped or duplicated entry (either out-pointer may be NULL). */
QSL_API qsl_status qsl_emit_table(const char* const* summary_paths, size_t count,
                                  const char* csv_path, qsl_text** text, qsl_text** warnings);

/* Long-format model,epoch,val_rmse CSV over epochs.csv files. */
QSL_API qsl_status qsl_emit_convergence(const char* const* epoch_paths, size_t count,
                                        const char* csv_path, qsl_text** csv,
                                        qsl_text** warnings);

/* Runs datasets × models × seeds with up to `jobs` worker threads under
 * out_dir. Model labels: classic, qlstm-analytic, qlstm-shots:<k>,
 * slstm-shots:<k>. *failures (may be NULL) lists failed runs. */
QSL_API qsl_status qsl_batch(const qsl_config* base, const char* const* datasets, size_t n_datasets,
                             const char* const* models, size_t n_models, const uint64_t* seeds,
                             size_t n_seeds, size_t jobs, const char* out_dir,
                             qsl_text** failures);

#ifdef __cplusplus
}
#endif

#endif /* QSLSTM_QSLSTM_H */
