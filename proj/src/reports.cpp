// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/reports.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qsl::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

double metric(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

TableRow parse_summary(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("summary is not a JSON object");
  for (const char* key : {"model", "dataset"}) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw ParseError(std::string("missing string field '") + key + "'");
    }
  }
  TableRow row;
  row.model = j.at("model").get<std::string>();
  row.dataset = j.at("dataset").get<std::string>();
  row.train_rmse = metric(j, "train_rmse");
  row.train_r2 = metric(j, "train_r2");
  row.val_rmse = metric(j, "val_rmse");
  row.val_r2 = metric(j, "val_r2");
  row.wall_seconds = metric(j, "wall_seconds");
  return row;
}

std::string fixed4(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_runtime(double seconds) {
  char buf[32];
  if (seconds < 60.0) std::snprintf(buf, sizeof(buf), "%.2fs", seconds);
  else if (seconds < 3600.0) std::snprintf(buf, sizeof(buf), "%.2fm", seconds / 60.0);
  else std::snprintf(buf, sizeof(buf), "%.3fh", seconds / 3600.0);
  return buf;
}

Table build_table(const std::vector<fs::path>& summaries) {
  if (summaries.empty()) throw std::invalid_argument("table needs at least one summary");
  Table t;
  for (const auto& path : summaries) {
    try {
      t.rows.push_back(parse_summary(path));
    } catch (const std::exception& e) {
      t.warnings.push_back("skipping malformed summary '" + path.string() + "': " + e.what());
    }
  }
  if (t.rows.empty()) throw ParseError("no readable summaries; " + t.warnings.front());
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [](const TableRow& a, const TableRow& b) { return a.model < b.model; });
  std::map<std::string, int> seen;
  for (const auto& r : t.rows) ++seen[r.model];
  for (auto& r : t.rows) {
    if (seen[r.model] > 1) r.duplicate = true;
  }
  for (const auto& [model, n] : seen) {
    if (n > 1) t.warnings.push_back("model '" + model + "' appears " + std::to_string(n) + " times");
  }
  return t;
}

std::string Table::csv() const {
  std::string out = "model,dataset,train_rmse,train_r2,val_rmse,val_r2,wall_seconds,flag\n";
  for (const auto& r : rows) {
    out += r.model + ',' + r.dataset + ',' + format_number(r.train_rmse) + ',' +
           format_number(r.train_r2) + ',' + format_number(r.val_rmse) + ',' +
           format_number(r.val_r2) + ',' + format_number(r.wall_seconds) + ',' +
           (r.duplicate ? "duplicate" : "") + '\n';
  }
  return out;
}

std::string Table::text() const {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"Model", "Dataset", "Train RMSE", "Train R2", "Val RMSE", "Val R2", "Runtime", ""});
  for (const auto& r : rows) {
    cells.push_back({r.model, r.dataset, fixed4(r.train_rmse), fixed4(r.train_r2), fixed4(r.val_rmse),
                     fixed4(r.val_r2), format_runtime(r.wall_seconds), r.duplicate ? "(duplicate)" : ""});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      if (c < 2) line += row[c] + std::string(width[c] - row[c].size(), ' ');
      else line += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  };
  emit(cells.front());
  std::size_t total = 0;
  for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c > 0 ? 2 : 0);
  out += std::string(total, '-') + '\n';
  for (std::size_t r = 1; r < cells.size(); ++r) emit(cells[r]);
  return out;
}

Convergence build_convergence(const std::vector<fs::path>& epoch_files) {
  if (epoch_files.empty()) throw std::invalid_argument("convergence needs at least one epochs.csv");
  Convergence out;
  out.csv = "model,epoch,val_rmse\n";
  std::size_t readable = 0;
  for (const auto& path : epoch_files) {
    try {
      std::istringstream in(read_text_file(path));
      std::string line;
      if (!std::getline(in, line)) throw ParseError("empty file");
      const auto header = split_csv_line(line);
      const auto epoch_col = std::find(header.begin(), header.end(), "epoch");
      const auto val_col = std::find(header.begin(), header.end(), "val_rmse");
      if (epoch_col == header.end() || val_col == header.end()) {
        throw ParseError("header lacks epoch/val_rmse columns");
      }
      const auto ei = static_cast<std::size_t>(epoch_col - header.begin());
      const auto vi = static_cast<std::size_t>(val_col - header.begin());

      std::string model = path.parent_path().filename().string();
      const fs::path summary = path.parent_path() / "summary.json";
      bool named = false;
      if (fs::exists(summary)) {
        try {
          const json j = json::parse(read_text_file(summary));
          if (j.contains("model") && j.at("model").is_string()) {
            model = j.at("model").get<std::string>();
            named = true;
          }
        } catch (const std::exception&) {
        }
      }
      if (!named) {
        out.warnings.push_back("no usable summary.json next to '" + path.string() +
                               "'; using directory name '" + model + "'");
      }

      std::string body;
      std::size_t rows = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
          throw ParseError("row " + std::to_string(rows + 1) + " has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(header.size()));
        }
        body += model + ',' + cells[ei] + ',' + cells[vi] + '\n';
        ++rows;
      }
      if (rows == 0) throw ParseError("no data rows");
      out.csv += body;
      out.rows += rows;
      ++readable;
    } catch (const std::exception& e) {
      out.warnings.push_back("skipping malformed epochs file '" + path.string() + "': " + e.what());
    }
  }
  if (readable == 0) throw ParseError("no readable epochs files; " + out.warnings.front());
  return out;
}

models::ModelSpec parse_model_label(const std::string& label) {
  models::ModelSpec spec;
  std::string kind = label;
  std::string shots;
  const auto colon = label.find(':');
  if (colon != std::string::npos) {
    kind = label.substr(0, colon);
    shots = label.substr(colon + 1);
  } else if (label.rfind("qlstm-shots-", 0) == 0 || label.rfind("slstm-shots-", 0) == 0) {
    kind = label.substr(0, 11);
    shots = label.substr(12);
  }
  try {
    spec.kind = models::ModelSpec::parse_kind(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  if (!shots.empty()) {
    ExperimentConfig probe;
    probe.set("shots", shots);
    spec.shots = probe.model.shots;
    if (spec.shots < 1) throw ConfigError("shots", "must be >= 1");
  }
  return spec;
}

BatchOutcome run_batch(const BatchPlan& plan) {
  if (plan.datasets.empty() || plan.models.empty() || plan.seeds.empty()) {
    throw ConfigError("batch", "needs at least one dataset, model and seed");
  }
  struct Job {
    ExperimentConfig cfg;
    fs::path dir;
  };
  std::vector<Job> jobs;
  for (const auto kind : plan.datasets) {
    for (const auto& spec : plan.models) {
      for (const auto seed : plan.seeds) {
        Job job{plan.base, plan.output_dir / data::to_string(kind) / spec.label() /
                               ("seed-" + std::to_string(seed))};
        job.cfg.signal.kind = kind;
        job.cfg.model = spec;
        job.cfg.seed = seed;
        job.cfg.output_dir = job.dir.string();
        job.cfg.validate();
        jobs.push_back(std::move(job));
      }
    }
  }
  for (const auto& job : jobs) ensure_writable_dir(job.dir);

  BatchOutcome outcome;
  std::vector<bool> ok(jobs.size(), false);
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        write_outputs(run_experiment(jobs[i].cfg), jobs[i].dir);
        ok[i] = true;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        outcome.failures.push_back(jobs[i].dir.string() + ": " + e.what());
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(plan.jobs, jobs.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();

  for (const auto kind : plan.datasets) {
    std::vector<fs::path> summaries;
    std::vector<fs::path> epochs;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (!ok[i] || jobs[i].cfg.signal.kind != kind) continue;
      summaries.push_back(jobs[i].dir / "summary.json");
      epochs.push_back(jobs[i].dir / "epochs.csv");
      outcome.run_dirs.push_back(jobs[i].dir);
    }
    if (summaries.empty()) continue;
    const fs::path dataset_dir = plan.output_dir / data::to_string(kind);
    const Table table = build_table(summaries);
    write_text_file(dataset_dir / "table.csv", table.csv());
    write_text_file(dataset_dir / "table.txt", table.text());
    write_text_file(dataset_dir / "convergence.csv", build_convergence(epochs).csv);
  }
  return outcome;
}

}  // namespace qsl::harness
