// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qslstm/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qsl::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string normalize_key(std::string_view key) {
  std::string k(key);
  for (char& c : k) {
    if (c == '-') c = '_';
  }
  return k;
}

template <typename T>
T parse_integer(std::string_view field, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string(field), "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view field, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
    throw ConfigError(std::string(field), "expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view field, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(field), "expected true or false, got '" + std::string(text) + "'");
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dataset",       "n_points",   "periods",        "a1",          "a2",
      "lambda1",       "lambda2",    "x_max",          "mass",        "spring",
      "friction",      "t_max",      "x0",             "v0",          "model",
      "shots",         "hidden_dim", "window_len",     "epochs",      "batch_size",
      "seed",          "init_seed",  "n_qubits",       "depth",       "project_input",
      "project_output", "clamp_lo",  "clamp_hi",       "train_fraction", "learning_rate",
      "decay",         "epsilon",    "shuffle",        "epoch_timing", "output"};
  return keys;
}

void ExperimentConfig::set(std::string_view raw_key, std::string_view value) {
  const std::string key = normalize_key(raw_key);
  auto real = [&] { return parse_real(key, value); };
  auto count = [&] { return parse_integer<std::size_t>(key, value); };
  try {
    if (key == "dataset") signal.kind = data::parse_signal_kind(value);
    else if (key == "n_points") signal.n_points = count();
    else if (key == "periods") signal.periods = real();
    else if (key == "a1") signal.waves.a1 = real();
    else if (key == "a2") signal.waves.a2 = real();
    else if (key == "lambda1") signal.waves.lambda1 = real();
    else if (key == "lambda2") signal.waves.lambda2 = real();
    else if (key == "x_max") signal.waves.x_max = real();
    else if (key == "mass") signal.oscillator.mass = real();
    else if (key == "spring") signal.oscillator.spring = real();
    else if (key == "friction") signal.oscillator.friction = real();
    else if (key == "t_max") signal.oscillator.t_max = real();
    else if (key == "x0") signal.oscillator.x0 = real();
    else if (key == "v0") signal.oscillator.v0 = real();
    else if (key == "model") model.kind = models::ModelSpec::parse_kind(value);
    else if (key == "shots") model.shots = count();
    else if (key == "hidden_dim") hidden_dim = count();
    else if (key == "window_len") window_len = count();
    else if (key == "epochs") epochs = count();
    else if (key == "batch_size") batch_size = count();
    else if (key == "seed") seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "init_seed") init_seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "n_qubits") n_qubits = count();
    else if (key == "depth") depth = count();
    else if (key == "project_input") project_input = parse_bool(key, value);
    else if (key == "project_output") project_output = parse_bool(key, value);
    else if (key == "clamp_lo") clamp_lo = parse_integer<long>(key, value);
    else if (key == "clamp_hi") clamp_hi = parse_integer<long>(key, value);
    else if (key == "train_fraction") train_fraction = real();
    else if (key == "learning_rate") optimizer.learning_rate = real();
    else if (key == "decay") optimizer.decay = real();
    else if (key == "epsilon") optimizer.epsilon = real();
    else if (key == "shuffle") shuffle = parse_bool(key, value);
    else if (key == "epoch_timing") epoch_timing = parse_bool(key, value);
    else if (key == "output") output_dir = std::string(value);
    else throw ConfigError(key, "unknown configuration key");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* message) {
    if (!ok) throw ConfigError(field, message);
  };
  require(hidden_dim >= 1, "hidden_dim", "must be >= 1");
  require(window_len >= 1, "window_len", "must be >= 1");
  require(epochs >= 1, "epochs", "must be >= 1");
  require(batch_size >= 1, "batch_size", "must be >= 1");
  require(model.shots >= 1, "shots", "must be >= 1");
  require(n_qubits >= 2 && n_qubits <= 12, "n_qubits", "must lie in [2, 12]");
  require(depth >= 1, "depth", "must be >= 1");
  require(clamp_lo < clamp_hi, "clamp_lo", "must be < clamp_hi");
  require(train_fraction > 0.0 && train_fraction < 1.0, "train_fraction", "must lie in (0, 1)");
  require(optimizer.learning_rate > 0.0, "learning_rate", "must be positive");
  require(optimizer.decay > 0.0 && optimizer.decay < 1.0, "decay", "must lie in (0, 1)");
  require(optimizer.epsilon > 0.0, "epsilon", "must be positive");
  require(signal.n_points >= window_len + 2, "n_points", "must be >= window_len + 2");
  require(!output_dir.empty(), "output", "must not be empty");

  using data::SignalKind;
  switch (signal.kind) {
    case SignalKind::Sine:
    case SignalKind::Sawtooth:
      require(signal.periods > 0.0, "periods", "must be positive");
      break;
    case SignalKind::SummedWaves:
      require(signal.waves.lambda1 > 0.0, "lambda1", "must be positive");
      require(signal.waves.lambda2 > 0.0, "lambda2", "must be positive");
      require(signal.waves.x_max > 0.0, "x_max", "must be positive");
      break;
    case SignalKind::DampedOscillator:
      require(signal.oscillator.mass > 0.0, "mass", "must be positive");
      require(signal.oscillator.spring > 0.0, "spring", "must be positive");
      require(signal.oscillator.friction > 0.0, "friction", "must be positive");
      require(signal.oscillator.t_max > 0.0, "t_max", "must be positive");
      require(signal.oscillator.damping_ratio() < 1.0, "friction",
              "oscillator must be underdamped (damping ratio < 1)");
      break;
  }

  const bool quantum = model.kind == models::ModelKind::QlstmAnalytic ||
                       model.kind == models::ModelKind::QlstmShots;
  if (quantum) {
    require(project_input || n_qubits == hidden_dim + 1, "project_input",
            "disabling requires n_qubits == hidden_dim + input_dim");
    require(project_output || n_qubits == hidden_dim, "project_output",
            "disabling requires n_qubits == hidden_dim");
  }
  const std::size_t pairs = signal.n_points - window_len;
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(pairs)));
  require(n_train >= 1 && n_train < pairs, "train_fraction",
          "leaves an empty training or validation split");
}

models::ModelConfig ExperimentConfig::model_config() const {
  models::ModelConfig mc;
  mc.dims = lstm::Dims{1, hidden_dim, 1};
  mc.n_qubits = n_qubits;
  mc.depth = depth;
  mc.project_input = project_input;
  mc.project_output = project_output;
  mc.clamp_lo = clamp_lo;
  mc.clamp_hi = clamp_hi;
  return mc;
}

train::TrainConfig ExperimentConfig::train_config() const {
  train::TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = batch_size;
  tc.optimizer = optimizer;
  tc.shuffle = shuffle;
  return tc;
}

namespace {

json config_object(const ExperimentConfig& c) {
  json j;
  j["dataset"] = data::to_string(c.signal.kind);
  j["n_points"] = c.signal.n_points;
  j["periods"] = c.signal.periods;
  j["a1"] = c.signal.waves.a1;
  j["a2"] = c.signal.waves.a2;
  j["lambda1"] = c.signal.waves.lambda1;
  j["lambda2"] = c.signal.waves.lambda2;
  j["x_max"] = c.signal.waves.x_max;
  j["mass"] = c.signal.oscillator.mass;
  j["spring"] = c.signal.oscillator.spring;
  j["friction"] = c.signal.oscillator.friction;
  j["t_max"] = c.signal.oscillator.t_max;
  j["x0"] = c.signal.oscillator.x0;
  j["v0"] = c.signal.oscillator.v0;
  j["model"] = c.model.kind_name();
  j["shots"] = c.model.shots;
  j["hidden_dim"] = c.hidden_dim;
  j["window_len"] = c.window_len;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  j["init_seed"] = c.effective_init_seed();
  j["n_qubits"] = c.n_qubits;
  j["depth"] = c.depth;
  j["project_input"] = c.project_input;
  j["project_output"] = c.project_output;
  j["clamp_lo"] = c.clamp_lo;
  j["clamp_hi"] = c.clamp_hi;
  j["train_fraction"] = c.train_fraction;
  j["learning_rate"] = c.optimizer.learning_rate;
  j["decay"] = c.optimizer.decay;
  j["epsilon"] = c.optimizer.epsilon;
  j["shuffle"] = c.shuffle;
  j["epoch_timing"] = c.epoch_timing;
  j["output"] = c.output_dir;
  j["eval_mode"] = c.model.eval_mode();
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_object(cfg).dump(2); }

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config")) j = j["config"];
  if (!j.is_object()) throw ParseError("configuration must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "eval_mode" || value.is_null()) continue;
    if (value.is_string()) cfg.set(key, value.get<std::string>());
    else if (value.is_boolean()) cfg.set(key, value.get<bool>() ? "true" : "false");
    else if (value.is_number()) cfg.set(key, value.dump());
    else throw ConfigError(key, "unsupported JSON value type");
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) { return config_from_json(read_text_file(path)); }

PreparedData prepare_data(const ExperimentConfig& cfg) {
  PreparedData d;
  auto [scaled, scaler] = data::scale_minmax(data::generate(cfg.signal));
  d.series = std::move(scaled);
  d.scaler = scaler;
  auto windows = data::make_windows(d.series, cfg.window_len);
  auto [train, val] = data::split_chronological(windows, cfg.train_fraction);
  d.train = std::move(train);
  d.val = std::move(val);
  return d;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  result.data = prepare_data(cfg);

  math::Prng init = math::Prng(cfg.effective_init_seed()).split();
  math::Prng run(cfg.seed);
  auto model = models::make_model(cfg.model, cfg.model_config(), init);
  result.record = train::train_model(*model, result.data.train, result.data.val, cfg.train_config(), run);
  return result;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_epochs_csv(const train::RunRecord& record, bool epoch_timing) {
  std::string out = "epoch,train_rmse,train_r2,val_rmse,val_r2,seconds\n";
  for (const auto& e : record.epochs) {
    out += std::to_string(e.epoch) + ',' + format_number(e.train_rmse) + ',' +
           format_number(e.train_r2) + ',' + format_number(e.val_rmse) + ',' +
           format_number(e.val_r2) + ',' + (epoch_timing ? format_number(e.seconds) : "0") + '\n';
  }
  return out;
}

std::string format_summary_json(const ExperimentResult& result) {
  const auto& best = result.record.best();
  json j;
  j["model"] = result.config.model.label();
  j["dataset"] = data::to_string(result.config.signal.kind);
  j["seed"] = result.config.seed;
  j["config"] = config_object(result.config);
  j["best_epoch"] = best.epoch;
  j["train_rmse"] = number_or_null(best.train_rmse);
  j["train_r2"] = number_or_null(best.train_r2);
  j["val_rmse"] = number_or_null(best.val_rmse);
  j["val_r2"] = number_or_null(best.val_r2);
  j["wall_seconds"] = result.record.wall_seconds;
  return j.dump(2) + "\n";
}

std::string format_dataset_csv(const std::vector<double>& series) {
  std::string out = "index,value\n";
  char buf[48];
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g\n", k, series[k]);
    out += buf;
  }
  return out;
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  const fs::path probe = dir / ".qslstm-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

void write_outputs(const ExperimentResult& result, const fs::path& dir) {
  ensure_writable_dir(dir);
  write_text_file(dir / "epochs.csv", format_epochs_csv(result.record, result.config.epoch_timing));
  write_text_file(dir / "summary.json", format_summary_json(result));
  write_text_file(dir / "dataset.csv", format_dataset_csv(result.data.series));
}

}  // namespace qsl::harness
