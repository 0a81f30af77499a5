// Copyright 2026 The qslstm Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qslstm-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string err;
};

// Runs the CLI with stderr captured to a file.
Result cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(QSLSTM_CLI) + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("run writes one row per epoch") {
  const fs::path dir = scratch("rows");
  const Result r = cli("run --dataset sine --model classic --seed 7 -o " + (dir / "out").string(), dir);
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "out" / "epochs.csv");
  CHECK(lines(csv) == 101);
  CHECK(csv.rfind("epoch,train_rmse,train_r2,val_rmse,val_r2,seconds\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary["seed"] == 7);
}

TEST_CASE("shot count is echoed in the summary") {
  const fs::path dir = scratch("shots");
  const Result r = cli("run --model slstm-shots --shots 100 --epochs 1 -q -o " + (dir / "out").string(), dir);
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary["config"]["shots"] == 100);
  CHECK(summary["model"] == "slstm-shots-100");
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = scratch("rerun");
  const std::string common = "run --dataset sawtooth --model slstm-shots --shots 2 --epochs 5 --seed 11 -q -o ";
  REQUIRE(cli(common + (dir / "a").string(), dir).code == 0);
  REQUIRE(cli(common + (dir / "b").string(), dir).code == 0);
  CHECK(slurp(dir / "a" / "epochs.csv") == slurp(dir / "b" / "epochs.csv"));
  CHECK(slurp(dir / "a" / "dataset.csv") == slurp(dir / "b" / "dataset.csv"));
}

TEST_CASE("config file reproduces a run") {
  const fs::path dir = scratch("config");
  REQUIRE(cli("run --model classic --epochs 3 --seed 4 -q -o " + (dir / "a").string(), dir).code == 0);
  REQUIRE(cli("run --config " + (dir / "a" / "summary.json").string() + " -q -o " + (dir / "b").string(), dir)
              .code == 0);
  CHECK(slurp(dir / "a" / "epochs.csv") == slurp(dir / "b" / "epochs.csv"));
}

TEST_CASE("bad configuration exits nonzero naming the field") {
  const fs::path dir = scratch("bad");
  Result r = cli("run --hidden-dim zero -o " + (dir / "out").string(), dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("hidden_dim") != std::string::npos);
  r = cli("run --learning-rate -2 -o " + (dir / "out").string(), dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("learning_rate") != std::string::npos);
  r = cli("run --dataset square -o " + (dir / "out").string(), dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("dataset") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "epochs.csv"));
}

TEST_CASE("unwritable output path exits nonzero") {
  const fs::path dir = scratch("unwritable");
  std::ofstream(dir / "file") << "x";
  const Result r = cli("run --epochs 1 -o " + (dir / "file" / "out").string(), dir);
  CHECK(r.code != 0);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("table and convergence subcommands") {
  const fs::path dir = scratch("reports");
  for (const char* model : {"classic", "slstm-shots --shots 3"}) {
    const std::string name = std::string(model).substr(0, 5);
    REQUIRE(cli(std::string("run --epochs 2 -q --model ") + model + " -o " + (dir / name).string(), dir).code == 0);
  }
  Result r = cli("table " + (dir / "class" / "summary.json").string() + " " + (dir / "slstm" / "summary.json").string() +
                     " --csv " + (dir / "table.csv").string(),
                 dir);
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "table.csv")) == 3);

  r = cli("convergence " + (dir / "class" / "epochs.csv").string() + " " + (dir / "slstm" / "epochs.csv").string() +
              " -o " + (dir / "conv.csv").string(),
          dir);
  CHECK(r.code == 0);
  const std::string conv = slurp(dir / "conv.csv");
  CHECK(lines(conv) == 5);
  CHECK(conv.find("slstm-shots-3,2,") != std::string::npos);

  std::ofstream(dir / "broken.json") << "nope";
  r = cli("table " + (dir / "broken.json").string(), dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("broken.json") != std::string::npos);
}
