// Copyright 2026 The qcsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qcsynth/cli.hpp"
#include "qcsynth/errors.hpp"

using namespace qcsynth;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qcsynth");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("qcsynth_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("config text parsing") {
  const auto s = cli::parse_config_text("# comment\n\nalpha = 0.3  # inline\n episodes=7\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == std::pair<std::string, std::string>{"alpha", "0.3"});
  CHECK(s[1] == std::pair<std::string, std::string>{"episodes", "7"});
  try {
    cli::parse_config_text("alpha = 1\nnonsense\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("settings") {
  bench::ExperimentConfig c = bench::make_experiment("cz", bench::Algorithm::kQlearn);
  cli::apply_setting(c, "gamma", "0.5");
  CHECK(c.q.gamma == 0.5);
  CHECK(c.dqn.gamma == 0.5);
  cli::apply_setting(c, "hidden", "32, 16");
  CHECK(c.dqn.hidden == std::vector<int>{32, 16});
  cli::apply_setting(c, "use_expert", "false");
  CHECK_FALSE(c.use_expert);
  cli::apply_setting(c, "seed", "18446744073709551615");
  CHECK(c.seed == 18446744073709551615ull);
  CHECK_THROWS_AS(cli::apply_setting(c, "alpah", "1"), ConfigError);
  CHECK_THROWS_AS(cli::apply_setting(c, "episodes", "12x"), ConfigError);
  CHECK_THROWS_AS(cli::apply_setting(c, "encoding", "dense"), ConfigError);
}

TEST_CASE("train prints the Bell circuit and writes artifacts") {
  const fs::path dir = scratch("bell");
  const Run r = run({"train", "bell_phi_plus", "qlearn", "matrix", "section3", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("H0, CNOT01\n") != std::string::npos);
  for (const char* f : {"manifest.json", "report.json", "qtable.tsv", "states.tsv"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto m = load_json(dir / "manifest.json");
  CHECK(m["config"]["preset"] == "section3");
  CHECK(m["config"]["episodes"] == 500);
  CHECK(m["artifacts"]["qtable"] == "qtable.tsv");
  const auto report = load_json(dir / "report.json");
  CHECK(report["reports"][0]["round_results"][0]["circuit"] ==
        std::vector<std::string>{"H0", "CNOT01"});

  const Run ro = run({"rollout", dir.string()});
  CHECK(ro.code == cli::kOk);
  CHECK(ro.out.find("circuit: H0, CNOT01\n") != std::string::npos);
  CHECK(ro.out.find("target reached") != std::string::npos);

  const Run show = run({"show-qtable", (dir / "qtable.tsv").string()});
  CHECK(show.code == cli::kOk);
  CHECK(show.out.find("CNOT01") != std::string::npos);
  CHECK(show.out.find("100.000") != std::string::npos);
}

TEST_CASE("invalid combinations are validation errors") {
  CHECK(run({"train", "toffoli", "qlearn_tn"}).code == cli::kValidation);
  CHECK(run({"train", "toffoli", "qlearn", "tn"}).code == cli::kValidation);
  CHECK(run({"train", "cz", "dqn", "tn"}).code == cli::kValidation);
  CHECK(run({"train", "cz", "qlearn_tn", "matrix"}).code == cli::kValidation);
  CHECK(run({"train", "cz", "qlearn", "fast"}).code == cli::kValidation);
  CHECK(run({"train", "nope", "qlearn"}).code == cli::kValidation);
  CHECK(run({"train", "cz"}).code == cli::kValidation);
  CHECK(run({"bench", "cz", "qlearn", "--rounds", "0"}).code == cli::kValidation);
  CHECK(run({"bench", "toffoli", "qlearn_tn"}).code == cli::kValidation);
  CHECK(run({"bench", "cz", "qlearn", "--set", "alpha"}).code == cli::kValidation);
  CHECK(run({"verify", "--corrupt-gate", "Q"}).code == cli::kValidation);
  CHECK(run({"frobnicate"}).code == cli::kValidation);
  CHECK(run({}).code == cli::kValidation);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("unwritable output is a runtime error") {
  const fs::path file = scratch("blocker");
  fs::create_directories(file.parent_path());
  std::ofstream(file) << "x";
  const Run r = run({"train", "bell_phi_plus", "qlearn", "--out", (file / "sub").string()});
  CHECK(r.code == cli::kRuntime);
  CHECK(r.err.find("cannot create") != std::string::npos);
  CHECK(run({"show-qtable", (file.parent_path() / "missing.tsv").string()}).code == cli::kRuntime);
}

TEST_CASE("flags override the config file, which overrides the preset") {
  const fs::path dir = scratch("layers");
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.txt") << "preset = section3\nepisodes = 7\nalpha = 0.3\nseed = 4\n";
  const Run r = run({"train", "cz", "qlearn", "--config", (dir / "cfg.txt").string(), "--episodes",
                     "9", "--out", (dir / "run").string()});
  REQUIRE(r.code == cli::kOk);
  const auto c = load_json(dir / "run" / "manifest.json")["config"];
  CHECK(c["preset"] == "section3");
  CHECK(c["episodes"] == 9);
  CHECK(c["qlearn"]["alpha"] == 0.3);
  CHECK(c["qlearn"]["gamma"] == 0.9);
  CHECK(c["seed"] == 4);
}

TEST_CASE("bench table and report agree") {
  const fs::path dir = scratch("bench");
  const Run r = run({"bench", "bell_phi_plus", "all", "--rounds", "4", "--episodes", "30", "--out",
                     dir.string(), "--traces"});
  REQUIRE(r.code == cli::kOk);
  const auto report = load_json(dir / "report.json");
  CHECK(report["reports"].size() == 5);
  const std::string table = slurp(dir / "table.txt");
  CHECK(r.out.find(table) == 0);
  for (const auto& cell : report["reports"]) {
    const int pct = static_cast<int>(cell["ratio"].get<double>());
    CHECK(table.find(std::to_string(pct) + "%") != std::string::npos);
  }
  std::string traces = slurp(dir / "traces.jsonl");
  CHECK(std::count(traces.begin(), traces.end(), '\n') == 20);
  const auto m = load_json(dir / "manifest.json");
  CHECK(m["configs"].size() == 5);
  CHECK(m["artifacts"]["traces"] == "traces.jsonl");
}

TEST_CASE("a bench grid skips the undefined TN Toffoli cell") {
  const fs::path dir = scratch("grid");
  const Run r = run({"bench", "toffoli", "all", "--rounds", "1", "--episodes", "1", "--set",
                     "expert_passes=1", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(load_json(dir / "report.json")["reports"].size() == 4);
}

TEST_CASE("property: same seed gives byte-identical reports") {
  for (const std::vector<std::string>& cmd :
       {std::vector<std::string>{"train", "ghz", "qlearn_reverse", "--seed", "12"},
        std::vector<std::string>{"train", "bell_psi_plus", "dqn", "--seed", "5", "--episodes", "20"},
        std::vector<std::string>{"bench", "cz", "qlearn", "--rounds", "6", "--jobs", "3", "--traces"}}) {
    std::vector<std::string> files;
    for (int k = 0; k < 2; ++k) {
      const fs::path dir = scratch("det" + std::to_string(k));
      std::vector<std::string> args = cmd;
      args.insert(args.end(), {"--out", dir.string()});
      REQUIRE(run(args).code == cli::kOk);
      std::string all;
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() != "manifest.json") all += e.path().filename().string() + slurp(e.path());
      }
      files.push_back(all);
    }
    CHECK(files[0] == files[1]);
  }
}

TEST_CASE("walkthrough runs save a replayable table") {
  const fs::path dir = scratch("walk");
  const Run r = run({"train", "--walkthrough", "table1", "--seed", "1", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("Q(S0, H0)") != std::string::npos);
  const auto report = load_json(dir / "report.json");
  CHECK(std::abs(report["key_cells"][0]["learned"].get<double>() - 90.0) <= 1.0);
  CHECK(run({"rollout", dir.string()}).out.find("circuit: H0, CNOT01") != std::string::npos);
  CHECK(run({"train", "--walkthrough", "table1", "--preset", "appendix"}).code == cli::kValidation);
}

TEST_CASE("verify and tasks") {
  const Run ok = run({"verify"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.find("PASS iswap_equivalent_forms") != std::string::npos);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const Run bad = run({"verify", "--corrupt-gate", "CNOT"});
  CHECK(bad.code == cli::kVerification);
  CHECK(bad.out.find("FAIL bell_circuit_matrix") != std::string::npos);

  const Run t = run({"tasks", "--json"});
  REQUIRE(t.code == cli::kOk);
  const auto j = nlohmann::json::parse(t.out);
  CHECK(j.size() == 10);
  CHECK(j[9]["name"] == "toffoli");
  CHECK(j[9]["space_size"] == 97656);
}

TEST_CASE("output root follows the environment") {
  const fs::path root = scratch("envroot");
  ::setenv("QCSYNTH_OUT_DIR", root.string().c_str(), 1);
  CHECK(cli::default_out_root() == root.string());
  const Run r = run({"train", "swap", "qlearn", "--episodes", "5"});
  ::unsetenv("QCSYNTH_OUT_DIR");
  REQUIRE(r.code == cli::kOk);
  CHECK(fs::exists(root / "train-swap-qlearn-s0" / "manifest.json"));
  CHECK(cli::default_out_root() == "runs");
}
