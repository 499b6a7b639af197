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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcsynth/dqn.hpp"
#include "qcsynth/qlearning.hpp"

namespace qcsynth::bench {

enum class Algorithm { kQlearn, kQlearnReverse, kDqn, kDqnReverse, kQlearnTn };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);
const std::vector<Algorithm>& all_algorithms();
Representation representation_of(Algorithm a);
bool is_dqn(Algorithm a);

/// False only for the Toffoli TN cell, which has no action set.
bool is_defined(const std::string& task, Algorithm a);

enum class Preset { kSection3, kAppendix };

std::string to_string(Preset p);
Preset parse_preset(const std::string& s);

/// section3: alpha 0.5, gamma 0.9, epsilon 0.2 fixed, 500 episodes.
/// appendix: alpha 0.1, gamma 0.95, epsilon 1.0 x0.99 down to 0.05, 100 episodes.
agents::QLearnConfig q_preset(Preset p);
/// section3: gamma 0.9, epsilon 0.2 fixed, soft target tau 0.1 every episode.
/// appendix: epsilon 0.9 x0.995 down to 0.05, hard target every 100 episodes.
agents::DqnConfig dqn_preset(Preset p);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t round_seed(std::uint64_t base_seed, int round_index);

struct ExperimentConfig {
  std::string task = "bell_phi_plus";
  Algorithm algorithm = Algorithm::kQlearn;
  Preset preset = Preset::kAppendix;
  int rounds = 100;
  int episodes = 100;
  int max_steps = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// Greedy rollouts per round; the round succeeds if any of them does.
  int rollouts = 1;
  /// Inject the task's expert trajectory when it defines one.
  bool use_expert = true;
  double threshold = 0.99;
  double success_reward = 100.0;

  /// Agent hyperparameters; episodes and max_steps are taken from above.
  agents::QLearnConfig q;
  agents::DqnConfig dqn;

  /// Throws ConfigError on invalid values or an undefined task/algorithm cell.
  void validate() const;
};

/// Experiment with the agent settings of `preset` and its episode count.
ExperimentConfig make_experiment(const std::string& task, Algorithm algorithm,
                                 Preset preset = Preset::kAppendix);

struct RoundResult {
  int round_index = 0;
  std::uint64_t seed = 0;
  int trained_episodes = 0;
  int training_successes = 0;
  bool success = false;
  std::vector<std::string> greedy_trajectory;
  /// Circuit rebuilt from the trajectory, as gate labels in time order.
  std::vector<std::string> circuit;
  double final_fidelity = 0.0;
  double wall_time = 0.0;
  std::vector<agents::EpisodeTrace> episodes;
};

RoundResult run_round(const ExperimentConfig& config, int round_index);

/// A round together with what it learned.
struct TrainedRound {
  RoundResult result;
  std::vector<ActionSpec> actions;
  /// Set for Q-learning algorithms.
  std::optional<agents::QTable> table;
  /// Set for DQN algorithms.
  std::optional<agents::PolicyNet> net;
  /// Fingerprint key of every state index the round registered, in order.
  std::vector<std::string> state_keys;
};

TrainedRound train_round(const ExperimentConfig& config, int round_index);

/// Environment options implied by the experiment (no registry cap).
envs::EnvOptions env_options(const ExperimentConfig& config);

struct BenchReport {
  std::string task;
  Algorithm algorithm = Algorithm::kQlearn;
  int rounds = 0;
  int completed_rounds = 0;
  int successes = 0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  ExperimentConfig config;
  std::vector<RoundResult> round_results;
  std::optional<std::string> error;
};

/// Runs every round on `config.jobs` threads. A failing round stops further
/// scheduling; finished rounds are kept and the message lands in `error`.
BenchReport run_benchmark(const ExperimentConfig& config);

/// Machine-readable forms. Timing is left out so equal seeds give equal bytes.
std::string config_json(const ExperimentConfig& config, int indent = -1);
std::string report_json(const std::vector<BenchReport>& reports, int indent = 2,
                        bool include_rounds = false);
/// Inverse of config_json. Throws ConfigError on missing or malformed keys.
ExperimentConfig config_from_json(const std::string& text);
std::string traces_jsonl(const BenchReport& report);

/// Text table with one row per task and one column per algorithm.
std::string render_table(const std::vector<BenchReport>& reports);

enum class Walkthrough { kTable1, kTable2, kTable3 };

std::string to_string(Walkthrough w);
Walkthrough parse_walkthrough(const std::string& s);

struct KeyCell {
  std::size_t state = 0;
  std::size_t action = 0;
  std::string action_label;
  double expected = 0.0;
  double learned = 0.0;
};

struct WalkthroughResult {
  Walkthrough which = Walkthrough::kTable1;
  agents::QTable table;
  std::vector<ActionSpec> actions;
  std::vector<KeyCell> key_cells;
  agents::Rollout rollout;
  std::vector<std::string> state_keys;
};

/// table1 matrix, table2 reverse, table3 TN.
Representation walkthrough_representation(Walkthrough which);

/// Section-3 preset on the Bell walkthrough environment. Matrix and reverse
/// runs pre-register the depth-1 children so state numbers follow the tree.
WalkthroughResult reproduce_walkthrough(Walkthrough which, std::uint64_t seed,
                                        int episodes = 500);

}  // namespace qcsynth::bench
