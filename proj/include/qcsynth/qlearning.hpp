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

#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qcsynth/env.hpp"
#include "qcsynth/tasks.hpp"

namespace qcsynth::agents {

using Rng = std::mt19937_64;

/// Tabular action values. Rows are created on first touch and start at zero.
class QTable {
 public:
  explicit QTable(std::size_t n_actions = 1);

  std::size_t n_actions() const { return n_actions_; }
  std::size_t n_rows() const { return n_rows_; }

  /// Mutable row; grows the table through `state`.
  std::span<double> row(std::size_t state);

  /// Value lookup that treats missing rows as zeros.
  double at(std::size_t state, std::size_t action) const;
  double max_value(std::size_t state) const;

  void set(std::size_t state, std::size_t action, double value) { row(state)[action] = value; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t n_actions_;
  std::size_t n_rows_ = 0;
  std::vector<double> values_;
};

/// epsilon-greedy: uniform action with probability epsilon, otherwise an
/// argmax of the row with ties broken uniformly.
std::size_t q_choose_action(QTable& table, std::size_t state, double epsilon, Rng& rng);

/// Index of a maximum entry, ties broken uniformly. The rng is only drawn
/// from when there is more than one maximum.
std::size_t argmax_tie_break(std::span<const double> values, Rng& rng);

/// Argmax with uniform tie-breaking; missing rows count as all-zero.
std::size_t greedy_action(const QTable& table, std::size_t state, Rng& rng);

/// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a')).
/// A terminal transition drops the future term. Returns the new value.
double q_update(QTable& table, std::size_t state, std::size_t action, double reward,
                std::size_t next_state, bool terminal, double alpha, double gamma);

struct QLearnConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 1.0;
  double epsilon_decay = 0.99;
  double epsilon_min = 0.05;
  int episodes = 100;
  int max_steps = 20;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct EpisodeTrace {
  int episode = 0;
  int steps = 0;
  double total_reward = 0.0;
  bool success = false;
  double epsilon = 0.0;
};

struct QTrainResult {
  QTable table;
  std::vector<EpisodeTrace> episodes;
};

/// Runs `config.episodes` epsilon-greedy episodes. With an expert, first
/// replays it `expert->repeat_count` times, applying the update to each pass's
/// recorded transitions in order once the pass ends.
QTrainResult train_q(envs::Environment& env, const QLearnConfig& config,
                     const tasks::ExpertTrajectory* expert, Rng& rng);

struct Rollout {
  bool success = false;
  std::vector<std::size_t> action_indices;
  std::vector<ActionSpec> actions;
};

/// One episode with exploration disabled. `choose(state, rng)` picks the
/// action index.
template <typename Policy>
  requires std::invocable<Policy&, std::size_t, Rng&>
Rollout greedy_rollout(envs::Environment& env, Policy&& choose, Rng& rng) {
  Rollout out;
  std::size_t state = env.reset();
  while (!env.done()) {
    const std::size_t a = choose(state, rng);
    const envs::StepResult r = env.step(a);
    out.action_indices.push_back(a);
    out.actions.push_back(env.actions()[a]);
    state = r.next_index;
    if (r.reward >= env.reward_rule().success_reward) out.success = true;
  }
  return out;
}

Rollout greedy_rollout(envs::Environment& env, const QTable& table, Rng& rng);

/// Tab-separated export: a header of action labels, then one row per state
/// index. Values print with 6 decimals.
void write_qtable(std::ostream& os, const QTable& table, std::span<const ActionSpec> actions);

/// Reads the format written by write_qtable. Throws std::runtime_error on
/// malformed input.
QTable read_qtable(std::istream& is, std::vector<std::string>* action_labels = nullptr);

}  // namespace qcsynth::agents
