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

#include "qcsynth/qlearning.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qcsynth::agents {

QTable::QTable(std::size_t n_actions) : n_actions_(n_actions) {
  if (n_actions == 0) throw ConfigError("Q-table needs at least one action");
}

std::span<double> QTable::row(std::size_t state) {
  if (state >= n_rows_) {
    n_rows_ = state + 1;
    values_.resize(n_rows_ * n_actions_, 0.0);
  }
  return std::span<double>(values_).subspan(state * n_actions_, n_actions_);
}

double QTable::at(std::size_t state, std::size_t action) const {
  if (action >= n_actions_) throw std::out_of_range("action index out of range");
  if (state >= n_rows_) return 0.0;
  return values_[state * n_actions_ + action];
}

double QTable::max_value(std::size_t state) const {
  if (state >= n_rows_) return 0.0;
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(state * n_actions_);
  return *std::max_element(first, first + static_cast<std::ptrdiff_t>(n_actions_));
}

std::size_t argmax_tie_break(std::span<const double> values, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty row");
  double best = values[0];
  std::size_t ties = 1;
  for (std::size_t a = 1; a < values.size(); ++a) {
    if (values[a] > best) {
      best = values[a];
      ties = 1;
    } else if (values[a] == best) {
      ++ties;
    }
  }
  std::size_t pick = 0;
  if (ties > 1) pick = std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng);
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] == best && pick-- == 0) return a;
  }
  return 0;
}

std::size_t greedy_action(const QTable& table, std::size_t state, Rng& rng) {
  std::vector<double> row(table.n_actions());
  for (std::size_t a = 0; a < row.size(); ++a) row[a] = table.at(state, a);
  return argmax_tie_break(row, rng);
}

std::size_t q_choose_action(QTable& table, std::size_t state, double epsilon, Rng& rng) {
  table.row(state);
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(0, table.n_actions() - 1)(rng);
  }
  return greedy_action(table, state, rng);
}

double q_update(QTable& table, std::size_t state, std::size_t action, double reward,
                std::size_t next_state, bool terminal, double alpha, double gamma) {
  table.row(next_state);
  const double future = terminal ? 0.0 : table.max_value(next_state);
  double& q = table.row(state)[action];
  q = (1.0 - alpha) * q + alpha * (reward + gamma * future);
  return q;
}

void QLearnConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (!(epsilon_min >= 0.0 && epsilon_min <= 1.0)) throw ConfigError("epsilon_min must lie in [0, 1]");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) {
    throw ConfigError("epsilon_decay must lie in (0, 1]");
  }
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
}

QTrainResult train_q(envs::Environment& env, const QLearnConfig& config,
                     const tasks::ExpertTrajectory* expert, Rng& rng) {
  config.validate();
  QTrainResult result{QTable(env.n_actions()), {}};
  QTable& table = result.table;
  const double success_reward = env.reward_rule().success_reward;

  if (expert) {
    struct Transition {
      std::size_t s, a;
      double r;
      std::size_t s_next;
      bool terminal;
    };
    std::vector<std::size_t> indices;
    for (const ActionSpec& a : expert->actions) {
      const auto idx = env.find_action(a);
      if (!idx) throw ConfigError("expert action " + a.label() + " is not in the action set");
      indices.push_back(*idx);
    }
    std::vector<Transition> pass;
    for (int rep = 0; rep < expert->repeat_count; ++rep) {
      pass.clear();
      std::size_t s = env.reset();
      for (std::size_t a : indices) {
        if (env.done()) break;
        const envs::StepResult r = env.step(a);
        pass.push_back({s, a, r.reward, r.next_index, r.reward >= success_reward});
        s = r.next_index;
      }
      for (const Transition& t : pass) {
        q_update(table, t.s, t.a, t.r, t.s_next, t.terminal, config.alpha, config.gamma);
      }
    }
  }

  double epsilon = config.epsilon;
  result.episodes.reserve(static_cast<std::size_t>(config.episodes));
  for (int ep = 0; ep < config.episodes; ++ep) {
    EpisodeTrace trace{ep, 0, 0.0, false, epsilon};
    std::size_t s = env.reset();
    for (int step = 0; step < config.max_steps; ++step) {
      const std::size_t a = q_choose_action(table, s, epsilon, rng);
      const envs::StepResult r = env.step(a);
      const bool success = r.reward >= success_reward;
      q_update(table, s, a, r.reward, r.next_index, success, config.alpha, config.gamma);
      trace.total_reward += r.reward;
      trace.success = trace.success || success;
      ++trace.steps;
      s = r.next_index;
      if (r.done) break;
    }
    result.episodes.push_back(trace);
    epsilon = std::max(config.epsilon_min, epsilon * config.epsilon_decay);
  }
  return result;
}

Rollout greedy_rollout(envs::Environment& env, const QTable& table, Rng& rng) {
  return greedy_rollout(
      env, [&table](std::size_t s, Rng& r) { return greedy_action(table, s, r); }, rng);
}

void write_qtable(std::ostream& os, const QTable& table, std::span<const ActionSpec> actions) {
  if (actions.size() != table.n_actions()) {
    throw std::invalid_argument("action label count does not match the Q-table");
  }
  os << "state";
  for (const ActionSpec& a : actions) os << '\t' << a.label();
  os << '\n';
  char buf[64];
  for (std::size_t s = 0; s < table.n_rows(); ++s) {
    os << s;
    for (std::size_t a = 0; a < table.n_actions(); ++a) {
      std::snprintf(buf, sizeof buf, "%.6f", table.at(s, a));
      os << '\t' << buf;
    }
    os << '\n';
  }
}

QTable read_qtable(std::istream& is, std::vector<std::string>* action_labels) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty Q-table file");
  std::istringstream header(line);
  std::string cell;
  std::getline(header, cell, '\t');
  if (cell != "state") throw std::runtime_error("Q-table header must start with 'state'");
  std::vector<std::string> labels;
  while (std::getline(header, cell, '\t')) labels.push_back(cell);
  if (labels.empty()) throw std::runtime_error("Q-table header lists no actions");

  QTable table(labels.size());
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t s = 0;
    if (!(row >> s) || s != expected) throw std::runtime_error("Q-table rows must be 0..n-1 in order");
    auto values = table.row(s);
    for (double& v : values) {
      if (!(row >> v)) throw std::runtime_error("Q-table row " + std::to_string(s) + " is short");
    }
    ++expected;
  }
  if (action_labels) *action_labels = std::move(labels);
  return table;
}

}  // namespace qcsynth::agents
