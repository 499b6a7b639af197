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

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qcsynth/actions.hpp"
#include "qcsynth/gatealg.hpp"
#include "qcsynth/tasks.hpp"

namespace qcsynth::envs {

using StateValue = std::variant<gatealg::UnitaryMatrix, gatealg::StateVector>;

/// Maps state fingerprints to dense indices in first-seen order. Index 0 is
/// always the initial state. Each index keeps the first value that produced it.
class StateRegistry {
 public:
  explicit StateRegistry(std::optional<std::size_t> capacity = std::nullopt)
      : capacity_(capacity) {}

  /// Index of `key`, registering `value` under a fresh index if unseen.
  /// Throws RegistryOverflow when a new key would exceed the capacity.
  std::size_t intern(const gatealg::Fingerprint& key, const StateValue& value);

  std::optional<std::size_t> find(const gatealg::Fingerprint& key) const;

  std::size_t size() const { return values_.size(); }
  const StateValue& value(std::size_t index) const { return values_.at(index); }
  std::optional<std::size_t> capacity() const { return capacity_; }

 private:
  std::optional<std::size_t> capacity_;
  std::unordered_map<gatealg::Fingerprint, std::size_t, gatealg::FingerprintHash> index_;
  std::vector<StateValue> values_;
};

struct RewardRule {
  RewardMode mode = RewardMode::kUnitaryTrace;
  double threshold = 0.99;
  double success_reward = 100.0;
};

struct EnvOptions {
  int max_steps = 20;
  double threshold = 0.99;
  double success_reward = 100.0;
  double fingerprint_tol = gatealg::kDefaultFingerprintTol;
  /// Hard cap on distinct states; unset means unbounded.
  std::optional<std::size_t> registry_capacity;
  tasks::ActionSetVariant variant = tasks::ActionSetVariant::kBenchmark;
};

struct StepResult {
  std::size_t next_index = 0;
  double reward = 0.0;
  bool done = false;
};

/// One circuit-synthesis MDP. Single-threaded: holds the mutable episode.
///
/// matrix:  value = accumulated unitary, I -> target_unitary
/// reverse: value = remaining unitary, target_unitary -> I, inverted actions
/// tn:      value = state vector from |0...0>; tasks rewarded by unitary trace
///          also carry the accumulated unitary, but states are indexed by
///          the vector alone.
class Environment {
 public:
  Environment(const tasks::TaskSpec& task, Representation rep, std::vector<ActionSpec> actions,
              EnvOptions options = {});

  std::size_t reset();

  /// Throws std::out_of_range for a bad index, std::logic_error once done.
  StepResult step(std::size_t action_index);

  /// Looks the action up in the action set first; ConfigError if absent.
  StepResult step(const ActionSpec& action);

  std::optional<std::size_t> find_action(const ActionSpec& action) const;

  /// Registers every state reachable within `depth` actions of the initial
  /// state, breadth first in action order. Does not touch the episode.
  void expand_breadth_first(int depth);

  const std::vector<ActionSpec>& actions() const { return actions_; }
  std::size_t n_actions() const { return actions_.size(); }
  std::size_t registry_size() const { return registry_.size(); }
  const StateRegistry& registry() const { return registry_; }

  /// Fingerprint string of a registered state; stable across runs, unlike
  /// the index itself.
  std::string state_key(std::size_t index) const;

  Representation representation() const { return rep_; }
  const RewardRule& reward_rule() const { return rule_; }
  const EnvOptions& options() const { return options_; }
  int n_qubits() const { return n_qubits_; }
  const std::string& task_name() const { return task_name_; }

  std::size_t state_index() const { return index_; }
  int depth() const { return depth_; }
  bool done() const { return done_; }

  /// Accumulated unitary (matrix/reverse, and TN tasks rewarded by trace).
  const gatealg::UnitaryMatrix& current_unitary() const { return unitary_; }
  const gatealg::StateVector& current_state() const { return state_; }

  /// Fidelity of the current value against the target under the reward rule.
  double current_fidelity() const;

 private:
  struct Value {
    gatealg::UnitaryMatrix unitary;
    gatealg::StateVector state;
  };

  Value advance(const Value& from, std::size_t action_index) const;
  std::size_t register_value(const Value& v);
  double fidelity(const Value& v) const;

  Representation rep_;
  std::vector<ActionSpec> actions_;
  std::vector<gatealg::UnitaryMatrix> action_matrices_;
  EnvOptions options_;
  RewardRule rule_;
  int n_qubits_;
  std::string task_name_;
  bool track_unitary_;
  bool track_state_;

  gatealg::UnitaryMatrix target_unitary_;
  gatealg::StateVector target_state_;
  Value initial_;

  StateRegistry registry_;
  gatealg::UnitaryMatrix unitary_;
  gatealg::StateVector state_;
  std::size_t index_ = 0;
  int depth_ = 0;
  bool done_ = false;
};

/// Environment with the task's action set for `rep`. Throws ConfigError for
/// unsupported combinations (TN Toffoli, walkthrough sets outside Bell Phi+).
Environment make_env(const tasks::TaskSpec& task, Representation rep, EnvOptions options = {});

}  // namespace qcsynth::envs
