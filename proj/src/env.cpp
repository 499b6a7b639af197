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

#include "qcsynth/env.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qcsynth::envs {

using gatealg::Fingerprint;
using gatealg::StateVector;
using gatealg::UnitaryMatrix;

std::size_t StateRegistry::intern(const Fingerprint& key, const StateValue& value) {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  if (capacity_ && values_.size() >= *capacity_) {
    throw RegistryOverflow("state registry is full (" + std::to_string(*capacity_) +
                           " states)");
  }
  const std::size_t id = values_.size();
  index_.emplace(key, id);
  values_.push_back(value);
  return id;
}

std::optional<std::size_t> StateRegistry::find(const Fingerprint& key) const {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Environment::Environment(const tasks::TaskSpec& task, Representation rep,
                         std::vector<ActionSpec> actions, EnvOptions options)
    : rep_(rep),
      actions_(std::move(actions)),
      options_(options),
      n_qubits_(task.n_qubits),
      task_name_(task.name),
      registry_(options.registry_capacity) {
  if (!task.supports(rep)) {
    throw ConfigError("task '" + task.name + "' has no " + std::string(to_string(rep)) +
                      " representation");
  }
  if (actions_.empty()) throw ConfigError("environment needs at least one action");
  if (options_.max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (!(options_.threshold > 0.0 && options_.threshold <= 1.0)) {
    throw ConfigError("reward threshold must lie in (0, 1]");
  }
  for (const ActionSpec& a : actions_) {
    if (a.is_pair() && rep != Representation::kTn) {
      throw ConfigError("paired action " + a.label() + " outside the TN representation");
    }
    if (a.inverse && rep != Representation::kReverse) {
      throw ConfigError("inverted action " + a.label() + " outside the reverse representation");
    }
    action_matrices_.push_back(action_matrix(a, n_qubits_));
  }

  rule_.threshold = options_.threshold;
  rule_.success_reward = options_.success_reward;
  rule_.mode = rep == Representation::kTn ? task.tn_reward : RewardMode::kUnitaryTrace;

  const UnitaryMatrix identity = UnitaryMatrix::identity(n_qubits_);
  const StateVector zero = StateVector::basis(n_qubits_, 0);
  switch (rep) {
    case Representation::kMatrix:
      initial_ = {identity, {}};
      target_unitary_ = task.target_unitary;
      break;
    case Representation::kReverse:
      initial_ = {task.target_unitary, {}};
      target_unitary_ = identity;
      break;
    case Representation::kTn:
      initial_ = {identity, zero};
      target_unitary_ = task.target_unitary;
      target_state_ = task.target_state;
      break;
  }
  track_state_ = rep == Representation::kTn;
  track_unitary_ = rep != Representation::kTn || rule_.mode == RewardMode::kUnitaryTrace;

  reset();
}

std::size_t Environment::reset() {
  unitary_ = initial_.unitary;
  state_ = initial_.state;
  depth_ = 0;
  done_ = false;
  index_ = register_value(initial_);
  return index_;
}

Environment::Value Environment::advance(const Value& from, std::size_t action_index) const {
  const UnitaryMatrix& m = action_matrices_[action_index];
  Value next;
  if (track_unitary_) next.unitary = gatealg::compose(m, from.unitary);
  if (track_state_) next.state = gatealg::apply(m, from.state);
  return next;
}

std::size_t Environment::register_value(const Value& v) {
  if (track_state_) {
    return registry_.intern(gatealg::fingerprint(v.state, options_.fingerprint_tol), v.state);
  }
  return registry_.intern(gatealg::fingerprint(v.unitary, options_.fingerprint_tol), v.unitary);
}

double Environment::fidelity(const Value& v) const {
  if (rule_.mode == RewardMode::kStateOverlap) return gatealg::state_overlap(v.state, target_state_);
  return gatealg::trace_fidelity(v.unitary, target_unitary_);
}

std::string Environment::state_key(std::size_t index) const {
  return std::visit(
      [&](const auto& v) { return gatealg::fingerprint(v, options_.fingerprint_tol).to_string(); },
      registry_.value(index));
}

double Environment::current_fidelity() const { return fidelity(Value{unitary_, state_}); }

StepResult Environment::step(std::size_t action_index) {
  if (done_) throw std::logic_error("step() called on a finished episode; call reset()");
  if (action_index >= actions_.size()) {
    throw std::out_of_range("action index " + std::to_string(action_index) + " out of range");
  }
  Value next = advance(Value{unitary_, state_}, action_index);
  const std::size_t next_index = register_value(next);
  const bool success = fidelity(next) > rule_.threshold;
  unitary_ = std::move(next.unitary);
  state_ = std::move(next.state);
  index_ = next_index;
  ++depth_;
  done_ = success || depth_ >= options_.max_steps;
  return StepResult{next_index, success ? rule_.success_reward : 0.0, done_};
}

std::optional<std::size_t> Environment::find_action(const ActionSpec& action) const {
  auto it = std::find(actions_.begin(), actions_.end(), action);
  if (it == actions_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - actions_.begin());
}

StepResult Environment::step(const ActionSpec& action) {
  const auto idx = find_action(action);
  if (!idx) throw ConfigError("action " + action.label() + " is not in this environment's set");
  return step(*idx);
}

void Environment::expand_breadth_first(int depth) {
  if (depth < 0) throw std::invalid_argument("expansion depth must be >= 0");
  register_value(initial_);
  std::vector<Value> frontier{initial_};
  for (int level = 0; level < depth; ++level) {
    std::vector<Value> next_frontier;
    for (const Value& v : frontier) {
      for (std::size_t a = 0; a < actions_.size(); ++a) {
        Value child = advance(v, a);
        const std::size_t before = registry_.size();
        register_value(child);
        if (registry_.size() > before) next_frontier.push_back(std::move(child));
      }
    }
    frontier = std::move(next_frontier);
  }
}

Environment make_env(const tasks::TaskSpec& task, Representation rep, EnvOptions options) {
  return Environment(task, rep, tasks::action_set(task, rep, options.variant), options);
}

}  // namespace qcsynth::envs
