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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcsynth/gatealg.hpp"

namespace qcsynth {

/// How an environment encodes the partially built circuit.
enum class Representation {
  kMatrix,   // accumulated unitary, identity -> target
  kReverse,  // target -> identity under inverted actions
  kTn,       // evolving state vector from |0...0>, single and paired actions
};

std::string_view to_string(Representation rep);
Representation parse_representation(std::string_view name);

enum class RewardMode { kUnitaryTrace, kStateOverlap };

std::string_view to_string(RewardMode mode);

/// One environment action: a placed gate, or an ordered pair of placed gates
/// applied first-listed first. `inverse` marks reverse-representation actions,
/// whose matrix is the conjugate transpose of `first`.
struct ActionSpec {
  gatealg::GatePlacement first;
  std::optional<gatealg::GatePlacement> second;
  bool inverse = false;

  bool is_pair() const { return second.has_value(); }

  /// Gates in execution order, with `inverse` folded into the dagger flags.
  std::vector<gatealg::GatePlacement> effective_gates() const;

  /// "H0", "CNOT01^-1", "(H0,CNOT01)".
  std::string label() const;

  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

ActionSpec single(gatealg::GatePlacement gate);
ActionSpec pair(gatealg::GatePlacement first, gatealg::GatePlacement second);

/// The reverse-representation counterpart of a forward single action.
/// Throws ConfigError for pair actions.
ActionSpec inverted(const ActionSpec& action);

/// Full-register matrix of an action (second * first for pairs).
gatealg::UnitaryMatrix action_matrix(const ActionSpec& action, int n_qubits);

/// Recovers the forward circuit from an action trajectory. Matrix and TN
/// trajectories are flattened in order; reverse trajectories are reversed and
/// each action inverted.
std::vector<gatealg::GatePlacement> circuit_from_trajectory(std::span<const ActionSpec> actions,
                                                            Representation rep);

std::string circuit_label(std::span<const gatealg::GatePlacement> circuit);

}  // namespace qcsynth
