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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcsynth/actions.hpp"
#include "qcsynth/gatealg.hpp"

namespace qcsynth::tasks {

/// Which action list to hand out for a representation. `kWalkthrough` is the
/// reduced Bell Phi+ set used for the small worked examples: five actions for
/// matrix/reverse, seventeen for TN.
enum class ActionSetVariant { kBenchmark, kWalkthrough };

struct ExpertTrajectory {
  std::vector<ActionSpec> actions;
  int repeat_count = 10;
};

struct TaskSpec {
  std::string name;
  std::string title;
  int n_qubits = 0;
  gatealg::UnitaryMatrix target_unitary;
  gatealg::StateVector target_state;  // target_unitary |0...0>
  std::vector<gatealg::GatePlacement> solution;
  int solution_length = 0;
  std::vector<std::string> gate_set;
  std::map<Representation, std::vector<ActionSpec>> action_sets;
  /// Reward used under the TN representation.
  RewardMode tn_reward = RewardMode::kStateOverlap;
  /// Catalogued state-space size for (matrix action count, solution length).
  std::uint64_t reference_space_size = 0;

  bool supports(Representation rep) const { return action_sets.contains(rep); }
};

/// bell_phi_plus, bell_phi_minus, bell_psi_plus, bell_psi_minus, swap, iswap,
/// cz, ghz, z3, toffoli.
const std::vector<std::string>& task_names();

/// Throws ConfigError for an unknown name.
const TaskSpec& get_task(std::string_view name);

/// Throws ConfigError when the task does not support the representation or
/// the variant does not exist for it.
std::vector<ActionSpec> action_set(const TaskSpec& task, Representation rep,
                                   ActionSetVariant variant = ActionSetVariant::kBenchmark);

struct SpaceSizeReport {
  std::uint64_t branching = 0;
  std::uint64_t depth = 0;
  std::uint64_t bound = 0;
};

/// Node count of a complete c-ary tree with b+1 levels:
/// c^0 + ... + c^b = (c^(b+1) - 1) / (c - 1), exact.
/// Throws ConfigError for c < 2 and std::overflow_error past 64 bits.
SpaceSizeReport space_size(std::uint64_t c, std::uint64_t b);

/// Only Toffoli carries an expert; the reverse form is the reversed,
/// inverted sequence.
std::optional<ExpertTrajectory> expert_trajectory(const TaskSpec& task, Representation rep,
                                                  int repeat_count = 10);

/// Alternative iSWAP construction (S on both qubits, H, two CNOTs, H) used to
/// cross-check the catalogued 5-gate form.
std::vector<gatealg::GatePlacement> iswap_alternative_circuit();

/// Canonical 8x8 Toffoli with controls on qubits 1, 2 and target qubit 0.
gatealg::UnitaryMatrix canonical_toffoli();

}  // namespace qcsynth::tasks
