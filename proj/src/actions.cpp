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

#include "qcsynth/actions.hpp"

#include <algorithm>

namespace qcsynth {

using gatealg::GatePlacement;
using gatealg::UnitaryMatrix;

std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::kMatrix: return "matrix";
    case Representation::kReverse: return "reverse";
    case Representation::kTn: return "tn";
  }
  return "?";
}

Representation parse_representation(std::string_view name) {
  if (name == "matrix") return Representation::kMatrix;
  if (name == "reverse") return Representation::kReverse;
  if (name == "tn") return Representation::kTn;
  throw ConfigError("unknown representation '" + std::string(name) +
                    "' (expected matrix, reverse or tn)");
}

std::string_view to_string(RewardMode mode) {
  return mode == RewardMode::kUnitaryTrace ? "unitary_trace" : "state_overlap";
}

std::vector<GatePlacement> ActionSpec::effective_gates() const {
  std::vector<GatePlacement> out;
  out.push_back(inverse ? gatealg::inverse(first) : first);
  if (second) out.push_back(*second);
  return out;
}

std::string ActionSpec::label() const {
  if (second) return "(" + gatealg::label(first) + "," + gatealg::label(*second) + ")";
  return gatealg::label(inverse ? gatealg::inverse(first) : first);
}

ActionSpec single(GatePlacement gate) { return ActionSpec{std::move(gate), std::nullopt, false}; }

ActionSpec pair(GatePlacement first, GatePlacement second) {
  return ActionSpec{std::move(first), std::move(second), false};
}

ActionSpec inverted(const ActionSpec& action) {
  if (action.is_pair()) throw ConfigError("pair actions have no reverse form");
  ActionSpec out = action;
  out.inverse = !out.inverse;
  return out;
}

UnitaryMatrix action_matrix(const ActionSpec& action, int n_qubits) {
  UnitaryMatrix m = UnitaryMatrix::identity(n_qubits);
  for (const GatePlacement& g : action.effective_gates()) {
    m = gatealg::compose(gatealg::embed(g, n_qubits), m);
  }
  return m;
}

std::vector<GatePlacement> circuit_from_trajectory(std::span<const ActionSpec> actions,
                                                   Representation rep) {
  std::vector<GatePlacement> circuit;
  for (const ActionSpec& a : actions) {
    for (GatePlacement& g : a.effective_gates()) circuit.push_back(std::move(g));
  }
  if (rep == Representation::kReverse) {
    std::reverse(circuit.begin(), circuit.end());
    for (GatePlacement& g : circuit) g = gatealg::inverse(g);
  }
  return circuit;
}

std::string circuit_label(std::span<const GatePlacement> circuit) {
  std::string out;
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    if (i) out += ", ";
    out += gatealg::label(circuit[i]);
  }
  return out;
}

}  // namespace qcsynth
