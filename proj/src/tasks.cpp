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

#include "qcsynth/tasks.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcsynth::tasks {

using gatealg::GateKind;
using gatealg::GatePlacement;
using gatealg::place;
using gatealg::StateVector;
using gatealg::UnitaryMatrix;

namespace {

GatePlacement H(int q) { return place(GateKind::H, {q}); }
GatePlacement T(int q) { return place(GateKind::T, {q}); }
GatePlacement S(int q) { return place(GateKind::S, {q}); }
GatePlacement X(int q) { return place(GateKind::X, {q}); }
GatePlacement Z(int q) { return place(GateKind::Z, {q}); }
GatePlacement CNOT(int c, int t) { return place(GateKind::CNOT, {c, t}); }
GatePlacement CP(int c, int t) { return place(GateKind::CP, {c, t}); }
GatePlacement CPinv(int c, int t) { return place(GateKind::CPinv, {c, t}); }

std::vector<ActionSpec> singles(std::initializer_list<GatePlacement> gates) {
  std::vector<ActionSpec> out;
  for (const GatePlacement& g : gates) out.push_back(single(g));
  return out;
}

std::vector<ActionSpec> reversed_set(const std::vector<ActionSpec>& forward) {
  std::vector<ActionSpec> out;
  for (const ActionSpec& a : forward) out.push_back(inverted(a));
  return out;
}

std::vector<ActionSpec> tn_bell_group() {
  std::vector<ActionSpec> a = singles({H(0), H(1), T(0), T(1), X(0), X(1), CNOT(0, 1)});
  a.push_back(pair(H(0), H(1)));
  a.push_back(pair(H(0), T(1)));
  a.push_back(pair(H(1), T(0)));
  a.push_back(pair(T(0), T(1)));
  a.push_back(pair(Z(0), Z(1)));
  a.push_back(pair(T(0), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), T(0)));
  a.push_back(pair(T(1), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), T(1)));
  a.push_back(pair(H(0), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), H(0)));
  a.push_back(pair(H(1), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), H(1)));
  return a;
}

std::vector<ActionSpec> tn_two_qubit_gate_group() {
  std::vector<ActionSpec> a = singles({H(0), H(1), T(0), T(1), CNOT(0, 1), CNOT(1, 0)});
  a.push_back(pair(H(0), H(1)));
  a.push_back(pair(H(0), T(1)));
  a.push_back(pair(H(1), T(0)));
  a.push_back(pair(T(0), T(1)));
  a.push_back(pair(CNOT(0, 1), CNOT(1, 0)));
  a.push_back(pair(CNOT(1, 0), CNOT(0, 1)));
  a.push_back(pair(T(0), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), T(0)));
  a.push_back(pair(T(1), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), T(1)));
  a.push_back(pair(H(0), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), H(0)));
  a.push_back(pair(H(1), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), H(1)));
  return a;
}

std::vector<ActionSpec> tn_three_qubit_group() {
  std::vector<ActionSpec> a = singles({H(0), H(1), H(2), T(0), S(0), S(1), S(2), T(1), T(2),
                                       CNOT(0, 1), CNOT(1, 2), CNOT(0, 2)});
  for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    a.push_back(pair(H(i), H(j)));
    a.push_back(pair(H(i), T(j)));
    a.push_back(pair(T(i), H(j)));
    a.push_back(pair(T(i), T(j)));
  }
  for (const GatePlacement& cx : {CNOT(0, 1), CNOT(0, 2), CNOT(1, 2)}) {
    for (int q = 0; q < 3; ++q) {
      a.push_back(pair(H(q), cx));
      a.push_back(pair(T(q), cx));
    }
  }
  a.push_back(pair(CNOT(0, 1), CNOT(0, 2)));
  a.push_back(pair(CNOT(0, 1), CNOT(1, 2)));
  a.push_back(pair(CNOT(0, 2), CNOT(1, 2)));
  return a;
}

std::vector<ActionSpec> bell_walkthrough_tn() {
  std::vector<ActionSpec> a = singles({H(0), H(1), T(0), T(1), CNOT(0, 1)});
  a.push_back(pair(H(0), H(1)));
  a.push_back(pair(H(0), T(1)));
  a.push_back(pair(H(1), T(0)));
  a.push_back(pair(T(0), T(1)));
  a.push_back(pair(T(0), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), T(0)));
  a.push_back(pair(T(1), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), T(1)));
  a.push_back(pair(H(0), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), H(0)));
  a.push_back(pair(H(1), CNOT(0, 1)));
  a.push_back(pair(CNOT(0, 1), H(1)));
  return a;
}

std::vector<GatePlacement> toffoli_circuit() {
  return {H(0), CP(1, 0), CNOT(2, 1), CPinv(1, 0), CNOT(2, 1), CP(2, 0), H(0)};
}

struct TaskDraft {
  std::string name;
  std::string title;
  int n_qubits;
  std::vector<GatePlacement> solution;
  std::vector<std::string> gate_set;
  std::vector<ActionSpec> matrix_actions;
  std::optional<std::vector<ActionSpec>> tn_actions;
  RewardMode tn_reward;
  std::uint64_t reference_space_size;
};

TaskSpec finish(TaskDraft d) {
  TaskSpec t;
  t.name = std::move(d.name);
  t.title = std::move(d.title);
  t.n_qubits = d.n_qubits;
  t.solution = std::move(d.solution);
  t.solution_length = static_cast<int>(t.solution.size());
  t.target_unitary = gatealg::circuit_unitary(t.solution, t.n_qubits);
  t.target_state = gatealg::apply(t.target_unitary, StateVector::basis(t.n_qubits, 0));
  t.gate_set = std::move(d.gate_set);
  t.action_sets[Representation::kReverse] = reversed_set(d.matrix_actions);
  t.action_sets[Representation::kMatrix] = std::move(d.matrix_actions);
  if (d.tn_actions) t.action_sets[Representation::kTn] = std::move(*d.tn_actions);
  t.tn_reward = d.tn_reward;
  t.reference_space_size = d.reference_space_size;
  return t;
}

std::vector<TaskSpec> build_catalog() {
  const std::vector<std::string> htc{"H", "CNOT", "T"};
  const auto two_qubit_std = [] {
    return singles({H(0), H(1), T(0), T(1), CNOT(0, 1), CNOT(1, 0)});
  };
  const auto bell_x = [] { return singles({H(0), H(1), T(0), X(0), X(1), CNOT(0, 1)}); };

  std::vector<TaskSpec> c;
  c.push_back(finish({"bell_phi_plus", "Bell state |Phi+>", 2, {H(0), CNOT(0, 1)}, htc,
                      two_qubit_std(), tn_bell_group(), RewardMode::kStateOverlap, 43}));
  c.push_back(finish({"bell_phi_minus", "Bell state |Phi->", 2, {X(0), H(0), CNOT(0, 1)},
                      {"H", "CNOT", "T", "X"}, bell_x(), tn_bell_group(),
                      RewardMode::kStateOverlap, 259}));
  c.push_back(finish({"bell_psi_plus", "Bell state |Psi+>", 2, {H(0), X(1), CNOT(0, 1)},
                      {"H", "CNOT", "T", "X"}, bell_x(), tn_bell_group(),
                      RewardMode::kStateOverlap, 259}));
  c.push_back(finish({"bell_psi_minus", "Bell state |Psi->", 2,
                      {H(0), X(1), Z(0), Z(1), CNOT(0, 1)}, {"H", "CNOT", "T", "X", "Z"},
                      singles({H(0), H(1), T(0), X(0), X(1), Z(0), Z(1), CNOT(0, 1)}),
                      tn_bell_group(), RewardMode::kStateOverlap, 37449}));
  c.push_back(finish({"swap", "SWAP gate", 2, {CNOT(1, 0), CNOT(0, 1), CNOT(1, 0)}, htc,
                      two_qubit_std(), tn_two_qubit_gate_group(), RewardMode::kUnitaryTrace,
                      259}));
  c.push_back(finish({"iswap", "iSWAP gate", 2,
                      {CNOT(0, 1), T(1), T(1), CNOT(1, 0), CNOT(0, 1)}, htc, two_qubit_std(),
                      tn_two_qubit_gate_group(), RewardMode::kUnitaryTrace, 9331}));
  c.push_back(finish({"cz", "CZ gate", 2, {H(0), CNOT(1, 0), H(0)}, htc, two_qubit_std(),
                      tn_two_qubit_gate_group(), RewardMode::kUnitaryTrace, 259}));
  c.push_back(finish({"ghz", "GHZ state", 3, {H(0), CNOT(0, 1), CNOT(1, 2)}, htc,
                      singles({H(0), H(1), H(2), T(0), T(1), T(2), CNOT(0, 1), CNOT(1, 2)}),
                      tn_three_qubit_group(), RewardMode::kStateOverlap, 585}));
  c.push_back(finish({"z3", "Z gate (3 qubits)", 3, {S(0), S(0)}, {"H", "CNOT", "T", "S"},
                      singles({H(0), H(1), H(2), T(0), T(1), T(2), S(0), S(1), S(2),
                               CNOT(0, 1)}),
                      tn_three_qubit_group(), RewardMode::kUnitaryTrace, 111}));
  c.push_back(finish({"toffoli", "Toffoli gate", 3, toffoli_circuit(),
                      {"H", "CNOT", "CP", "CPinv"},
                      singles({CNOT(2, 1), H(0), CP(1, 0), CPinv(1, 0), CP(2, 0)}),
                      std::nullopt, RewardMode::kUnitaryTrace, 97656}));
  return c;
}

const std::vector<TaskSpec>& catalog() {
  static const std::vector<TaskSpec> tasks = build_catalog();
  return tasks;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const TaskSpec& t : catalog()) n.push_back(t.name);
    return n;
  }();
  return names;
}

const TaskSpec& get_task(std::string_view name) {
  for (const TaskSpec& t : catalog()) {
    if (t.name == name) return t;
  }
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

std::vector<ActionSpec> action_set(const TaskSpec& task, Representation rep,
                                   ActionSetVariant variant) {
  if (!task.supports(rep)) {
    throw ConfigError("task '" + task.name + "' has no " + std::string(to_string(rep)) +
                      " representation");
  }
  if (variant == ActionSetVariant::kBenchmark) return task.action_sets.at(rep);
  if (task.name != "bell_phi_plus") {
    throw ConfigError("walkthrough action sets exist only for bell_phi_plus");
  }
  const auto forward = singles({H(0), H(1), T(0), T(1), CNOT(0, 1)});
  switch (rep) {
    case Representation::kMatrix: return forward;
    case Representation::kReverse: return reversed_set(forward);
    case Representation::kTn: return bell_walkthrough_tn();
  }
  return {};
}

SpaceSizeReport space_size(std::uint64_t c, std::uint64_t b) {
  if (c < 2) throw ConfigError("space_size needs a branching factor >= 2");
  // Horner form of 1 + c + ... + c^b keeps every intermediate below the result.
  std::uint64_t total = 1;
  for (std::uint64_t level = 0; level < b; ++level) {
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(total, c, &next) || __builtin_add_overflow(next, 1, &next)) {
      throw std::overflow_error("state-space size exceeds 64-bit range");
    }
    total = next;
  }
  return SpaceSizeReport{c, b, total};
}

std::optional<ExpertTrajectory> expert_trajectory(const TaskSpec& task, Representation rep,
                                                  int repeat_count) {
  if (task.name != "toffoli") return std::nullopt;
  std::vector<ActionSpec> forward;
  for (const GatePlacement& g : toffoli_circuit()) forward.push_back(single(g));
  if (rep == Representation::kMatrix) return ExpertTrajectory{forward, repeat_count};
  if (rep == Representation::kReverse) {
    // The reverse env peels gates off the target from the last one applied.
    std::vector<ActionSpec> backward;
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) backward.push_back(inverted(*it));
    return ExpertTrajectory{backward, repeat_count};
  }
  return std::nullopt;
}

std::vector<GatePlacement> iswap_alternative_circuit() {
  return {S(0), S(1), H(0), CNOT(0, 1), CNOT(1, 0), H(1)};
}

UnitaryMatrix canonical_toffoli() {
  UnitaryMatrix u = UnitaryMatrix::identity(3);
  // |q0 q1 q2> = |0 1 1> (index 3) <-> |1 1 1> (index 7)
  u(3, 3) = 0.0;
  u(7, 7) = 0.0;
  u(3, 7) = 1.0;
  u(7, 3) = 1.0;
  return u;
}

}  // namespace qcsynth::tasks
