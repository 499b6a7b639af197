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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcsynth/env.hpp"

using namespace qcsynth;
using namespace qcsynth::gatealg;
using namespace qcsynth::envs;
using tasks::ActionSetVariant;
using tasks::get_task;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

UnitaryMatrix bell_unitary() {
  return UnitaryMatrix(2, {kR, 0, kR, 0, 0, kR, 0, kR, 0, kR, 0, -kR, kR, 0, -kR, 0});
}
UnitaryMatrix h0_matrix() {
  return UnitaryMatrix(2, {kR, 0, kR, 0, 0, kR, 0, kR, kR, 0, -kR, 0, 0, kR, 0, -kR});
}

ActionSpec act(GateKind k, std::initializer_list<int> q) { return single(place(k, q)); }

EnvOptions walkthrough() {
  EnvOptions o;
  o.variant = ActionSetVariant::kWalkthrough;
  return o;
}

}  // namespace

TEST_CASE("make_env configurations") {
  const auto& bell = get_task("bell_phi_plus");
  Environment m = make_env(bell, Representation::kMatrix);
  CHECK(m.n_actions() == 6);
  CHECK(max_abs_diff(m.current_unitary(), UnitaryMatrix::identity(2)) == 0.0);
  CHECK(m.reward_rule().mode == RewardMode::kUnitaryTrace);
  CHECK(m.reward_rule().threshold == 0.99);
  CHECK(m.options().max_steps == 20);

  Environment r = make_env(bell, Representation::kReverse);
  CHECK(max_abs_diff(r.current_unitary(), bell_unitary()) < 1e-15);

  Environment tn = make_env(bell, Representation::kTn);
  CHECK(tn.reward_rule().mode == RewardMode::kStateOverlap);
  CHECK(make_env(get_task("swap"), Representation::kTn).reward_rule().mode ==
        RewardMode::kUnitaryTrace);

  CHECK_THROWS_AS(make_env(get_task("toffoli"), Representation::kTn), ConfigError);
  EnvOptions bad;
  bad.max_steps = 0;
  CHECK_THROWS_AS(make_env(bell, Representation::kMatrix, bad), ConfigError);
  // pair actions outside TN are rejected
  CHECK_THROWS_AS(Environment(bell, Representation::kMatrix,
                              {pair(place(GateKind::H, {0}), place(GateKind::CNOT, {0, 1}))}),
                  ConfigError);
}

TEST_CASE("reset returns the initial index") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix);
  CHECK(env.reset() == 0);
  env.step(0);
  env.step(2);
  CHECK(env.depth() == 2);
  CHECK(env.reset() == 0);
  CHECK(env.depth() == 0);
  CHECK(env.reset() == 0);
  CHECK(max_abs_diff(env.current_unitary(), UnitaryMatrix::identity(2)) == 0.0);
}

TEST_CASE("matrix walkthrough: H0 then CNOT01") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix, walkthrough());
  const StepResult s1 = env.step(act(GateKind::H, {0}));
  CHECK(max_abs_diff(env.current_unitary(), h0_matrix()) < 1e-12);
  CHECK(s1.reward == 0.0);
  CHECK_FALSE(s1.done);
  CHECK(s1.next_index == 1);

  const StepResult s2 = env.step(act(GateKind::CNOT, {0, 1}));
  CHECK(max_abs_diff(env.current_unitary(), bell_unitary()) < 1e-12);
  CHECK(s2.reward == 100.0);
  CHECK(s2.done);
  CHECK(env.current_fidelity() > 0.99);

  CHECK_THROWS_AS(env.step(0), std::logic_error);
}

TEST_CASE("reverse walkthrough: CNOT01^-1 then H0^-1") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kReverse, walkthrough());
  CHECK(env.reset() == 0);
  const StepResult s1 = env.step(inverted(act(GateKind::CNOT, {0, 1})));
  CHECK(max_abs_diff(env.current_unitary(), h0_matrix()) < 1e-12);
  CHECK(s1.reward == 0.0);
  const StepResult s2 = env.step(inverted(act(GateKind::H, {0})));
  CHECK(max_abs_diff(env.current_unitary(), UnitaryMatrix::identity(2)) < 1e-12);
  CHECK(s2.reward == 100.0);
  CHECK(s2.done);
}

TEST_CASE("TN walkthrough: paired action reaches the Bell state in one step") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kTn, walkthrough());
  CHECK(env.n_actions() == 17);
  const StepResult s = env.step(pair(place(GateKind::H, {0}), place(GateKind::CNOT, {0, 1})));
  CHECK(max_abs_diff(env.current_state(), StateVector(2, {kR, 0, 0, kR})) < 1e-12);
  CHECK(s.reward == 100.0);
  CHECK(s.done);
}

TEST_CASE("TN gate tasks are rewarded on the tracked unitary") {
  Environment env = make_env(get_task("swap"), Representation::kTn);
  const StepResult a = env.step(act(GateKind::CNOT, {1, 0}));
  CHECK(a.next_index == 0);  // |00> is unchanged
  CHECK(a.reward == 0.0);
  const StepResult b =
      env.step(pair(place(GateKind::CNOT, {0, 1}), place(GateKind::CNOT, {1, 0})));
  CHECK(b.next_index == 0);
  CHECK(b.reward == 100.0);
  CHECK(b.done);
}

TEST_CASE("step errors") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix);
  CHECK_THROWS_AS(env.step(6), std::out_of_range);
  CHECK_THROWS_AS(env.step(act(GateKind::X, {0})), ConfigError);
  // reverse envs only accept the inverted forms
  Environment rev = make_env(get_task("bell_phi_plus"), Representation::kReverse);
  CHECK_THROWS_AS(rev.step(act(GateKind::H, {0})), ConfigError);
}

TEST_CASE("episode ends at the step limit with zero reward") {
  EnvOptions o;
  o.max_steps = 3;
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix, o);
  CHECK_FALSE(env.step(2).done);
  CHECK_FALSE(env.step(2).done);
  const StepResult last = env.step(2);
  CHECK(last.done);
  CHECK(last.reward == 0.0);
}

TEST_CASE("circuit_from_trajectory") {
  const ActionSpec h0 = act(GateKind::H, {0});
  const ActionSpec cx = act(GateKind::CNOT, {0, 1});
  const std::vector<ActionSpec> rev{inverted(cx), inverted(h0)};
  CHECK(circuit_label(circuit_from_trajectory(rev, Representation::kReverse)) == "H0, CNOT01");
  const std::vector<ActionSpec> fwd{h0, cx};
  CHECK(circuit_label(circuit_from_trajectory(fwd, Representation::kMatrix)) == "H0, CNOT01");
  const std::vector<ActionSpec> tn{pair(h0.first, cx.first)};
  CHECK(circuit_label(circuit_from_trajectory(tn, Representation::kTn)) == "H0, CNOT01");
}

TEST_CASE("registry: breadth-first expansion and deduplication") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix, walkthrough());
  CHECK(env.registry_size() == 1);

  // Oracle: all 31 tree nodes as nested-vector products, deduplicated by
  // pairwise trace fidelity.
  using oracle::Dense;
  const Dense i2 = oracle::dense_identity(2);
  const std::vector<Dense> gates{oracle::kron(oracle::hadamard(), i2),
                                 oracle::kron(i2, oracle::hadamard()),
                                 oracle::kron(oracle::phase_t(), i2),
                                 oracle::kron(i2, oracle::phase_t()),
                                 oracle::cnot_by_bitflip(0, 1, 2)};
  std::vector<Dense> nodes{oracle::dense_identity(4)};
  for (const Dense& a : gates) nodes.push_back(a);
  for (const Dense& a : gates)
    for (const Dense& b : gates) nodes.push_back(oracle::matmul(b, a));
  REQUIRE(nodes.size() == 31);
  std::vector<Dense> distinct;
  for (const Dense& n : nodes) {
    bool seen = false;
    for (const Dense& d : distinct) seen = seen || oracle::dense_trace_fidelity(d, n) > 1 - 1e-9;
    if (!seen) distinct.push_back(n);
  }
  CHECK(distinct.size() == 23);

  env.expand_breadth_first(2);
  CHECK(env.registry_size() == distinct.size());
  CHECK(env.registry_size() <= tasks::space_size(5, 2).bound);
}

TEST_CASE("commuting diagonal gates share one state index") {
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix, walkthrough());
  env.step(act(GateKind::T, {0}));
  const std::size_t a = env.step(act(GateKind::T, {1})).next_index;
  env.reset();
  env.step(act(GateKind::T, {1}));
  const std::size_t b = env.step(act(GateKind::T, {0})).next_index;
  CHECK(a == b);
  env.reset();
  env.step(act(GateKind::H, {0}));
  CHECK(env.step(act(GateKind::H, {0})).next_index == 0);
}

TEST_CASE("registry capacity overflow") {
  EnvOptions o;
  o.registry_capacity = 2;
  Environment env = make_env(get_task("bell_phi_plus"), Representation::kMatrix, o);
  env.step(0);
  CHECK_THROWS_AS(env.step(1), RegistryOverflow);
}

TEST_CASE("property: determinism and reward/done coupling") {
  std::mt19937_64 rng(99);
  for (const std::string& name : tasks::task_names()) {
    for (Representation rep :
         {Representation::kMatrix, Representation::kReverse, Representation::kTn}) {
      const auto& task = get_task(name);
      if (!task.supports(rep)) continue;
      Environment a = make_env(task, rep);
      Environment b = make_env(task, rep);
      std::uniform_int_distribution<std::size_t> pick(0, a.n_actions() - 1);
      for (int episode = 0; episode < 5; ++episode) {
        a.reset();
        b.reset();
        while (!a.done()) {
          const std::size_t action = pick(rng);
          const StepResult ra = a.step(action);
          const StepResult rb = b.step(action);
          CHECK(ra.next_index == rb.next_index);
          CHECK(ra.reward == rb.reward);
          CHECK(ra.done == rb.done);
          if (ra.reward == 100.0) CHECK(ra.done);
          if (ra.reward == 0.0 && a.depth() < a.options().max_steps) CHECK_FALSE(ra.done);
          CHECK(a.depth() <= a.options().max_steps);
        }
      }
    }
  }
}

TEST_CASE("property: documented circuits solve every representation") {
  for (const std::string& name : tasks::task_names()) {
    CAPTURE(name);
    const auto& task = get_task(name);
    std::vector<ActionSpec> forward;
    for (const GatePlacement& g : task.solution) forward.push_back(single(g));

    Environment m = make_env(task, Representation::kMatrix);
    StepResult last;
    for (const ActionSpec& a : forward) {
      REQUIRE_FALSE(m.done());
      last = m.step(a);
    }
    CHECK(last.reward == 100.0);
    CHECK(m.depth() == task.solution_length);

    // Reverse: peel the gates off the target, last gate first.
    Environment r = make_env(task, Representation::kReverse);
    std::vector<ActionSpec> backward;
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) backward.push_back(inverted(*it));
    for (const ActionSpec& a : backward) {
      REQUIRE_FALSE(r.done());
      last = r.step(a);
    }
    CHECK(last.reward == 100.0);
    CHECK(max_abs_diff(r.current_unitary(), UnitaryMatrix::identity(task.n_qubits)) < 1e-9);
    CHECK(r.current_fidelity() > 0.99);
    const auto circuit = circuit_from_trajectory(backward, Representation::kReverse);
    CHECK(circuit == task.solution);
    CHECK(trace_fidelity(circuit_unitary(circuit, task.n_qubits), task.target_unitary) > 1 - 1e-9);
  }
}

TEST_CASE("expert trajectories finish with reward at exactly the solution length") {
  const auto& toff = get_task("toffoli");
  for (Representation rep : {Representation::kMatrix, Representation::kReverse}) {
    Environment env = make_env(toff, rep);
    const auto expert = tasks::expert_trajectory(toff, rep);
    REQUIRE(expert);
    StepResult last;
    int steps = 0;
    for (const ActionSpec& a : expert->actions) {
      REQUIRE_FALSE(env.done());
      last = env.step(a);
      ++steps;
      if (steps < toff.solution_length) CHECK(last.reward == 0.0);
    }
    CHECK(steps == 7);
    CHECK(last.reward == 100.0);
    CHECK(last.done);
  }
}
