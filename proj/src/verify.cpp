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

#include "qcsynth/verify.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "qcsynth/env.hpp"
#include "qcsynth/tasks.hpp"

namespace qcsynth::verify {

using gatealg::Complex;
using gatealg::GateKind;
using gatealg::GatePlacement;
using gatealg::StateVector;
using gatealg::UnitaryMatrix;

namespace {

constexpr double kFidelityTol = 1e-9;
constexpr double kEntryTol = 1e-12;
const double kR = 1.0 / std::sqrt(2.0);

UnitaryMatrix evaluate(std::span<const GatePlacement> circuit, int n, const VerifyOptions& opt) {
  UnitaryMatrix u = UnitaryMatrix::identity(n);
  for (const GatePlacement& g : circuit) {
    UnitaryMatrix m = gatealg::embed(g, n);
    if (opt.corrupt_gate && g.gate.kind == *opt.corrupt_gate) {
      m = gatealg::compose(gatealg::embed(gatealg::place(GateKind::T, {g.qubits[0]}), n), m);
    }
    u = gatealg::compose(m, u);
  }
  return u;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

IdentityCheck fidelity_check(const std::string& name, double f) {
  return {name, "fidelity " + fmt("%.12f", f), f, f > 1.0 - kFidelityTol};
}

std::map<std::string, StateVector> reference_states() {
  return {
      {"bell_phi_plus", StateVector(2, {kR, 0, 0, kR})},
      {"bell_phi_minus", StateVector(2, {kR, 0, 0, -kR})},
      {"bell_psi_plus", StateVector(2, {0, kR, kR, 0})},
      {"bell_psi_minus", StateVector(2, {0, kR, -kR, 0})},
      {"ghz", StateVector(3, {kR, 0, 0, 0, 0, 0, 0, kR})},
  };
}

std::map<std::string, UnitaryMatrix> reference_unitaries() {
  const Complex i(0, 1);
  std::map<std::string, UnitaryMatrix> m;
  m.emplace("swap", UnitaryMatrix(2, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1}));
  m.emplace("iswap", UnitaryMatrix(2, {1, 0, 0, 0, 0, 0, i, 0, 0, i, 0, 0, 0, 0, 0, 1}));
  m.emplace("cz", UnitaryMatrix(2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}));
  std::vector<Complex> z(64);
  for (int k = 0; k < 8; ++k) z[k * 8 + k] = k < 4 ? 1.0 : -1.0;
  m.emplace("z3", UnitaryMatrix(3, z));
  // controls 1 and 2, target 0 (the MSB): swaps |011> and |111>
  std::vector<Complex> t(64);
  for (int k = 0; k < 8; ++k) t[k * 8 + (k == 3 ? 7 : k == 7 ? 3 : k)] = 1.0;
  m.emplace("toffoli", UnitaryMatrix(3, t));
  return m;
}

}  // namespace

std::vector<IdentityCheck> run_identity_suite(const VerifyOptions& options) {
  std::vector<IdentityCheck> out;

  {
    const std::vector<GatePlacement> fig1{gatealg::place(GateKind::H, {0}),
                                          gatealg::place(GateKind::CNOT, {0, 1})};
    const UnitaryMatrix eq2(2, {kR, 0, kR, 0, 0, kR, 0, kR, 0, kR, 0, -kR, kR, 0, -kR, 0});
    const double diff = gatealg::max_abs_diff(evaluate(fig1, 2, options), eq2);
    out.push_back({"bell_circuit_matrix", "max entry difference " + fmt("%.3g", diff), diff,
                   diff <= kEntryTol});
  }

  const auto states = reference_states();
  const auto unitaries = reference_unitaries();
  for (const std::string& name : tasks::task_names()) {
    const tasks::TaskSpec& t = tasks::get_task(name);
    const UnitaryMatrix u = evaluate(t.solution, t.n_qubits, options);
    if (const auto it = unitaries.find(name); it != unitaries.end()) {
      out.push_back(fidelity_check(name + "_circuit", gatealg::trace_fidelity(u, it->second)));
    }
    if (const auto it = states.find(name); it != states.end()) {
      const StateVector psi = gatealg::apply(u, StateVector::basis(t.n_qubits, 0));
      out.push_back(fidelity_check(name + "_state", gatealg::state_overlap(psi, it->second)));
    }
  }

  {
    const UnitaryMatrix a = evaluate(tasks::get_task("iswap").solution, 2, options);
    const UnitaryMatrix b = evaluate(tasks::iswap_alternative_circuit(), 2, options);
    out.push_back(fidelity_check("iswap_equivalent_forms", gatealg::trace_fidelity(a, b)));
  }
  {
    const UnitaryMatrix a = evaluate(tasks::get_task("toffoli").solution, 3, options);
    const double diff = gatealg::max_abs_diff(a, reference_unitaries().at("toffoli"));
    out.push_back({"toffoli_exact_permutation", "max entry difference " + fmt("%.3g", diff), diff,
                   diff <= kEntryTol});
  }

  for (const std::string& name : tasks::task_names()) {
    const tasks::TaskSpec& t = tasks::get_task(name);
    const auto actions = tasks::action_set(t, Representation::kMatrix);
    const std::uint64_t bound = tasks::space_size(actions.size(), t.solution_length).bound;
    out.push_back({name + "_space_size",
                   std::to_string(actions.size()) + " actions, length " +
                       std::to_string(t.solution_length) + " -> " + std::to_string(bound) +
                       " (table " + std::to_string(t.reference_space_size) + ")",
                   static_cast<double>(bound), bound == t.reference_space_size});
  }

  const tasks::TaskSpec& toff = tasks::get_task("toffoli");
  for (Representation rep : {Representation::kMatrix, Representation::kReverse}) {
    envs::Environment env = envs::make_env(toff, rep);
    const auto expert = tasks::expert_trajectory(toff, rep);
    env.reset();
    int reward_step = 0;
    for (std::size_t k = 0; k < expert->actions.size(); ++k) {
      if (env.step(expert->actions[k]).reward > 0.0 && reward_step == 0) {
        reward_step = static_cast<int>(k) + 1;
      }
    }
    // the replayed circuit must also survive the (possibly corrupted) evaluator
    const auto circuit = circuit_from_trajectory(expert->actions, rep);
    const double f = gatealg::trace_fidelity(evaluate(circuit, 3, options), toff.target_unitary);
    const bool ok = reward_step == toff.solution_length && f > 1.0 - kFidelityTol;
    out.push_back({"toffoli_expert_" + std::string(to_string(rep)),
                   "reward at step " + std::to_string(reward_step) + ", fidelity " + fmt("%.12f", f),
                   static_cast<double>(reward_step), ok});
  }
  return out;
}

}  // namespace qcsynth::verify
