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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcsynth/bench.hpp"
#include "qcsynth/cli.hpp"
#include "qcsynth/errors.hpp"
#include "qcsynth/verify.hpp"

namespace py = pybind11;
using namespace qcsynth;

namespace {

py::array_t<std::complex<double>> to_numpy(const gatealg::UnitaryMatrix& u) {
  const auto d = static_cast<py::ssize_t>(u.dim());
  py::array_t<std::complex<double>> a({d, d});
  auto m = a.mutable_unchecked<2>();
  for (py::ssize_t r = 0; r < d; ++r)
    for (py::ssize_t c = 0; c < d; ++c) m(r, c) = u(r, c);
  return a;
}

py::array_t<std::complex<double>> to_numpy(const gatealg::StateVector& s) {
  const auto d = static_cast<py::ssize_t>(s.dim());
  py::array_t<std::complex<double>> a(d);
  auto m = a.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < d; ++i) m(i) = s[i];
  return a;
}

bench::ExperimentConfig experiment(const std::string& task, const std::string& algorithm,
                                   const std::string& preset, std::uint64_t seed,
                                   std::optional<int> episodes,
                                   const std::map<std::string, std::string>& settings) {
  bench::ExperimentConfig c = bench::make_experiment(task, bench::parse_algorithm(algorithm),
                                                     bench::parse_preset(preset));
  c.seed = seed;
  if (episodes) c.episodes = *episodes;
  for (const auto& [k, v] : settings) cli::apply_setting(c, k, v);
  c.validate();
  return c;
}

py::dict round_dict(const bench::RoundResult& r) {
  py::dict d;
  d["round"] = r.round_index;
  d["seed"] = r.seed;
  d["success"] = r.success;
  d["trained_episodes"] = r.trained_episodes;
  d["training_successes"] = r.training_successes;
  d["trajectory"] = r.greedy_trajectory;
  d["circuit"] = r.circuit;
  d["final_fidelity"] = r.final_fidelity;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum circuit synthesis with tabular and deep Q-learning";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("task_names", &tasks::task_names);
  m.def(
      "space_size", [](std::uint64_t c, std::uint64_t b) { return tasks::space_size(c, b).bound; },
      py::arg("branching"), py::arg("depth"));
  m.def("target_unitary", [](const std::string& task) {
    return to_numpy(tasks::get_task(task).target_unitary);
  });

  py::class_<envs::Environment>(m, "Environment")
      .def(py::init([](const std::string& task, const std::string& representation, int max_steps) {
             envs::EnvOptions o;
             o.max_steps = max_steps;
             return envs::make_env(tasks::get_task(task), parse_representation(representation), o);
           }),
           py::arg("task"), py::arg("representation") = "matrix", py::arg("max_steps") = 20)
      .def("reset", &envs::Environment::reset)
      .def(
          "step",
          [](envs::Environment& e, std::size_t a) {
            const envs::StepResult r = e.step(a);
            return py::make_tuple(r.next_index, r.reward, r.done);
          },
          py::arg("action"))
      .def_property_readonly("actions",
                             [](const envs::Environment& e) {
                               std::vector<std::string> out;
                               for (const ActionSpec& a : e.actions()) out.push_back(a.label());
                               return out;
                             })
      .def_property_readonly("n_actions", &envs::Environment::n_actions)
      .def_property_readonly("done", &envs::Environment::done)
      .def_property_readonly("depth", &envs::Environment::depth)
      .def_property_readonly("n_states", &envs::Environment::registry_size)
      .def_property_readonly("fidelity", &envs::Environment::current_fidelity)
      .def_property_readonly(
          "unitary", [](const envs::Environment& e) { return to_numpy(e.current_unitary()); })
      .def_property_readonly(
          "state", [](const envs::Environment& e) { return to_numpy(e.current_state()); })
      .def("state_key", &envs::Environment::state_key);

  m.def(
      "train",
      [](const std::string& task, const std::string& algorithm, const std::string& preset,
         std::uint64_t seed, std::optional<int> episodes,
         const std::map<std::string, std::string>& settings) {
        const bench::ExperimentConfig c = experiment(task, algorithm, preset, seed, episodes, settings);
        bench::TrainedRound t;
        {
          py::gil_scoped_release release;
          t = bench::train_round(c, 0);
        }
        py::dict d = round_dict(t.result);
        std::vector<std::string> labels;
        for (const ActionSpec& a : t.actions) labels.push_back(a.label());
        d["actions"] = labels;
        if (t.table) {
          py::array_t<double> q({static_cast<py::ssize_t>(t.table->n_rows()),
                                 static_cast<py::ssize_t>(t.table->n_actions())});
          auto v = q.mutable_unchecked<2>();
          for (std::size_t s = 0; s < t.table->n_rows(); ++s)
            for (std::size_t a = 0; a < t.table->n_actions(); ++a) v(s, a) = t.table->at(s, a);
          d["qtable"] = q;
        }
        return d;
      },
      py::arg("task"), py::arg("algorithm") = "qlearn", py::arg("preset") = "appendix",
      py::arg("seed") = 0, py::arg("episodes") = py::none(),
      py::arg("settings") = std::map<std::string, std::string>{});

  m.def(
      "bench_json",
      [](const std::string& task, const std::string& algorithm, int rounds,
         const std::string& preset, std::uint64_t seed, std::optional<int> episodes, int jobs,
         const std::map<std::string, std::string>& settings) {
        bench::ExperimentConfig c = experiment(task, algorithm, preset, seed, episodes, settings);
        c.rounds = rounds;
        c.jobs = jobs;
        c.validate();
        py::gil_scoped_release release;
        return bench::report_json({bench::run_benchmark(c)}, 2, true);
      },
      py::arg("task"), py::arg("algorithm"), py::arg("rounds") = 100,
      py::arg("preset") = "appendix", py::arg("seed") = 0, py::arg("episodes") = py::none(),
      py::arg("jobs") = 1, py::arg("settings") = std::map<std::string, std::string>{});

  m.def(
      "walkthrough",
      [](const std::string& which, std::uint64_t seed, int episodes) {
        const bench::WalkthroughResult w =
            bench::reproduce_walkthrough(bench::parse_walkthrough(which), seed, episodes);
        py::list cells;
        for (const bench::KeyCell& k : w.key_cells) {
          py::dict c;
          c["state"] = k.state;
          c["action"] = k.action_label;
          c["expected"] = k.expected;
          c["learned"] = k.learned;
          cells.append(c);
        }
        std::vector<std::string> labels;
        for (const ActionSpec& a : w.rollout.actions) labels.push_back(a.label());
        py::dict d;
        d["key_cells"] = cells;
        d["success"] = w.rollout.success;
        d["trajectory"] = labels;
        return d;
      },
      py::arg("which"), py::arg("seed") = 0, py::arg("episodes") = 500);

  m.def(
      "verify",
      [](std::optional<std::string> corrupt_gate) {
        verify::VerifyOptions o;
        if (corrupt_gate) o.corrupt_gate = gatealg::parse_gate(*corrupt_gate).kind;
        py::list out;
        for (const verify::IdentityCheck& c : verify::run_identity_suite(o)) {
          py::dict d;
          d["name"] = c.name;
          d["detail"] = c.detail;
          d["value"] = c.value;
          d["passed"] = c.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("corrupt_gate") = py::none());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"qcsynth"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const std::string& s : full) argv.push_back(s.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
