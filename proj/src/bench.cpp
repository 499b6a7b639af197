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

#include "qcsynth/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qcsynth::bench {

using nlohmann::ordered_json;

namespace {

struct AlgorithmInfo {
  Algorithm algorithm;
  const char* name;
  Representation rep;
  bool dqn;
};

constexpr AlgorithmInfo kAlgorithms[] = {
    {Algorithm::kQlearn, "qlearn", Representation::kMatrix, false},
    {Algorithm::kQlearnReverse, "qlearn_reverse", Representation::kReverse, false},
    {Algorithm::kDqn, "dqn", Representation::kMatrix, true},
    {Algorithm::kDqnReverse, "dqn_reverse", Representation::kReverse, true},
    {Algorithm::kQlearnTn, "qlearn_tn", Representation::kTn, false},
};

const AlgorithmInfo& info(Algorithm a) {
  for (const AlgorithmInfo& i : kAlgorithms) {
    if (i.algorithm == a) return i;
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace

std::string to_string(Algorithm a) { return info(a).name; }

Algorithm parse_algorithm(const std::string& s) {
  for (const AlgorithmInfo& i : kAlgorithms) {
    if (s == i.name) return i.algorithm;
  }
  throw ConfigError("unknown algorithm '" + s +
                    "' (expected qlearn, qlearn_reverse, dqn, dqn_reverse or qlearn_tn)");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = [] {
    std::vector<Algorithm> v;
    for (const AlgorithmInfo& i : kAlgorithms) v.push_back(i.algorithm);
    return v;
  }();
  return all;
}

Representation representation_of(Algorithm a) { return info(a).rep; }
bool is_dqn(Algorithm a) { return info(a).dqn; }

bool is_defined(const std::string& task, Algorithm a) {
  return tasks::get_task(task).supports(representation_of(a));
}

std::string to_string(Preset p) { return p == Preset::kSection3 ? "section3" : "appendix"; }

Preset parse_preset(const std::string& s) {
  if (s == "section3" || s == "section-3") return Preset::kSection3;
  if (s == "appendix") return Preset::kAppendix;
  throw ConfigError("unknown preset '" + s + "' (expected section3 or appendix)");
}

agents::QLearnConfig q_preset(Preset p) {
  agents::QLearnConfig c;
  if (p == Preset::kSection3) {
    c.alpha = 0.5;
    c.gamma = 0.9;
    c.epsilon = 0.2;
    c.epsilon_decay = 1.0;
    c.epsilon_min = 0.2;
    c.episodes = 500;
  } else {
    c.alpha = 0.1;
    c.gamma = 0.95;
    c.epsilon = 1.0;
    c.epsilon_decay = 0.99;
    c.epsilon_min = 0.05;
    c.episodes = 100;
  }
  return c;
}

agents::DqnConfig dqn_preset(Preset p) {
  agents::DqnConfig c;
  if (p == Preset::kSection3) {
    c.gamma = 0.9;
    c.epsilon = 0.2;
    c.epsilon_decay = 1.0;
    c.epsilon_min = 0.2;
    c.target_mode = agents::TargetUpdateMode::kSoft;
    c.tau = 0.1;
    c.target_period = 1;
    c.episodes = 500;
  }
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t round_seed(std::uint64_t base_seed, int round_index) {
  return splitmix64(splitmix64(base_seed) ^ static_cast<std::uint64_t>(round_index));
}

void ExperimentConfig::validate() const {
  tasks::get_task(task);
  if (!is_defined(task, algorithm)) {
    throw ConfigError("algorithm " + to_string(algorithm) + " is not defined for task " + task);
  }
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (rollouts < 1) throw ConfigError("rollouts must be >= 1");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
  if (is_dqn(algorithm)) {
    agents::DqnConfig d = dqn;
    d.episodes = episodes;
    d.max_steps = max_steps;
    d.validate();
  } else {
    agents::QLearnConfig c = q;
    c.episodes = episodes;
    c.max_steps = max_steps;
    c.validate();
  }
}

ExperimentConfig make_experiment(const std::string& task, Algorithm algorithm, Preset preset) {
  ExperimentConfig c;
  c.task = task;
  c.algorithm = algorithm;
  c.preset = preset;
  c.q = q_preset(preset);
  c.dqn = dqn_preset(preset);
  c.episodes = is_dqn(algorithm) ? c.dqn.episodes : c.q.episodes;
  return c;
}

namespace {

double circuit_fidelity(const tasks::TaskSpec& task, Representation rep,
                        const std::vector<gatealg::GatePlacement>& circuit) {
  const gatealg::UnitaryMatrix u = gatealg::circuit_unitary(circuit, task.n_qubits);
  if (rep == Representation::kTn && task.tn_reward == RewardMode::kStateOverlap) {
    return gatealg::state_overlap(gatealg::apply(u, gatealg::StateVector::basis(task.n_qubits, 0)),
                                  task.target_state);
  }
  return gatealg::trace_fidelity(u, task.target_unitary);
}

}  // namespace

envs::EnvOptions env_options(const ExperimentConfig& config) {
  envs::EnvOptions opts;
  opts.max_steps = config.max_steps;
  opts.threshold = config.threshold;
  opts.success_reward = config.success_reward;
  return opts;
}

TrainedRound train_round(const ExperimentConfig& config, int round_index) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const tasks::TaskSpec& task = tasks::get_task(config.task);
  const Representation rep = representation_of(config.algorithm);

  TrainedRound trained_round;
  RoundResult& out = trained_round.result;
  out.round_index = round_index;
  out.seed = round_seed(config.seed, round_index);
  agents::Rng rng(out.seed);

  std::optional<tasks::ExpertTrajectory> expert;
  if (config.use_expert) expert = tasks::expert_trajectory(task, rep);

  envs::EnvOptions opts = env_options(config);

  agents::Rollout best;
  const auto keep = [&](const agents::Rollout& r, int k) {
    if (k == 0 || (r.success && !best.success)) best = r;
  };
  const auto record_states = [&](const envs::Environment& env) {
    trained_round.actions = env.actions();
    for (std::size_t i = 0; i < env.registry_size(); ++i) {
      trained_round.state_keys.push_back(env.state_key(i));
    }
  };

  if (is_dqn(config.algorithm)) {
    agents::DqnConfig d = config.dqn;
    d.episodes = config.episodes;
    d.max_steps = config.max_steps;
    const std::vector<ActionSpec> actions = tasks::action_set(task, rep);
    if (d.encoding == agents::StateEncoding::kOneHot) {
      if (d.input_dim == 0) {
        agents::DqnConfig sizing = d;
        sizing.episodes += config.rollouts - 1;
        d.input_dim = static_cast<int>(
            agents::dqn_input_dim(actions.size(), sizing, expert ? expert->actions.size() : 0));
      }
      opts.registry_capacity = static_cast<std::size_t>(d.input_dim);
    }
    envs::Environment env(task, rep, actions, opts);
    agents::DqnTrainResult trained = agents::train_dqn(env, d, expert ? &*expert : nullptr, rng);
    out.episodes = std::move(trained.episodes);
    for (int k = 0; k < config.rollouts; ++k) keep(agents::greedy_rollout(env, trained.net, rng), k);
    record_states(env);
    trained_round.net = std::move(trained.net);
  } else {
    agents::QLearnConfig q = config.q;
    q.episodes = config.episodes;
    q.max_steps = config.max_steps;
    envs::Environment env = envs::make_env(task, rep, opts);
    agents::QTrainResult trained = agents::train_q(env, q, expert ? &*expert : nullptr, rng);
    out.episodes = trained.episodes;
    for (int k = 0; k < config.rollouts; ++k) keep(agents::greedy_rollout(env, trained.table, rng), k);
    record_states(env);
    trained_round.table = std::move(trained.table);
  }

  out.trained_episodes = static_cast<int>(out.episodes.size());
  for (const agents::EpisodeTrace& e : out.episodes) out.training_successes += e.success;
  out.success = best.success;
  for (const ActionSpec& a : best.actions) out.greedy_trajectory.push_back(a.label());
  const auto circuit = circuit_from_trajectory(best.actions, rep);
  for (const gatealg::GatePlacement& g : circuit) out.circuit.push_back(gatealg::label(g));
  out.final_fidelity = circuit_fidelity(task, rep, circuit);
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trained_round;
}

RoundResult run_round(const ExperimentConfig& config, int round_index) {
  return train_round(config, round_index).result;
}

BenchReport run_benchmark(const ExperimentConfig& config) {
  config.validate();
  BenchReport report;
  report.task = config.task;
  report.algorithm = config.algorithm;
  report.rounds = config.rounds;
  report.seed = config.seed;
  report.config = config;

  std::vector<std::optional<RoundResult>> slots(static_cast<std::size_t>(config.rounds));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::pair<int, std::string>> first_error;

  const auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const int i = next.fetch_add(1);
      if (i >= config.rounds) return;
      try {
        slots[static_cast<std::size_t>(i)] = run_round(config, i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error || i < first_error->first) first_error = {i, e.what()};
        failed.store(true);
      }
    }
  };
  const int jobs = std::min(config.jobs, config.rounds);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (auto& slot : slots) {
    if (!slot) continue;
    report.successes += slot->success;
    report.round_results.push_back(std::move(*slot));
  }
  report.completed_rounds = static_cast<int>(report.round_results.size());
  if (first_error) {
    report.error = "round " + std::to_string(first_error->first) + ": " + first_error->second;
  }
  report.ratio = report.completed_rounds == 0
                     ? 0.0
                     : 100.0 * report.successes / static_cast<double>(report.completed_rounds);
  return report;
}

namespace {

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["task"] = c.task;
  j["algorithm"] = to_string(c.algorithm);
  j["representation"] = std::string(to_string(representation_of(c.algorithm)));
  j["preset"] = to_string(c.preset);
  j["rounds"] = c.rounds;
  j["episodes"] = c.episodes;
  j["max_steps"] = c.max_steps;
  j["seed"] = c.seed;
  j["rollouts"] = c.rollouts;
  j["use_expert"] = c.use_expert;
  j["threshold"] = c.threshold;
  j["success_reward"] = c.success_reward;
  if (is_dqn(c.algorithm)) {
    const agents::DqnConfig& d = c.dqn;
    j["dqn"] = {{"gamma", d.gamma},
                {"learning_rate", d.learning_rate},
                {"max_grad_norm", d.max_grad_norm},
                {"epsilon", d.epsilon},
                {"epsilon_decay", d.epsilon_decay},
                {"epsilon_min", d.epsilon_min},
                {"batch_size", d.batch_size},
                {"buffer_capacity", d.buffer_capacity},
                {"hidden", d.hidden},
                {"target_mode", to_string(d.target_mode)},
                {"target_period", d.target_period},
                {"tau", d.tau},
                {"expert_passes", d.expert_passes},
                {"encoding", to_string(d.encoding)},
                {"input_dim", d.input_dim}};
  } else {
    const agents::QLearnConfig& q = c.q;
    j["qlearn"] = {{"alpha", q.alpha},
                   {"gamma", q.gamma},
                   {"epsilon", q.epsilon},
                   {"epsilon_decay", q.epsilon_decay},
                   {"epsilon_min", q.epsilon_min}};
  }
  return j;
}

}  // namespace

std::string config_json(const ExperimentConfig& config, int indent) {
  return config_to_json(config).dump(indent);
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
  try {
    ExperimentConfig c = make_experiment(j.at("task").get<std::string>(),
                                         parse_algorithm(j.at("algorithm").get<std::string>()),
                                         parse_preset(j.at("preset").get<std::string>()));
    c.rounds = j.at("rounds").get<int>();
    c.episodes = j.at("episodes").get<int>();
    c.max_steps = j.at("max_steps").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.rollouts = j.at("rollouts").get<int>();
    c.use_expert = j.at("use_expert").get<bool>();
    c.threshold = j.at("threshold").get<double>();
    c.success_reward = j.at("success_reward").get<double>();
    if (j.contains("dqn")) {
      const auto& d = j["dqn"];
      agents::DqnConfig& o = c.dqn;
      o.gamma = d.at("gamma").get<double>();
      o.learning_rate = d.at("learning_rate").get<double>();
      o.max_grad_norm = d.at("max_grad_norm").get<double>();
      o.epsilon = d.at("epsilon").get<double>();
      o.epsilon_decay = d.at("epsilon_decay").get<double>();
      o.epsilon_min = d.at("epsilon_min").get<double>();
      o.batch_size = d.at("batch_size").get<int>();
      o.buffer_capacity = d.at("buffer_capacity").get<int>();
      o.hidden = d.at("hidden").get<std::vector<int>>();
      o.target_mode = agents::parse_target_mode(d.at("target_mode").get<std::string>());
      o.target_period = d.at("target_period").get<int>();
      o.tau = d.at("tau").get<double>();
      o.expert_passes = d.at("expert_passes").get<int>();
      o.encoding = agents::parse_encoding(d.at("encoding").get<std::string>());
      o.input_dim = d.at("input_dim").get<int>();
    }
    if (j.contains("qlearn")) {
      const auto& q = j["qlearn"];
      c.q.alpha = q.at("alpha").get<double>();
      c.q.gamma = q.at("gamma").get<double>();
      c.q.epsilon = q.at("epsilon").get<double>();
      c.q.epsilon_decay = q.at("epsilon_decay").get<double>();
      c.q.epsilon_min = q.at("epsilon_min").get<double>();
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
}

std::string report_json(const std::vector<BenchReport>& reports, int indent, bool include_rounds) {
  ordered_json arr = ordered_json::array();
  for (const BenchReport& r : reports) {
    ordered_json j;
    j["task"] = r.task;
    j["algorithm"] = to_string(r.algorithm);
    j["rounds"] = r.rounds;
    j["completed_rounds"] = r.completed_rounds;
    j["successes"] = r.successes;
    j["ratio"] = r.ratio;
    j["seed"] = r.seed;
    j["config"] = config_to_json(r.config);
    if (r.error) j["error"] = *r.error;
    if (include_rounds) {
      ordered_json rounds = ordered_json::array();
      for (const RoundResult& rr : r.round_results) {
        ordered_json x;
        x["round"] = rr.round_index;
        x["seed"] = rr.seed;
        x["success"] = rr.success;
        x["trained_episodes"] = rr.trained_episodes;
        x["training_successes"] = rr.training_successes;
        x["greedy_trajectory"] = rr.greedy_trajectory;
        x["circuit"] = rr.circuit;
        x["final_fidelity"] = rr.final_fidelity;
        rounds.push_back(std::move(x));
      }
      j["round_results"] = std::move(rounds);
    }
    arr.push_back(std::move(j));
  }
  ordered_json root;
  root["reports"] = std::move(arr);
  return root.dump(indent) + "\n";
}

std::string traces_jsonl(const BenchReport& report) {
  std::string out;
  for (const RoundResult& r : report.round_results) {
    ordered_json j;
    j["task"] = report.task;
    j["algorithm"] = to_string(report.algorithm);
    j["round"] = r.round_index;
    j["seed"] = r.seed;
    j["success"] = r.success;
    j["trajectory"] = r.greedy_trajectory;
    j["circuit"] = r.circuit;
    j["final_fidelity"] = r.final_fidelity;
    j["trained_episodes"] = r.trained_episodes;
    j["training_successes"] = r.training_successes;
    std::vector<int> steps;
    std::vector<double> rewards;
    for (const agents::EpisodeTrace& e : r.episodes) {
      steps.push_back(e.steps);
      rewards.push_back(e.total_reward);
    }
    j["episode_steps"] = steps;
    j["episode_rewards"] = rewards;
    out += j.dump() + "\n";
  }
  return out;
}

std::string render_table(const std::vector<BenchReport>& reports) {
  std::map<std::pair<std::string, Algorithm>, const BenchReport*> cells;
  std::vector<std::string> order;
  for (const BenchReport& r : reports) {
    cells[{r.task, r.algorithm}] = &r;
    if (std::find(order.begin(), order.end(), r.task) == order.end()) order.push_back(r.task);
  }
  std::vector<Algorithm> columns;
  for (Algorithm a : all_algorithms()) {
    for (const BenchReport& r : reports) {
      if (r.algorithm == a) {
        columns.push_back(a);
        break;
      }
    }
  }
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-16s", "task");
  os << buf;
  for (Algorithm a : columns) {
    std::snprintf(buf, sizeof buf, " %15s", to_string(a).c_str());
    os << buf;
  }
  os << '\n';
  for (const std::string& t : order) {
    std::snprintf(buf, sizeof buf, "%-16s", t.c_str());
    os << buf;
    for (Algorithm a : columns) {
      const auto it = cells.find({t, a});
      std::string cell = "-";
      if (it != cells.end()) {
        const BenchReport& r = *it->second;
        std::snprintf(buf, sizeof buf, "%g%%", r.ratio);
        cell = buf;
        if (r.error) cell += "!";
      }
      std::snprintf(buf, sizeof buf, " %15s", cell.c_str());
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string to_string(Walkthrough w) {
  switch (w) {
    case Walkthrough::kTable1:
      return "table1";
    case Walkthrough::kTable2:
      return "table2";
    case Walkthrough::kTable3:
      return "table3";
  }
  return "?";
}

Walkthrough parse_walkthrough(const std::string& s) {
  if (s == "table1") return Walkthrough::kTable1;
  if (s == "table2") return Walkthrough::kTable2;
  if (s == "table3") return Walkthrough::kTable3;
  throw ConfigError("unknown walkthrough '" + s + "' (expected table1, table2 or table3)");
}

Representation walkthrough_representation(Walkthrough which) {
  switch (which) {
    case Walkthrough::kTable1: return Representation::kMatrix;
    case Walkthrough::kTable2: return Representation::kReverse;
    case Walkthrough::kTable3: return Representation::kTn;
  }
  return Representation::kMatrix;
}

WalkthroughResult reproduce_walkthrough(Walkthrough which, std::uint64_t seed, int episodes) {
  const tasks::TaskSpec& bell = tasks::get_task("bell_phi_plus");
  envs::EnvOptions opts;
  opts.variant = tasks::ActionSetVariant::kWalkthrough;
  const Representation rep = walkthrough_representation(which);
  envs::Environment env = envs::make_env(bell, rep, opts);
  if (rep != Representation::kTn) env.expand_breadth_first(1);

  const auto index_of = [&](const ActionSpec& a) { return *env.find_action(a); };
  const auto child_of_root = [&](const ActionSpec& a) {
    env.reset();
    return env.step(a).next_index;
  };
  const auto cnot01 = gatealg::place(gatealg::GateKind::CNOT, {0, 1});
  const auto h0 = gatealg::place(gatealg::GateKind::H, {0});

  WalkthroughResult out;
  out.which = which;
  out.actions = env.actions();
  std::vector<std::pair<std::size_t, ActionSpec>> cells;
  std::vector<double> expected;
  if (which == Walkthrough::kTable1) {
    const std::size_t s1 = child_of_root(single(h0));
    cells.emplace_back(0, single(h0));
    cells.emplace_back(s1, single(cnot01));
    expected = {90.0, 100.0};
  } else if (which == Walkthrough::kTable2) {
    const ActionSpec first = inverted(single(cnot01));
    const std::size_t s5 = child_of_root(first);
    cells.emplace_back(0, first);
    cells.emplace_back(s5, inverted(single(h0)));
    expected = {90.0, 100.0};
  } else {
    cells.emplace_back(0, pair(h0, cnot01));
    expected = {100.0};
  }

  agents::Rng rng(seed);
  agents::QLearnConfig q = q_preset(Preset::kSection3);
  q.episodes = episodes;
  agents::QTrainResult trained = agents::train_q(env, q, nullptr, rng);
  out.table = std::move(trained.table);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t a = index_of(cells[i].second);
    out.key_cells.push_back(
        {cells[i].first, a, cells[i].second.label(), expected[i], out.table.at(cells[i].first, a)});
  }
  out.rollout = agents::greedy_rollout(env, out.table, rng);
  for (std::size_t i = 0; i < env.registry_size(); ++i) out.state_keys.push_back(env.state_key(i));
  return out;
}

}  // namespace qcsynth::bench
