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

#include "qcsynth/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcsynth/errors.hpp"
#include "qcsynth/verify.hpp"

#ifndef QCSYNTH_VERSION
#define QCSYNTH_VERSION "0.0.0"
#endif

namespace qcsynth::cli {

namespace fs = std::filesystem;
using bench::Algorithm;
using bench::ExperimentConfig;
using nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

ConfigError bad_value(const std::string& key, const std::string& value) {
  return ConfigError("invalid value for " + key + ": '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T x{};
  const char* end = value.data() + value.size();
  const auto [p, ec] = std::from_chars(value.data(), end, x);
  if (value.empty() || ec != std::errc() || p != end) throw bad_value(key, value);
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw bad_value(key, value);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
  if (out.empty()) throw bad_value(key, value);
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  f.close();
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             (ec ? ": " + ec.message() : ""));
  }
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json manifest_base(const std::string& command, const std::vector<std::string>& argv) {
  ordered_json m;
  m["tool"] = "qcsynth";
  m["version"] = QCSYNTH_VERSION;
  m["command"] = command;
  m["argv"] = argv;
  m["timestamp"] = utc_timestamp();
  return m;
}

std::string states_tsv(const std::vector<std::string>& keys) {
  std::string out = "index\tkey\n";
  for (std::size_t i = 0; i < keys.size(); ++i) out += std::to_string(i) + '\t' + keys[i] + '\n';
  return out;
}

std::unordered_map<std::string, std::size_t> read_states_tsv(const fs::path& path) {
  std::istringstream is(read_file(path));
  std::string line;
  std::getline(is, line);
  if (trim(line) != "index\tkey") throw ConfigError("bad states header in " + path.string());
  std::unordered_map<std::string, std::size_t> out;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ConfigError("bad states line in " + path.string());
    out.emplace(trim(line.substr(tab + 1)), parse_number<std::size_t>("index", line.substr(0, tab)));
  }
  return out;
}

// ------------------------------------------------------------ configuration

struct ConfigLayers {
  std::string config_file;
  std::vector<std::string> sets;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::optional<int> max_steps;
  std::optional<int> rounds;
  std::optional<int> jobs;
};

struct ResolvedLayers {
  bench::Preset preset = bench::Preset::kAppendix;
  Settings file;
  Settings flags;
};

ResolvedLayers resolve_layers(const ConfigLayers& l) {
  ResolvedLayers r;
  std::optional<std::string> preset;
  if (!l.config_file.empty()) {
    for (auto& [k, v] : parse_config_text(read_file(l.config_file))) {
      if (k == "preset") {
        preset = v;
      } else {
        r.file.emplace_back(k, v);
      }
    }
  }
  for (const std::string& s : l.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    if (key == "preset") throw ConfigError("use --preset to choose the preset");
    r.flags.emplace_back(key, trim(s.substr(eq + 1)));
  }
  if (l.seed) r.flags.emplace_back("seed", std::to_string(*l.seed));
  if (l.episodes) r.flags.emplace_back("episodes", std::to_string(*l.episodes));
  if (l.max_steps) r.flags.emplace_back("max_steps", std::to_string(*l.max_steps));
  if (l.rounds) r.flags.emplace_back("rounds", std::to_string(*l.rounds));
  if (l.jobs) r.flags.emplace_back("jobs", std::to_string(*l.jobs));
  if (!l.preset.empty()) preset = l.preset;
  if (preset) r.preset = bench::parse_preset(*preset);
  return r;
}

ExperimentConfig build_experiment(const std::string& task, Algorithm algo, const ResolvedLayers& r) {
  ExperimentConfig c = bench::make_experiment(task, algo, r.preset);
  for (const auto& [k, v] : r.file) apply_setting(c, k, v);
  for (const auto& [k, v] : r.flags) apply_setting(c, k, v);
  return c;
}

fs::path output_dir(const std::string& flag, const std::string& default_name) {
  return flag.empty() ? fs::path(default_out_root()) / default_name : fs::path(flag);
}

void add_config_flags(CLI::App* sub, ConfigLayers& l) {
  sub->add_option("--config", l.config_file, "key=value settings file")->check(CLI::ExistingFile);
  sub->add_option("--set", l.sets, "Override one setting, KEY=VALUE (repeatable)");
  sub->add_option("--preset", l.preset, "section3 or appendix (default appendix)");
  sub->add_option("--seed", l.seed, "Base seed");
  sub->add_option("--episodes", l.episodes, "Training episodes per round");
  sub->add_option("--max-steps", l.max_steps, "Episode step limit");
}

// -------------------------------------------------------------------- train

struct TrainArgs {
  std::string task;
  std::string algo;
  std::vector<std::string> extra;
  std::string walkthrough;
  std::string out;
  ConfigLayers layers;
};

Algorithm resolve_algorithm(const std::string& algo, std::optional<Representation> rep) {
  if (algo == "qlearn" || algo == "dqn") {
    const Representation r = rep.value_or(Representation::kMatrix);
    if (algo == "qlearn") {
      return r == Representation::kMatrix    ? Algorithm::kQlearn
             : r == Representation::kReverse ? Algorithm::kQlearnReverse
                                             : Algorithm::kQlearnTn;
    }
    if (r == Representation::kTn) throw ConfigError("dqn has no tn representation");
    return r == Representation::kMatrix ? Algorithm::kDqn : Algorithm::kDqnReverse;
  }
  const Algorithm a = bench::parse_algorithm(algo);
  if (rep && *rep != bench::representation_of(a)) {
    throw ConfigError("algorithm " + algo + " does not use the " + std::string(to_string(*rep)) +
                      " representation");
  }
  return a;
}

bool is_representation_name(const std::string& s) {
  return s == "matrix" || s == "reverse" || s == "tn";
}

int run_walkthrough(const TrainArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  if (!a.task.empty() || !a.extra.empty() || !a.layers.config_file.empty() ||
      !a.layers.sets.empty() || !a.layers.preset.empty() || a.layers.max_steps) {
    throw ConfigError("--walkthrough takes only --seed, --episodes and --out");
  }
  const bench::Walkthrough which = bench::parse_walkthrough(a.walkthrough);
  const std::uint64_t seed = a.layers.seed.value_or(0);
  const int episodes = a.layers.episodes.value_or(500);
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
  const fs::path dir =
      output_dir(a.out, "walkthrough-" + bench::to_string(which) + "-s" + std::to_string(seed));
  ensure_dir(dir);

  const bench::WalkthroughResult w = bench::reproduce_walkthrough(which, seed, episodes);
  const Representation rep = bench::walkthrough_representation(which);
  const auto circuit = circuit_from_trajectory(w.rollout.actions, rep);

  ordered_json report;
  report["walkthrough"] = bench::to_string(which);
  report["representation"] = std::string(to_string(rep));
  report["seed"] = seed;
  report["episodes"] = episodes;
  ordered_json cells = ordered_json::array();
  for (const bench::KeyCell& k : w.key_cells) {
    cells.push_back({{"state", k.state},
                     {"action", k.action},
                     {"action_label", k.action_label},
                     {"expected", k.expected},
                     {"learned", k.learned}});
  }
  report["key_cells"] = std::move(cells);
  std::vector<std::string> labels;
  for (const ActionSpec& s : w.rollout.actions) labels.push_back(s.label());
  report["rollout"] = {{"success", w.rollout.success},
                       {"trajectory", labels},
                       {"circuit", circuit_label(circuit)}};

  std::ostringstream table;
  agents::write_qtable(table, w.table, w.actions);
  write_file(dir / "qtable.tsv", table.str());
  write_file(dir / "states.tsv", states_tsv(w.state_keys));
  write_file(dir / "report.json", report.dump(2) + "\n");
  ordered_json m = manifest_base("train", argv);
  m["walkthrough"] = bench::to_string(which);
  m["seed"] = seed;
  m["episodes"] = episodes;
  m["artifacts"] = {{"report", "report.json"}, {"qtable", "qtable.tsv"}, {"states", "states.tsv"}};
  write_file(dir / "manifest.json", m.dump(2) + "\n");

  out << "walkthrough " << bench::to_string(which) << " (" << to_string(rep) << "), seed " << seed
      << ", " << episodes << " episodes\n";
  for (const bench::KeyCell& k : w.key_cells) {
    out << "Q(S" << k.state << ", " << k.action_label << ") = " << std::fixed
        << std::setprecision(3) << k.learned << " (expected " << std::setprecision(0)
        << k.expected << ")\n";
  }
  out << std::defaultfloat << std::setprecision(6);
  if (w.rollout.success) {
    out << circuit_label(circuit) << '\n';
  } else {
    out << "greedy rollout did not reach the target\n";
  }
  out << "artifacts: " << dir.string() << '\n';
  return kOk;
}

int run_train(const TrainArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  if (!a.walkthrough.empty()) return run_walkthrough(a, argv, out);
  if (a.task.empty() || a.algo.empty()) throw ConfigError("train needs TASK and ALGO");
  if (a.extra.size() > 2) throw ConfigError("too many arguments to train");

  std::optional<Representation> rep;
  ConfigLayers layers = a.layers;
  for (const std::string& e : a.extra) {
    if (is_representation_name(e) && !rep) {
      rep = parse_representation(e);
    } else {
      bench::parse_preset(e);
      if (!layers.preset.empty() && layers.preset != e) {
        throw ConfigError("preset given twice: " + layers.preset + " and " + e);
      }
      layers.preset = e;
    }
  }
  const Algorithm algo = resolve_algorithm(a.algo, rep);
  ExperimentConfig c = build_experiment(a.task, algo, resolve_layers(layers));
  c.rounds = 1;
  c.jobs = 1;
  c.validate();

  const fs::path dir = output_dir(
      a.out, "train-" + c.task + "-" + bench::to_string(algo) + "-s" + std::to_string(c.seed));
  ensure_dir(dir);

  bench::TrainedRound t = bench::train_round(c, 0);
  bench::BenchReport report;
  report.task = c.task;
  report.algorithm = algo;
  report.rounds = 1;
  report.completed_rounds = 1;
  report.successes = t.result.success ? 1 : 0;
  report.ratio = 100.0 * report.successes;
  report.seed = c.seed;
  report.config = c;
  report.round_results.push_back(t.result);

  ordered_json artifacts = {{"report", "report.json"}, {"states", "states.tsv"}};
  if (t.table) {
    std::ostringstream os;
    agents::write_qtable(os, *t.table, t.actions);
    write_file(dir / "qtable.tsv", os.str());
    artifacts["qtable"] = "qtable.tsv";
  } else {
    std::ostringstream os;
    agents::write_checkpoint(os, *t.net);
    write_file(dir / "policy.ckpt", os.str());
    artifacts["checkpoint"] = "policy.ckpt";
  }
  write_file(dir / "states.tsv", states_tsv(t.state_keys));
  write_file(dir / "report.json", bench::report_json({report}, 2, true));
  ordered_json m = manifest_base("train", argv);
  m["seed"] = c.seed;
  m["config"] = ordered_json::parse(bench::config_json(c));
  m["artifacts"] = std::move(artifacts);
  write_file(dir / "manifest.json", m.dump(2) + "\n");

  const bench::RoundResult& r = t.result;
  out << "task " << c.task << ", algorithm " << bench::to_string(algo) << ", preset "
      << bench::to_string(c.preset) << ", seed " << c.seed << '\n';
  out << "trained " << r.trained_episodes << " episodes, " << r.training_successes
      << " reached the target\n";
  if (r.success) {
    std::string joined;
    for (std::size_t i = 0; i < r.circuit.size(); ++i) joined += (i ? ", " : "") + r.circuit[i];
    out << joined << '\n';
  } else {
    out << "greedy rollout did not reach the target (fidelity " << r.final_fidelity << ")\n";
  }
  out << "artifacts: " << dir.string() << '\n';
  return kOk;
}

// ------------------------------------------------------------------ rollout

int run_rollout(const std::string& run_dir, std::ostream& out) {
  const fs::path dir(run_dir);
  ordered_json m;
  try {
    m = ordered_json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  if (m.value("command", "") != "train") throw ConfigError("not a train run: " + run_dir);

  std::string task_name = "bell_phi_plus";
  Representation rep = Representation::kMatrix;
  envs::EnvOptions opts;
  bool dqn = false;
  const std::uint64_t seed = m.at("seed").get<std::uint64_t>();
  if (m.contains("walkthrough")) {
    rep = bench::walkthrough_representation(
        bench::parse_walkthrough(m["walkthrough"].get<std::string>()));
    opts.variant = tasks::ActionSetVariant::kWalkthrough;
  } else {
    const ExperimentConfig c = bench::config_from_json(m.at("config").dump());
    task_name = c.task;
    rep = bench::representation_of(c.algorithm);
    opts = bench::env_options(c);
    dqn = bench::is_dqn(c.algorithm);
  }
  const tasks::TaskSpec& task = tasks::get_task(task_name);
  envs::Environment env = envs::make_env(task, rep, opts);
  const auto keys = read_states_tsv(dir / "states.tsv");
  const auto trained_index = [&](std::size_t s) -> std::optional<std::size_t> {
    const auto it = keys.find(env.state_key(s));
    if (it == keys.end()) return std::nullopt;
    return it->second;
  };

  agents::Rng rng(seed);
  agents::Rollout rollout;
  if (dqn) {
    std::istringstream is(read_file(dir / "policy.ckpt"));
    const agents::PolicyNet net = agents::read_checkpoint(is);
    if (static_cast<std::size_t>(net.n_actions()) != env.n_actions()) {
      throw ConfigError("checkpoint has " + std::to_string(net.n_actions()) +
                        " outputs, environment has " + std::to_string(env.n_actions()) +
                        " actions");
    }
    rollout = agents::greedy_rollout(
        env,
        [&](std::size_t s, agents::Rng& r) {
          Eigen::VectorXd q;
          if (net.encoding == agents::StateEncoding::kFlat) {
            q = net.online.forward(agents::flat_features(env.registry().value(s)));
          } else {
            const auto idx = trained_index(s);
            q = idx && *idx < static_cast<std::size_t>(net.input_dim())
                    ? net.online.forward_one_hot(*idx)
                    : net.online.forward(Eigen::VectorXd::Zero(net.input_dim()));
          }
          return agents::argmax_tie_break(std::span<const double>(q.data(), q.size()), r);
        },
        rng);
  } else {
    std::istringstream is(read_file(dir / "qtable.tsv"));
    std::vector<std::string> labels;
    const agents::QTable table = agents::read_qtable(is, &labels);
    if (labels.size() != env.n_actions()) throw ConfigError("Q-table does not match the action set");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != env.actions()[i].label()) {
        throw ConfigError("Q-table column " + labels[i] + " does not match action " +
                          env.actions()[i].label());
      }
    }
    const std::vector<double> zeros(table.n_actions(), 0.0);
    rollout = agents::greedy_rollout(
        env,
        [&](std::size_t s, agents::Rng& r) {
          const auto idx = trained_index(s);
          return idx ? agents::greedy_action(table, *idx, r) : agents::argmax_tie_break(zeros, r);
        },
        rng);
  }

  const double fidelity = env.current_fidelity();
  const auto circuit = circuit_from_trajectory(rollout.actions, rep);
  out << "trajectory:";
  for (const ActionSpec& s : rollout.actions) out << ' ' << s.label();
  out << '\n';
  out << "circuit: " << circuit_label(circuit) << '\n';
  out << "fidelity " << std::fixed << std::setprecision(6) << fidelity << std::defaultfloat
      << (rollout.success ? ", target reached\n" : ", target not reached\n");
  return kOk;
}

// -------------------------------------------------------------------- bench

struct BenchArgs {
  std::string task = "all";
  std::string algo = "all";
  std::string out;
  bool traces = false;
  ConfigLayers layers;
};

int run_bench(const BenchArgs& a, const std::vector<std::string>& argv, std::ostream& out,
              std::ostream& err) {
  std::vector<std::string> task_list;
  if (a.task == "all") {
    task_list = tasks::task_names();
  } else {
    tasks::get_task(a.task);
    task_list = {a.task};
  }
  std::vector<Algorithm> algo_list;
  if (a.algo == "all") {
    algo_list = bench::all_algorithms();
  } else {
    algo_list = {bench::parse_algorithm(a.algo)};
  }
  const ResolvedLayers layers = resolve_layers(a.layers);

  std::vector<ExperimentConfig> configs;
  for (const std::string& t : task_list) {
    for (Algorithm alg : algo_list) {
      // undefined cells are skipped in a grid, rejected when named explicitly
      if (!bench::is_defined(t, alg) && (a.task == "all" || a.algo == "all")) continue;
      ExperimentConfig c = build_experiment(t, alg, layers);
      c.validate();
      configs.push_back(std::move(c));
    }
  }
  if (configs.empty()) throw ConfigError("no benchmark cells selected");

  const fs::path dir =
      output_dir(a.out, "bench-s" + std::to_string(configs.front().seed));
  ensure_dir(dir);

  std::vector<bench::BenchReport> reports;
  std::string traces;
  bool failed = false;
  for (const ExperimentConfig& c : configs) {
    bench::BenchReport r = bench::run_benchmark(c);
    err << c.task << ' ' << bench::to_string(c.algorithm) << ": " << r.successes << '/'
        << r.completed_rounds << " rounds succeeded";
    if (r.error) {
      err << " (error: " << *r.error << ')';
      failed = true;
    }
    err << '\n';
    if (a.traces) traces += bench::traces_jsonl(r);
    reports.push_back(std::move(r));
  }

  const std::string table = bench::render_table(reports);
  write_file(dir / "report.json", bench::report_json(reports));
  write_file(dir / "table.txt", table);
  ordered_json artifacts = {{"report", "report.json"}, {"table", "table.txt"}};
  if (a.traces) {
    write_file(dir / "traces.jsonl", traces);
    artifacts["traces"] = "traces.jsonl";
  }
  ordered_json m = manifest_base("bench", argv);
  m["seed"] = configs.front().seed;
  ordered_json cells = ordered_json::array();
  for (const ExperimentConfig& c : configs) cells.push_back(ordered_json::parse(bench::config_json(c)));
  m["configs"] = std::move(cells);
  m["artifacts"] = std::move(artifacts);
  write_file(dir / "manifest.json", m.dump(2) + "\n");

  out << table;
  out << "artifacts: " << dir.string() << '\n';
  return failed ? kRuntime : kOk;
}

// ------------------------------------------------------- verify, tasks, show

int run_verify(const std::string& corrupt, std::ostream& out) {
  verify::VerifyOptions opts;
  if (!corrupt.empty()) opts.corrupt_gate = gatealg::parse_gate(corrupt).kind;
  const auto checks = verify::run_identity_suite(opts);
  int passed = 0;
  for (const verify::IdentityCheck& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    passed += c.passed;
  }
  out << passed << '/' << checks.size() << " checks passed\n";
  return passed == static_cast<int>(checks.size()) ? kOk : kVerification;
}

int run_tasks(bool json, std::ostream& out) {
  ordered_json arr = ordered_json::array();
  for (const std::string& name : tasks::task_names()) {
    const tasks::TaskSpec& t = tasks::get_task(name);
    std::vector<std::string> reps;
    for (Representation r : {Representation::kMatrix, Representation::kReverse, Representation::kTn}) {
      if (t.supports(r)) reps.emplace_back(to_string(r));
    }
    ordered_json j;
    j["name"] = t.name;
    j["title"] = t.title;
    j["qubits"] = t.n_qubits;
    j["solution_length"] = t.solution_length;
    j["actions"] = t.action_sets.at(Representation::kMatrix).size();
    j["space_size"] = t.reference_space_size;
    j["representations"] = reps;
    j["solution"] = circuit_label(t.solution);
    arr.push_back(std::move(j));
  }
  if (json) {
    out << arr.dump(2) << '\n';
    return kOk;
  }
  out << std::left << std::setw(16) << "task" << std::setw(8) << "qubits" << std::setw(8)
      << "length" << std::setw(9) << "actions" << std::setw(12) << "space" << std::setw(20)
      << "representations" << "solution\n";
  for (const auto& j : arr) {
    std::string reps;
    for (const auto& r : j["representations"]) reps += (reps.empty() ? "" : ",") + r.get<std::string>();
    out << std::setw(16) << j["name"].get<std::string>() << std::setw(8) << j["qubits"].get<int>()
        << std::setw(8) << j["solution_length"].get<int>() << std::setw(9)
        << j["actions"].get<std::size_t>() << std::setw(12) << j["space_size"].get<std::uint64_t>()
        << std::setw(20) << reps << j["solution"].get<std::string>() << '\n';
  }
  return kOk;
}

int run_show_qtable(const std::string& file, std::ostream& out) {
  std::istringstream is(read_file(file));
  std::vector<std::string> labels;
  const agents::QTable table = agents::read_qtable(is, &labels);
  std::vector<std::size_t> width;
  for (const std::string& l : labels) width.push_back(std::max<std::size_t>(l.size(), 8) + 2);
  out << std::right << std::setw(7) << "state";
  for (std::size_t a = 0; a < labels.size(); ++a) out << std::setw(static_cast<int>(width[a])) << labels[a];
  out << '\n' << std::fixed << std::setprecision(3);
  for (std::size_t s = 0; s < table.n_rows(); ++s) {
    out << std::setw(7) << s;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      out << std::setw(static_cast<int>(width[a])) << table.at(s, a);
    }
    out << '\n';
  }
  out << std::defaultfloat;
  return kOk;
}

}  // namespace

Settings parse_config_text(const std::string& text) {
  Settings out;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    out.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
  const auto i = [&key](int ExperimentConfig::*field) -> Setter {
    return [field, key](ExperimentConfig& x, const std::string& v) { x.*field = parse_number<int>(key, v); };
  };
  const auto d = [&key](double ExperimentConfig::*field) -> Setter {
    return [field, key](ExperimentConfig& x, const std::string& v) { x.*field = parse_number<double>(key, v); };
  };
  const std::unordered_map<std::string, Setter> setters = {
      {"rounds", i(&ExperimentConfig::rounds)},
      {"episodes", i(&ExperimentConfig::episodes)},
      {"max_steps", i(&ExperimentConfig::max_steps)},
      {"jobs", i(&ExperimentConfig::jobs)},
      {"rollouts", i(&ExperimentConfig::rollouts)},
      {"threshold", d(&ExperimentConfig::threshold)},
      {"success_reward", d(&ExperimentConfig::success_reward)},
      {"seed", [&](ExperimentConfig& x, const std::string& v) { x.seed = parse_number<std::uint64_t>(key, v); }},
      {"use_expert", [&](ExperimentConfig& x, const std::string& v) { x.use_expert = parse_bool(key, v); }},
      {"alpha", [&](ExperimentConfig& x, const std::string& v) { x.q.alpha = parse_number<double>(key, v); }},
      {"gamma",
       [&](ExperimentConfig& x, const std::string& v) {
         x.q.gamma = x.dqn.gamma = parse_number<double>(key, v);
       }},
      {"epsilon",
       [&](ExperimentConfig& x, const std::string& v) {
         x.q.epsilon = x.dqn.epsilon = parse_number<double>(key, v);
       }},
      {"epsilon_decay",
       [&](ExperimentConfig& x, const std::string& v) {
         x.q.epsilon_decay = x.dqn.epsilon_decay = parse_number<double>(key, v);
       }},
      {"epsilon_min",
       [&](ExperimentConfig& x, const std::string& v) {
         x.q.epsilon_min = x.dqn.epsilon_min = parse_number<double>(key, v);
       }},
      {"learning_rate",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.learning_rate = parse_number<double>(key, v); }},
      {"max_grad_norm",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.max_grad_norm = parse_number<double>(key, v); }},
      {"batch_size",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.batch_size = parse_number<int>(key, v); }},
      {"buffer_capacity",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.buffer_capacity = parse_number<int>(key, v); }},
      {"hidden", [&](ExperimentConfig& x, const std::string& v) { x.dqn.hidden = parse_int_list(key, v); }},
      {"target_mode",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.target_mode = agents::parse_target_mode(v); }},
      {"target_period",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.target_period = parse_number<int>(key, v); }},
      {"tau", [&](ExperimentConfig& x, const std::string& v) { x.dqn.tau = parse_number<double>(key, v); }},
      {"expert_passes",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.expert_passes = parse_number<int>(key, v); }},
      {"encoding",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.encoding = agents::parse_encoding(v); }},
      {"input_dim",
       [&](ExperimentConfig& x, const std::string& v) { x.dqn.input_dim = parse_number<int>(key, v); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown setting '" + key + "'");
  it->second(c, value);
}

std::string default_out_root() {
  const char* env = std::getenv("QCSYNTH_OUT_DIR");
  return env && *env ? env : "runs";
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum circuit synthesis with tabular and deep Q-learning", "qcsynth"};
  app.set_version_flag("--version", QCSYNTH_VERSION);
  app.require_subcommand(1);

  std::vector<std::string> args(argv, argv + argc);
  std::function<int()> action;

  TrainArgs train;
  CLI::App* t = app.add_subcommand("train", "Train one agent and save its artifacts");
  t->add_option("task", train.task, "Task name (see `qcsynth tasks`)");
  t->add_option("algo", train.algo, "qlearn, dqn, or a full algorithm name such as qlearn_tn");
  t->add_option("extra", train.extra, "Optional REPRESENTATION and PRESET");
  t->add_option("--walkthrough", train.walkthrough, "Reproduce table1, table2 or table3");
  t->add_option("--out", train.out, "Output directory");
  add_config_flags(t, train.layers);
  t->callback([&] { action = [&] { return run_train(train, args, out); }; });

  BenchArgs bench_args;
  CLI::App* b = app.add_subcommand("bench", "Run success-ratio benchmarks");
  b->add_option("task", bench_args.task, "Task name or all");
  b->add_option("algo", bench_args.algo, "Algorithm name or all");
  b->add_option("--rounds", bench_args.layers.rounds, "Rounds per cell");
  b->add_option("--jobs", bench_args.layers.jobs, "Worker threads per cell");
  b->add_option("--out", bench_args.out, "Output directory");
  b->add_flag("--traces", bench_args.traces, "Also write per-episode traces");
  add_config_flags(b, bench_args.layers);
  b->callback([&] { action = [&] { return run_bench(bench_args, args, out, err); }; });

  std::string corrupt;
  CLI::App* v = app.add_subcommand("verify", "Check circuit identities and state-space sizes");
  v->add_option("--corrupt-gate", corrupt, "Negative control: perturb every use of this gate");
  v->callback([&] { action = [&] { return run_verify(corrupt, out); }; });

  bool tasks_json = false;
  CLI::App* ts = app.add_subcommand("tasks", "List the synthesis tasks");
  ts->add_flag("--json", tasks_json, "JSON output");
  ts->callback([&] { action = [&] { return run_tasks(tasks_json, out); }; });

  std::string qtable_file;
  CLI::App* sq = app.add_subcommand("show-qtable", "Print a saved Q-table");
  sq->add_option("file", qtable_file, "qtable.tsv")->required();
  sq->callback([&] { action = [&] { return run_show_qtable(qtable_file, out); }; });

  std::string run_dir;
  CLI::App* ro = app.add_subcommand("rollout", "Greedy rollout from a saved train run");
  ro->add_option("run_dir", run_dir, "Directory written by train")->required();
  ro->callback([&] { action = [&] { return run_rollout(run_dir, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  try {
    return action();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace qcsynth::cli
