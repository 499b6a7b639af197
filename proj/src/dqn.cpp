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

#include "qcsynth/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace qcsynth::agents {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------- replay

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay buffer capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(const Transition& t) {
  if (items_.size() < capacity_) {
    items_.push_back(t);
    return;
  }
  items_[head_] = t;
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw std::out_of_range("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (n > items_.size()) throw std::invalid_argument("sample larger than the buffer");
  // Floyd's algorithm; picks are kept in draw order
  std::vector<std::size_t> picked;
  picked.reserve(n);
  std::unordered_set<std::size_t> seen;
  const std::size_t m = items_.size();
  for (std::size_t j = m - n; j < m; ++j) {
    std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (seen.count(t)) t = j;
    seen.insert(t);
    picked.push_back(t);
  }
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i : picked) out.push_back(items_[i]);
  return out;
}

// ---------------------------------------------------------------- mlp

Mlp Mlp::zeros(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw ConfigError("network needs an input and an output size");
  Mlp m;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    if (sizes[l] < 1 || sizes[l + 1] < 1) throw ConfigError("layer sizes must be positive");
    m.weights.push_back(MatrixXd::Zero(sizes[l + 1], sizes[l]));
    m.biases.push_back(VectorXd::Zero(sizes[l + 1]));
  }
  return m;
}

Mlp::Mlp(const std::vector<int>& sizes, Rng& rng) : Mlp(zeros(sizes)) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(weights[l].cols()));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) weights[l](r, c) = u(rng);
    for (Eigen::Index r = 0; r < biases[l].size(); ++r) biases[l](r) = u(rng);
  }
}

std::size_t Mlp::n_params() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

VectorXd Mlp::forward(const VectorXd& x) const {
  if (x.size() != input_dim()) throw std::invalid_argument("input size mismatch");
  VectorXd h = x;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    h = weights[l] * h + biases[l];
    if (l + 1 < weights.size()) h = h.cwiseMax(0.0);
  }
  return h;
}

VectorXd Mlp::forward_one_hot(std::size_t index) const {
  if (index >= static_cast<std::size_t>(input_dim())) {
    throw std::out_of_range("state index " + std::to_string(index) +
                            " exceeds the network input width " + std::to_string(input_dim()));
  }
  VectorXd h = weights[0].col(static_cast<Eigen::Index>(index)) + biases[0];
  for (std::size_t l = 1; l < weights.size(); ++l) {
    h = h.cwiseMax(0.0);
    h = weights[l] * h + biases[l];
  }
  return h;
}

MatrixXd Mlp::input_jacobian(const VectorXd& x) const {
  if (x.size() != input_dim()) throw std::invalid_argument("input size mismatch");
  MatrixXd j = weights[0];
  VectorXd z = weights[0] * x + biases[0];
  for (std::size_t l = 1; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < z.size(); ++r) {
      if (z(r) <= 0.0) j.row(r).setZero();
    }
    const VectorXd h = z.cwiseMax(0.0);
    j = weights[l] * j;
    z = weights[l] * h + biases[l];
  }
  return j;
}

std::vector<double> Mlp::flat_params() const {
  std::vector<double> p;
  p.reserve(n_params());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) p.push_back(weights[l](r, c));
    for (Eigen::Index r = 0; r < biases[l].size(); ++r) p.push_back(biases[l](r));
  }
  return p;
}

void Mlp::set_flat_params(std::span<const double> p) {
  if (p.size() != n_params()) throw std::invalid_argument("parameter count mismatch");
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) weights[l](r, c) = p[k++];
    for (Eigen::Index r = 0; r < biases[l].size(); ++r) biases[l](r) = p[k++];
  }
}

bool Mlp::same_shape(const Mlp& other) const {
  if (weights.size() != other.weights.size()) return false;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != other.weights[l].rows() ||
        weights[l].cols() != other.weights[l].cols()) {
      return false;
    }
  }
  return true;
}

bool Mlp::all_finite() const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  }
  return true;
}

// ---------------------------------------------------------------- policy net

std::string to_string(StateEncoding e) { return e == StateEncoding::kOneHot ? "onehot" : "flat"; }

StateEncoding parse_encoding(const std::string& s) {
  if (s == "onehot" || s == "one-hot") return StateEncoding::kOneHot;
  if (s == "flat") return StateEncoding::kFlat;
  throw ConfigError("unknown state encoding '" + s + "' (expected onehot or flat)");
}

std::string to_string(TargetUpdateMode m) { return m == TargetUpdateMode::kHard ? "hard" : "soft"; }

TargetUpdateMode parse_target_mode(const std::string& s) {
  if (s == "hard") return TargetUpdateMode::kHard;
  if (s == "soft") return TargetUpdateMode::kSoft;
  throw ConfigError("unknown target update mode '" + s + "' (expected hard or soft)");
}

PolicyNet make_policy_net(int input_dim, int n_actions, const std::vector<int>& hidden, Rng& rng,
                          StateEncoding encoding) {
  std::vector<int> sizes{input_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(n_actions);
  PolicyNet net;
  net.online = Mlp(sizes, rng);
  net.target = net.online;
  net.encoding = encoding;
  return net;
}

VectorXd flat_features(const envs::StateValue& value) {
  const auto pack = [](std::span<const gatealg::Complex> z) {
    VectorXd v(2 * static_cast<Eigen::Index>(z.size()));
    for (std::size_t i = 0; i < z.size(); ++i) {
      v(2 * i) = z[i].real();
      v(2 * i + 1) = z[i].imag();
    }
    return v;
  };
  if (const auto* u = std::get_if<gatealg::UnitaryMatrix>(&value)) return pack(u->entries());
  return pack(std::get<gatealg::StateVector>(value).amplitudes());
}

int flat_feature_dim(const tasks::TaskSpec& task, Representation rep) {
  const int dim = 1 << task.n_qubits;
  return rep == Representation::kTn ? 2 * dim : 2 * dim * dim;
}

void sync_features(PolicyNet& net, const envs::Environment& env) {
  if (net.encoding != StateEncoding::kFlat) return;
  for (std::size_t s = net.features.size(); s < env.registry_size(); ++s) {
    VectorXd f = flat_features(env.registry().value(s));
    if (f.size() != net.input_dim()) throw std::invalid_argument("feature width mismatch");
    net.features.push_back(std::move(f));
  }
}

VectorXd net_forward(const PolicyNet& net, std::size_t state) {
  if (net.encoding == StateEncoding::kOneHot) return net.online.forward_one_hot(state);
  if (state >= net.features.size()) throw std::out_of_range("no features cached for state");
  return net.online.forward(net.features[state]);
}

namespace {

// Post-ReLU activations of every hidden layer plus the linear output, one
// column per sample.
struct BatchPass {
  std::vector<MatrixXd> hidden;
  MatrixXd out;
};

BatchPass forward_batch(const Mlp& m, const PolicyNet& net, const std::vector<std::size_t>& states) {
  const Eigen::Index b = static_cast<Eigen::Index>(states.size());
  MatrixXd z(m.weights[0].rows(), b);
  if (net.encoding == StateEncoding::kOneHot) {
    for (Eigen::Index i = 0; i < b; ++i) {
      if (states[i] >= static_cast<std::size_t>(m.input_dim())) {
        throw std::out_of_range("state index exceeds the network input width");
      }
      z.col(i) = m.weights[0].col(static_cast<Eigen::Index>(states[i]));
    }
  } else {
    MatrixXd x(m.input_dim(), b);
    for (Eigen::Index i = 0; i < b; ++i) x.col(i) = net.features.at(states[i]);
    z.noalias() = m.weights[0] * x;
  }
  z.colwise() += m.biases[0];
  BatchPass pass;
  for (std::size_t l = 1; l < m.weights.size(); ++l) {
    pass.hidden.push_back(z.cwiseMax(0.0));
    z.noalias() = m.weights[l] * pass.hidden.back();
    z.colwise() += m.biases[l];
  }
  pass.out = std::move(z);
  return pass;
}

struct Backprop {
  double loss = 0.0;
  std::vector<std::size_t> states;
  std::vector<MatrixXd> dW;  // dW[0] left empty for one-hot input
  std::vector<VectorXd> db;
  MatrixXd dz0;  // first-layer pre-activation gradient, one column per sample
};

Backprop backprop(const PolicyNet& net, std::span<const Transition> batch, double gamma) {
  if (batch.empty()) throw std::invalid_argument("empty training batch");
  Backprop g;
  std::vector<std::size_t> next;
  for (const Transition& t : batch) {
    g.states.push_back(t.state);
    next.push_back(t.next_state);
  }
  const BatchPass cur = forward_batch(net.online, net, g.states);
  const BatchPass tgt = forward_batch(net.target, net, next);
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());

  MatrixXd dz = MatrixXd::Zero(cur.out.rows(), b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Transition& t = batch[static_cast<std::size_t>(i)];
    if (t.action >= static_cast<std::size_t>(cur.out.rows())) {
      throw std::out_of_range("transition action out of range");
    }
    const double y = t.done ? t.reward : t.reward + gamma * tgt.out.col(i).maxCoeff();
    const double err = cur.out(static_cast<Eigen::Index>(t.action), i) - y;
    g.loss += err * err;
    dz(static_cast<Eigen::Index>(t.action), i) = 2.0 * err / static_cast<double>(b);
  }
  g.loss /= static_cast<double>(b);

  const std::size_t n_layers = net.online.weights.size();
  g.dW.resize(n_layers);
  g.db.resize(n_layers);
  for (std::size_t l = n_layers - 1; l >= 1; --l) {
    const MatrixXd& h = cur.hidden[l - 1];
    g.dW[l].noalias() = dz * h.transpose();
    g.db[l] = dz.rowwise().sum();
    MatrixXd dh = net.online.weights[l].transpose() * dz;
    dz = dh.cwiseProduct((h.array() > 0.0).cast<double>().matrix());
  }
  g.db[0] = dz.rowwise().sum();
  if (net.encoding == StateEncoding::kFlat) {
    MatrixXd x(net.input_dim(), b);
    for (Eigen::Index i = 0; i < b; ++i) x.col(i) = net.features.at(g.states[i]);
    g.dW[0].noalias() = dz * x.transpose();
  }
  g.dz0 = std::move(dz);
  return g;
}

}  // namespace

double net_loss(const PolicyNet& net, std::span<const Transition> batch, double gamma) {
  if (batch.empty()) throw std::invalid_argument("empty training batch");
  std::vector<std::size_t> s, n;
  for (const Transition& t : batch) {
    s.push_back(t.state);
    n.push_back(t.next_state);
  }
  const MatrixXd q = forward_batch(net.online, net, s).out;
  const MatrixXd qt = forward_batch(net.target, net, n).out;
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = batch[i];
    const Eigen::Index c = static_cast<Eigen::Index>(i);
    const double y = t.done ? t.reward : t.reward + gamma * qt.col(c).maxCoeff();
    const double err = q(static_cast<Eigen::Index>(t.action), c) - y;
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

LossGradient net_loss_gradient(const PolicyNet& net, std::span<const Transition> batch,
                               double gamma) {
  Backprop g = backprop(net, batch, gamma);
  if (net.encoding == StateEncoding::kOneHot) {
    g.dW[0] = MatrixXd::Zero(net.online.weights[0].rows(), net.online.weights[0].cols());
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      g.dW[0].col(static_cast<Eigen::Index>(g.states[i])) += g.dz0.col(static_cast<Eigen::Index>(i));
    }
  }
  Mlp shaped;
  shaped.weights = std::move(g.dW);
  shaped.biases = std::move(g.db);
  return {g.loss, shaped.flat_params()};
}

double net_train_step(PolicyNet& net, std::span<const Transition> batch, double gamma, double lr,
                      double max_grad_norm) {
  const Backprop g = backprop(net, batch, gamma);
  Mlp& m = net.online;
  if (max_grad_norm > 0.0) {
    double sq = g.db[0].squaredNorm();
    for (std::size_t l = 1; l < m.weights.size(); ++l) sq += g.dW[l].squaredNorm() + g.db[l].squaredNorm();
    if (net.encoding == StateEncoding::kOneHot) {
      // columns hit by repeated states accumulate before the norm is taken
      std::vector<std::size_t> order(g.states.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return g.states[a] < g.states[b]; });
      for (std::size_t i = 0; i < order.size();) {
        VectorXd col = g.dz0.col(static_cast<Eigen::Index>(order[i]));
        std::size_t j = i + 1;
        for (; j < order.size() && g.states[order[j]] == g.states[order[i]]; ++j) {
          col += g.dz0.col(static_cast<Eigen::Index>(order[j]));
        }
        sq += col.squaredNorm();
        i = j;
      }
    } else {
      sq += g.dW[0].squaredNorm();
    }
    const double norm = std::sqrt(sq);
    if (norm > max_grad_norm) lr *= max_grad_norm / norm;
  }
  for (std::size_t l = 1; l < m.weights.size(); ++l) {
    m.weights[l] -= lr * g.dW[l];
    m.biases[l] -= lr * g.db[l];
  }
  m.biases[0] -= lr * g.db[0];
  if (net.encoding == StateEncoding::kOneHot) {
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      m.weights[0].col(static_cast<Eigen::Index>(g.states[i])) -=
          lr * g.dz0.col(static_cast<Eigen::Index>(i));
    }
  } else {
    m.weights[0] -= lr * g.dW[0];
  }
  return g.loss;
}

void update_target(PolicyNet& net, TargetUpdateMode mode, double tau) {
  if (!net.online.same_shape(net.target)) throw std::logic_error("target shape mismatch");
  if (mode == TargetUpdateMode::kHard) {
    net.target = net.online;
    return;
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  for (std::size_t l = 0; l < net.online.weights.size(); ++l) {
    net.target.weights[l] = (1.0 - tau) * net.target.weights[l] + tau * net.online.weights[l];
    net.target.biases[l] = (1.0 - tau) * net.target.biases[l] + tau * net.online.biases[l];
  }
}

// ---------------------------------------------------------------- training

void DqnConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (!(epsilon_min >= 0.0 && epsilon_min <= 1.0)) throw ConfigError("epsilon_min must lie in [0, 1]");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) {
    throw ConfigError("epsilon_decay must lie in (0, 1]");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (buffer_capacity < batch_size) throw ConfigError("buffer_capacity must be >= batch_size");
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (hidden.empty()) throw ConfigError("at least one hidden layer is required");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  }
  if (target_period < 1) throw ConfigError("target_period must be >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  if (expert_passes < 0) throw ConfigError("expert_passes must be >= 0");
  if (input_dim < 0) throw ConfigError("input_dim must be >= 0");
}

std::size_t dqn_input_dim(std::size_t n_actions, const DqnConfig& config,
                          std::size_t expert_length, std::size_t preregistered) {
  std::size_t bound = std::numeric_limits<std::size_t>::max();
  try {
    bound = static_cast<std::size_t>(
        tasks::space_size(n_actions, static_cast<std::uint64_t>(config.max_steps)).bound);
  } catch (const std::overflow_error&) {
  }
  const std::size_t steps = static_cast<std::size_t>(config.episodes + 1) *
                            static_cast<std::size_t>(config.max_steps);
  const std::size_t reachable = preregistered + steps + expert_length;
  return std::min(bound, reachable);
}

namespace {

std::size_t choose_dqn_action(const PolicyNet& net, std::size_t state, double epsilon, Rng& rng) {
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(
        0, static_cast<std::size_t>(net.n_actions()) - 1)(rng);
  }
  const VectorXd q = net_forward(net, state);
  return argmax_tie_break(std::span<const double>(q.data(), static_cast<std::size_t>(q.size())), rng);
}

}  // namespace

DqnTrainResult train_dqn(envs::Environment& env, const DqnConfig& config,
                         const tasks::ExpertTrajectory* expert, Rng& rng) {
  config.validate();
  std::vector<std::size_t> expert_indices;
  if (expert) {
    for (const ActionSpec& a : expert->actions) {
      const auto idx = env.find_action(a);
      if (!idx) throw ConfigError("expert action " + a.label() + " is not in the action set");
      expert_indices.push_back(*idx);
    }
  }

  int input_dim = config.input_dim;
  if (config.encoding == StateEncoding::kFlat) {
    input_dim = flat_feature_dim(tasks::get_task(env.task_name()), env.representation());
  } else if (input_dim == 0) {
    input_dim = static_cast<int>(
        dqn_input_dim(env.n_actions(), config, expert_indices.size(), env.registry_size()));
  }

  DqnTrainResult result;
  result.net = make_policy_net(input_dim, static_cast<int>(env.n_actions()), config.hidden, rng,
                               config.encoding);
  PolicyNet& net = result.net;
  ReplayBuffer buffer(static_cast<std::size_t>(config.buffer_capacity));
  const double success_reward = env.reward_rule().success_reward;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  const auto replay = [&] {
    if (buffer.size() < batch) return;
    const std::vector<Transition> sample = buffer.sample(batch, rng);
    net_train_step(net, sample, config.gamma, config.learning_rate, config.max_grad_norm);
    ++result.gradient_steps;
  };
  const auto target_tau = config.target_mode == TargetUpdateMode::kHard ? 1.0 : config.tau;

  sync_features(net, env);
  if (expert) {
    for (int pass = 0; pass < config.expert_passes; ++pass) {
      std::size_t s = env.reset();
      for (std::size_t a : expert_indices) {
        if (env.done()) break;
        const envs::StepResult r = env.step(a);
        sync_features(net, env);
        buffer.push({s, a, r.reward, r.next_index, r.reward >= success_reward});
        replay();
        s = r.next_index;
      }
      update_target(net, config.target_mode, target_tau);
    }
  }

  double epsilon = config.epsilon;
  result.episodes.reserve(static_cast<std::size_t>(config.episodes));
  for (int ep = 0; ep < config.episodes; ++ep) {
    EpisodeTrace trace{ep, 0, 0.0, false, epsilon};
    std::size_t s = env.reset();
    for (int step = 0; step < config.max_steps; ++step) {
      const std::size_t a = choose_dqn_action(net, s, epsilon, rng);
      const envs::StepResult r = env.step(a);
      sync_features(net, env);
      const bool success = r.reward >= success_reward;
      buffer.push({s, a, r.reward, r.next_index, success});
      replay();
      trace.total_reward += r.reward;
      trace.success = trace.success || success;
      ++trace.steps;
      s = r.next_index;
      if (r.done) break;
    }
    result.episodes.push_back(trace);
    if ((ep + 1) % config.target_period == 0) update_target(net, config.target_mode, target_tau);
    epsilon = std::max(config.epsilon_min, epsilon * config.epsilon_decay);
  }
  result.buffer_size = buffer.size();
  return result;
}

Rollout greedy_rollout(envs::Environment& env, PolicyNet& net, Rng& rng) {
  return greedy_rollout(
      env,
      [&](std::size_t s, Rng& r) {
        sync_features(net, env);
        return choose_dqn_action(net, s, 0.0, r);
      },
      rng);
}

// ---------------------------------------------------------------- checkpoint

namespace {

constexpr const char* kCheckpointHeader = "qcsynth-policynet 1";

void write_mlp(std::ostream& os, const Mlp& m) {
  char buf[40];
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    os << "layer " << m.weights[l].rows() << ' ' << m.weights[l].cols() << '\n';
    for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g\n", m.weights[l](r, c));
        os << buf;
      }
    }
    for (Eigen::Index r = 0; r < m.biases[l].size(); ++r) {
      std::snprintf(buf, sizeof buf, "%.17g\n", m.biases[l](r));
      os << buf;
    }
  }
}

Mlp read_mlp(std::istream& is, std::size_t n_layers) {
  Mlp m;
  for (std::size_t l = 0; l < n_layers; ++l) {
    std::string tag;
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> tag >> rows >> cols) || tag != "layer" || rows < 1 || cols < 1) {
      throw std::runtime_error("malformed checkpoint layer header");
    }
    MatrixXd w(rows, cols);
    VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(is >> w(r, c))) throw std::runtime_error("truncated checkpoint weights");
    for (Eigen::Index r = 0; r < rows; ++r)
      if (!(is >> b(r))) throw std::runtime_error("truncated checkpoint biases");
    if (l > 0 && m.weights.back().rows() != cols) {
      throw std::runtime_error("checkpoint layer shapes do not chain");
    }
    m.weights.push_back(std::move(w));
    m.biases.push_back(std::move(b));
  }
  return m;
}

}  // namespace

void write_checkpoint(std::ostream& os, const PolicyNet& net) {
  os << kCheckpointHeader << '\n';
  os << "encoding " << to_string(net.encoding) << '\n';
  os << "layers " << net.online.weights.size() << '\n';
  write_mlp(os, net.online);
  write_mlp(os, net.target);
}

PolicyNet read_checkpoint(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCheckpointHeader) {
    throw std::runtime_error("not a policy network checkpoint");
  }
  std::string tag, enc;
  std::size_t n_layers = 0;
  if (!(is >> tag >> enc) || tag != "encoding") throw std::runtime_error("missing encoding line");
  if (!(is >> tag >> n_layers) || tag != "layers" || n_layers == 0) {
    throw std::runtime_error("missing layer count");
  }
  PolicyNet net;
  try {
    net.encoding = parse_encoding(enc);
  } catch (const ConfigError& e) {
    throw std::runtime_error(e.what());
  }
  net.online = read_mlp(is, n_layers);
  net.target = read_mlp(is, n_layers);
  if (!net.online.same_shape(net.target)) throw std::runtime_error("target shape mismatch");
  return net;
}

}  // namespace qcsynth::agents
