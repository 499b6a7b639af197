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

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qcsynth/env.hpp"
#include "qcsynth/qlearning.hpp"

namespace qcsynth::agents {

struct Transition {
  std::size_t state = 0;
  std::size_t action = 0;
  double reward = 0.0;
  std::size_t next_state = 0;
  bool done = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Fixed-capacity ring; the oldest transition is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 10000);

  void push(const Transition& t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// Oldest-first access.
  const Transition& at(std::size_t i) const;

  /// `n` distinct stored transitions, uniformly without replacement.
  std::vector<Transition> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> items_;
};

/// Dense ReLU network; every layer but the last is followed by ReLU.
/// weights[l] has shape (out, in).
struct Mlp {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  Mlp() = default;
  /// sizes = {input, hidden..., output}. Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  Mlp(const std::vector<int>& sizes, Rng& rng);
  static Mlp zeros(const std::vector<int>& sizes);

  int input_dim() const { return static_cast<int>(weights.front().cols()); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }
  std::size_t n_params() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  /// Forward pass for the one-hot encoding of `index`.
  Eigen::VectorXd forward_one_hot(std::size_t index) const;

  /// d output / d input at x, shape (output, input).
  Eigen::MatrixXd input_jacobian(const Eigen::VectorXd& x) const;

  /// Parameters flattened layer by layer: weights row-major, then biases.
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> p);

  bool same_shape(const Mlp& other) const;
  bool all_finite() const;
};

enum class StateEncoding { kOneHot, kFlat };

std::string to_string(StateEncoding e);
StateEncoding parse_encoding(const std::string& s);

/// Online network plus its target copy. With the flat encoding, features[s]
/// holds the real/imaginary parts of registry entry s.
struct PolicyNet {
  Mlp online;
  Mlp target;
  StateEncoding encoding = StateEncoding::kOneHot;
  std::vector<Eigen::VectorXd> features;

  int input_dim() const { return online.input_dim(); }
  int n_actions() const { return online.output_dim(); }
};

/// input -> hidden... -> n_actions with the target initialised as a copy.
PolicyNet make_policy_net(int input_dim, int n_actions, const std::vector<int>& hidden, Rng& rng,
                          StateEncoding encoding = StateEncoding::kOneHot);

/// Real and imaginary parts of a unitary or state vector, row-major.
Eigen::VectorXd flat_features(const envs::StateValue& value);
int flat_feature_dim(const tasks::TaskSpec& task, Representation rep);

/// Appends flat features for registry entries not yet cached.
void sync_features(PolicyNet& net, const envs::Environment& env);

/// Online Q-values. Throws std::out_of_range when the state has no input slot.
Eigen::VectorXd net_forward(const PolicyNet& net, std::size_t state);

/// Gradient of the batch loss with respect to the online parameters, laid
/// out as in Mlp::flat_params.
struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Mean over the batch of (Q(s,a|online) - y)^2 with y = r for done
/// transitions and r + gamma max Q(s'|target) otherwise.
double net_loss(const PolicyNet& net, std::span<const Transition> batch, double gamma);
LossGradient net_loss_gradient(const PolicyNet& net, std::span<const Transition> batch,
                               double gamma);

/// One SGD step on the online network. Returns the loss before the step.
/// With max_grad_norm > 0 the step is rescaled so the parameter update has
/// gradient norm at most max_grad_norm.
double net_train_step(PolicyNet& net, std::span<const Transition> batch, double gamma, double lr,
                      double max_grad_norm = 0.0);

enum class TargetUpdateMode { kHard, kSoft };

std::string to_string(TargetUpdateMode m);
TargetUpdateMode parse_target_mode(const std::string& s);

/// hard: target = online. soft: target = (1 - tau) target + tau online.
void update_target(PolicyNet& net, TargetUpdateMode mode, double tau = 1.0);

struct DqnConfig {
  double gamma = 0.95;
  double learning_rate = 0.1;
  /// 0 disables clipping.
  double max_grad_norm = 10.0;
  double epsilon = 0.9;
  double epsilon_decay = 0.995;
  double epsilon_min = 0.05;
  int batch_size = 64;
  int buffer_capacity = 10000;
  int episodes = 100;
  int max_steps = 20;
  std::vector<int> hidden = {128, 128};
  TargetUpdateMode target_mode = TargetUpdateMode::kHard;
  /// Episodes between target updates.
  int target_period = 100;
  double tau = 0.1;
  int expert_passes = 150;
  StateEncoding encoding = StateEncoding::kOneHot;
  /// 0 sizes the one-hot input automatically (see dqn_input_dim).
  int input_dim = 0;

  void validate() const;
};

/// One-hot width: the state-space bound at max_steps depth, capped by the
/// number of states one training run plus a test rollout can register.
std::size_t dqn_input_dim(std::size_t n_actions, const DqnConfig& config,
                          std::size_t expert_length, std::size_t preregistered = 1);

struct DqnTrainResult {
  PolicyNet net;
  std::vector<EpisodeTrace> episodes;
  std::size_t buffer_size = 0;
  std::size_t gradient_steps = 0;
};

/// The env's registry capacity should not exceed the network input width.
DqnTrainResult train_dqn(envs::Environment& env, const DqnConfig& config,
                         const tasks::ExpertTrajectory* expert, Rng& rng);

Rollout greedy_rollout(envs::Environment& env, PolicyNet& net, Rng& rng);

/// Text checkpoint: header line, encoding, layer count, then for each of the
/// online and target networks every layer as "layer out in" followed by the
/// row-major weights and the biases, one value per line in %.17g.
void write_checkpoint(std::ostream& os, const PolicyNet& net);
PolicyNet read_checkpoint(std::istream& is);

}  // namespace qcsynth::agents
