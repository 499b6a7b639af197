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

// Central-difference oracles for the policy network.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qcsynth/dqn.hpp"

namespace qcsynth::testing {

inline constexpr double kFdStep = 1e-5;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

// Entry error |g - fd| / max(|g|, |fd|, 1e-4 max|g|). The floor keeps entries
// that are tiny next to the largest gradient from being judged on roundoff.
inline double relative_error(double g, double fd, double scale) {
  const double denom = std::max({std::abs(g), std::abs(fd), 1e-4 * scale});
  return denom == 0.0 ? 0.0 : std::abs(g - fd) / denom;
}

// Random online/target pair and batch; compares net_loss_gradient with
// central differences of net_loss. max_params = 0 checks every parameter.
inline GradCheckResult gradient_check(agents::Rng& rng, agents::StateEncoding enc,
                                      const std::vector<int>& hidden,
                                      std::size_t max_params = 0) {
  using namespace agents;
  const int n_actions = 4;
  const int n_states = 10;
  const int width = enc == StateEncoding::kOneHot ? n_states : 8;
  PolicyNet net = make_policy_net(width, n_actions, hidden, rng, enc);
  net.target = make_policy_net(width, n_actions, hidden, rng, enc).online;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (enc == StateEncoding::kFlat) {
    for (int s = 0; s < n_states; ++s) {
      Eigen::VectorXd f(width);
      for (int i = 0; i < width; ++i) f(i) = u(rng);
      net.features.push_back(f);
    }
  }
  std::uniform_int_distribution<std::size_t> state(0, n_states - 1), action(0, n_actions - 1);
  std::vector<Transition> batch(1 + rng() % 8);
  for (Transition& t : batch) {
    t = {state(rng), action(rng), (rng() % 2) ? 100.0 : 0.0, state(rng), rng() % 2 == 0};
  }
  const double gamma = 0.95;

  const LossGradient g = net_loss_gradient(net, batch, gamma);
  std::vector<double> p = net.online.flat_params();
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (max_params > 0 && max_params < idx.size()) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(max_params);
  }
  double scale = 0.0;
  for (double v : g.grad) scale = std::max(scale, std::abs(v));

  GradCheckResult r;
  for (std::size_t i : idx) {
    const double keep = p[i];
    p[i] = keep + kFdStep;
    net.online.set_flat_params(p);
    const double up = net_loss(net, batch, gamma);
    p[i] = keep - kFdStep;
    net.online.set_flat_params(p);
    const double down = net_loss(net, batch, gamma);
    p[i] = keep;
    const double fd = (up - down) / (2 * kFdStep);
    r.max_rel_error = std::max(r.max_rel_error, relative_error(g.grad[i], fd, scale));
    ++r.checked;
  }
  net.online.set_flat_params(p);
  return r;
}

// max |J - J_fd| / max |J| for a random dense-input network.
inline double jacobian_check(agents::Rng& rng, int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  const agents::Mlp m(sizes, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(in);
  for (int i = 0; i < in; ++i) x(i) = u(rng);
  const Eigen::MatrixXd j = m.input_jacobian(x);
  Eigen::MatrixXd fd(out, in);
  for (int i = 0; i < in; ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += kFdStep;
    b(i) -= kFdStep;
    fd.col(i) = (m.forward(a) - m.forward(b)) / (2 * kFdStep);
  }
  const double scale = j.cwiseAbs().maxCoeff();
  return scale == 0.0 ? (fd.cwiseAbs().maxCoeff()) : (j - fd).cwiseAbs().maxCoeff() / scale;
}

}  // namespace qcsynth::testing
