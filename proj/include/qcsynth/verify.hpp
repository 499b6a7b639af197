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

#include <optional>
#include <string>
#include <vector>

#include "qcsynth/gatealg.hpp"

namespace qcsynth::verify {

struct IdentityCheck {
  std::string name;
  std::string detail;
  /// Measured quantity: fidelity, max entry difference or an exact count.
  double value = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  /// Negative control: every placement of this gate is followed by an extra T
  /// on its first qubit when circuits are evaluated.
  std::optional<gatealg::GateKind> corrupt_gate;
};

/// Circuit identities against hand-written references, the state-space
/// table, and the expert trajectories.
std::vector<IdentityCheck> run_identity_suite(const VerifyOptions& options = {});

}  // namespace qcsynth::verify
