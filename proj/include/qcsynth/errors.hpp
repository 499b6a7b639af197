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

#include <stdexcept>
#include <string>

namespace qcsynth {

// Invalid user-facing configuration: unknown names, unsupported
// task/representation combinations, out-of-range hyperparameters.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// The state registry hit its configured capacity.
class RegistryOverflow : public std::length_error {
 public:
  explicit RegistryOverflow(const std::string& what) : std::length_error(what) {}
};

}  // namespace qcsynth
