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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qcsynth/bench.hpp"

namespace qcsynth::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kRuntime = 2,
  kVerification = 3,
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError with
/// the line number on a line without '='.
Settings parse_config_text(const std::string& text);

/// Applies one setting to an experiment. gamma and the epsilon keys apply to
/// both agents; every other key names a single field. Throws ConfigError for
/// unknown keys or unparsable values.
void apply_setting(bench::ExperimentConfig& config, const std::string& key,
                   const std::string& value);

/// Output root: $QCSYNTH_OUT_DIR when set and non-empty, else "runs".
std::string default_out_root();

/// Runs one command line. Never throws; the return value is an ExitCode.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcsynth::cli
