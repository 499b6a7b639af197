# Copyright 2026 The qcsynth Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quantum circuit synthesis with tabular and deep Q-learning."""

import json

from ._core import (
    ConfigError,
    Environment,
    run_cli,
    space_size,
    target_unitary,
    task_names,
    train,
    verify,
    walkthrough,
)
from ._core import bench_json as _bench_json

__all__ = [
    "ConfigError",
    "Environment",
    "bench",
    "run_cli",
    "space_size",
    "target_unitary",
    "task_names",
    "train",
    "verify",
    "walkthrough",
]


def bench(task, algorithm, rounds=100, preset="appendix", seed=0, episodes=None, jobs=1,
          settings=None):
    """Runs one benchmark cell and returns its report as a dict."""
    text = _bench_json(task, algorithm, rounds, preset, seed, episodes, jobs, settings or {})
    return json.loads(text)["reports"][0]
