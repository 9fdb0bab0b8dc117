# Copyright 2026 The coaxsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python front end to the coaxsim memory-system simulator."""

import json

from ._coaxsim import (
    PRNG,
    ConfigError,
    SimulationError,
    __version__,
    bandwidth_per_pin,
    compare,
    default_scenario,
    edp,
    latency_cdf,
    load_scenario,
    map_address,
    normalize_scenario,
    power,
    preset_names,
    read_overhead_ns,
    run,
    run_experiment,
    serialize_ns,
    summarize,
    unloaded,
    variance,
)

__all__ = [
    "PRNG",
    "ConfigError",
    "SimulationError",
    "__version__",
    "bandwidth_per_pin",
    "compare",
    "default_scenario",
    "edp",
    "experiment",
    "latency_cdf",
    "load_scenario",
    "map_address",
    "normalize_scenario",
    "power",
    "preset_names",
    "read_overhead_ns",
    "run",
    "run_experiment",
    "serialize_ns",
    "summarize",
    "unloaded",
    "variance",
]


def experiment(scenario):
    """Run a scenario given as a dict or a YAML string; return the JSON report as a dict."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(run_experiment(text, "json"))
