/*
 * Copyright 2026 The coaxsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "coaxsim/report.hpp"
#include "coaxsim/scenario.hpp"
#include "coaxsim/topology.hpp"
#include "coaxsim/traffic.hpp"

namespace coaxsim {

/// A preset with the scenario's DRAM, interleave and link settings applied.
Topology make_topology(const Scenario& scenario, const std::string& preset);

/// The scenario's open-loop traffic with its rate resolved: `rate_gbps`
/// when positive, otherwise `utilization` of `basis`'s peak.
OpenLoopSpec make_traffic(const Scenario& scenario, const Topology& basis);

/// Validates the scenario and runs its experiment.
Report run_experiment(const Scenario& scenario);

}  // namespace coaxsim
