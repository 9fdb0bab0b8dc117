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

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coaxsim/analysis.hpp"
#include "coaxsim/system.hpp"
#include "coaxsim/topology.hpp"
#include "coaxsim/traffic.hpp"

namespace coaxsim {

struct RunSettings {
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1;
  /// Keep the full request ledger in the result (needed for CDF export and
  /// per-request checks; costs memory on long runs).
  bool keep_trace = false;
};

/// Statistics of one simulation run. Latency figures cover post-warmup
/// reads only.
struct RunResult {
  std::string topology;
  StatsSummary reads;
  StatsSummary writes;
  LatencyBreakdown breakdown;
  UtilizationReport utilization;
  std::uint64_t injected = 0;
  std::uint64_t completed = 0;
  std::uint64_t events = 0;
  Tick final_clock = 0;
  std::vector<std::string> warnings;
  std::vector<Tick> latencies;  // post-warmup read latencies, id order
  SimulationTrace trace;        // filled only with keep_trace
};

RunResult summarize_run(std::string topology, SimulationTrace trace, bool keep_trace);

/// Runs open-loop traffic to completion of `traffic.requests` requests.
RunResult run_open_loop(const Topology& topology, const OpenLoopSpec& traffic, const RunSettings& settings);

/// Runs an arbitrary source until it is exhausted or `limit` is hit.
RunResult run_source(const Topology& topology, std::unique_ptr<RequestSource> source, RunLimit limit,
                     const RunSettings& settings);

/// Open-loop traffic whose offered rate is `utilization` of the topology's
/// aggregate peak DRAM bandwidth.
OpenLoopSpec at_utilization(const Topology& topology, OpenLoopSpec traffic, double utilization);

struct LoadPoint {
  double utilization = 0.0;
  RunResult result;
};

/// One run per utilization. Throws ConfigError for values outside (0, 1).
std::vector<LoadPoint> sweep_load(const Topology& topology, const OpenLoopSpec& traffic,
                                  std::span<const double> utilizations, const RunSettings& settings);

/// Latency with no contention: requests arrive `gap_ns` apart, longer than
/// any single access, so each one finds the system idle.
RunResult measure_unloaded(const Topology& topology, const OpenLoopSpec& traffic, const RunSettings& settings,
                           double gap_ns = 1000.0);

struct Comparison {
  RunResult a;
  RunResult b;
};

/// Feeds both topologies the identical request stream.
Comparison compare_topologies(const Topology& a, const Topology& b, const OpenLoopSpec& traffic,
                              const RunSettings& settings);

/// `asym` with every link replaced by a symmetric x8 link, keeping the DRAM
/// behind each link unchanged.
Topology symmetric_counterpart(const Topology& asym);

/// Offered bytes/s that puts the read responses at `load` of the symmetric
/// counterpart's aggregate RX goodput.
double asym_load_rate(const Topology& asym, double read_fraction, double load);

/// `a` is the symmetric counterpart, `b` the asymmetric topology.
Comparison asym_compare(const Topology& asym, const OpenLoopSpec& traffic, const RunSettings& settings);

}  // namespace coaxsim
