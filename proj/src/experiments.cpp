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

#include "coaxsim/experiments.hpp"

#include <utility>

#include "coaxsim/error.hpp"

namespace coaxsim {

RunResult summarize_run(std::string topology, SimulationTrace trace, bool keep_trace) {
  RunResult r;
  r.topology = std::move(topology);
  r.latencies = read_latencies(trace);
  r.reads = summarize(r.latencies);
  r.writes = summarize(write_latencies(trace), 0);
  r.breakdown = breakdown(trace);
  r.utilization = utilization(trace);
  r.injected = trace.injected;
  r.completed = trace.completed;
  r.events = trace.events_dispatched;
  r.final_clock = trace.final_clock;
  r.warnings = trace.warnings;
  if (keep_trace) r.trace = std::move(trace);
  return r;
}

RunResult run_source(const Topology& topology, std::unique_ptr<RequestSource> source, RunLimit limit,
                     const RunSettings& settings) {
  System system(topology, std::move(source), SystemOptions{settings.warmup_fraction});
  return summarize_run(topology.name, system.run(limit), settings.keep_trace);
}

RunResult run_open_loop(const Topology& topology, const OpenLoopSpec& traffic, const RunSettings& settings) {
  traffic.validate();
  auto source = std::make_unique<OpenLoopGenerator>(traffic, Rng(settings.seed, streams::kTraffic));
  return run_source(topology, std::move(source), RunLimit::count(traffic.requests), settings);
}

OpenLoopSpec at_utilization(const Topology& topology, OpenLoopSpec traffic, double utilization) {
  if (!(utilization > 0.0 && utilization < 1.0)) {
    throw ConfigError("utilization must be in (0, 1), got " + std::to_string(utilization));
  }
  traffic.rate_bytes_per_s = utilization * topology.peak_dram_bytes_per_s();
  return traffic;
}

std::vector<LoadPoint> sweep_load(const Topology& topology, const OpenLoopSpec& traffic,
                                  std::span<const double> utilizations, const RunSettings& settings) {
  std::vector<OpenLoopSpec> specs;
  for (double u : utilizations) specs.push_back(at_utilization(topology, traffic, u));
  std::vector<LoadPoint> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out.push_back(LoadPoint{utilizations[i], run_open_loop(topology, specs[i], settings)});
  }
  return out;
}

RunResult measure_unloaded(const Topology& topology, const OpenLoopSpec& traffic, const RunSettings& settings,
                           double gap_ns) {
  OpenLoopSpec spec = traffic;
  spec.arrival = ArrivalProcess::kFixed;
  spec.rate_bytes_per_s = kLineBytes / (gap_ns * 1e-9);
  return run_open_loop(topology, spec, settings);
}

Comparison compare_topologies(const Topology& a, const Topology& b, const OpenLoopSpec& traffic,
                              const RunSettings& settings) {
  return Comparison{run_open_loop(a, traffic, settings), run_open_loop(b, traffic, settings)};
}

Topology symmetric_counterpart(const Topology& asym) {
  Topology t = asym;
  t.name = asym.name + "-sym";
  for (MemoryPath& p : t.paths) {
    if (p.link) {
      const CxlLinkConfig old = *p.link;
      CxlLinkConfig x8 = CxlLinkConfig::x8();
      x8.fifo_capacity = old.fifo_capacity;
      x8.tx_read_priority = old.tx_read_priority;
      p.link = x8;
    }
  }
  return t;
}

double asym_load_rate(const Topology& asym, double read_fraction, double load) {
  if (!(read_fraction > 0.0 && read_fraction <= 1.0)) throw ConfigError("read_fraction must be in (0, 1]");
  if (!(load > 0.0)) throw ConfigError("load must be positive");
  const double rx_goodput = CxlLinkConfig::x8().goodput_rx_gbps * 1e9 * asym.link_count();
  return load * rx_goodput / read_fraction;
}

Comparison asym_compare(const Topology& asym, const OpenLoopSpec& traffic, const RunSettings& settings) {
  return compare_topologies(symmetric_counterpart(asym), asym, traffic, settings);
}

}  // namespace coaxsim
