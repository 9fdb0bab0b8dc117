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

#include "coaxsim/runner.hpp"

#include <cmath>
#include <numeric>

#include "coaxsim/error.hpp"
#include "coaxsim/experiments.hpp"
#include "coaxsim/models.hpp"

namespace coaxsim {

namespace {

// Published relative-IPC averages for the default variance distributions.
constexpr double kReferenceRelativeIpc[] = {1.0, 0.86, 0.78, 0.71};

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

RunSettings settings_of(const Scenario& s, bool keep_trace = false) {
  return RunSettings{s.seed, s.warmup_fraction, keep_trace};
}

RunLimit limit_of(const Scenario& s, std::uint64_t requests) {
  RunLimit l;
  l.requests = requests;
  if (s.until_ns > 0) l.until = ns_to_ticks(s.until_ns);
  return l;
}

RunResult run_traffic(const Scenario& s, const Topology& t, const OpenLoopSpec& traffic) {
  traffic.validate();
  auto source = std::make_unique<OpenLoopGenerator>(traffic, Rng(s.seed, streams::kTraffic));
  return run_source(t, std::move(source), limit_of(s, traffic.requests), settings_of(s));
}

const std::vector<std::string> kRunColumns = {
    "topology", "reads",          "avg_ns",       "p50",           "p90",
    "p99",      "max_ns",         "stdev_ns",     "mc_queue_ns",   "dram_service_ns",
    "link_port_ns", "link_wire_queue_ns", "queue_share", "utilization", "read_gbps",
    "write_gbps"};

std::vector<Cell> run_row(const RunResult& r) {
  const LatencyBreakdown& b = r.breakdown;
  return {r.topology,
          as_int(r.reads.count),
          r.reads.mean_ns,
          r.reads.p50_ns,
          r.reads.p90_ns,
          r.reads.p99_ns,
          r.reads.max_ns,
          r.reads.stdev_ns,
          b.mc_queue_ns,
          b.dram_service_ns,
          b.link_port_ns,
          b.link_wire_queue_ns,
          b.share(b.mc_queue_ns),
          r.utilization.aggregate,
          r.utilization.read_bytes_per_s / 1e9,
          r.utilization.write_bytes_per_s / 1e9};
}

void add_cdf(Report& report, const std::string& name, const RunResult& r) {
  report.attachments.emplace_back(report.experiment + "_" + name + "_cdf.csv", cdf_csv(r.latencies));
}

void add_warnings(Report& report, const RunResult& r) {
  for (const auto& w : r.warnings) report.warnings.push_back(r.topology + ": " + w);
}

void run_single(const Scenario& s, Report& report) {
  const Topology t = make_topology(s, s.topology);
  RunResult r;
  if (!s.trace.empty()) {
    r = run_source(t, std::make_unique<TraceSource>(s.trace), limit_of(s, 0), settings_of(s));
    report.summary.emplace_back("trace", s.trace);
  } else {
    const OpenLoopSpec traffic = make_traffic(s, t);
    report.summary.emplace_back("offered_gbps", traffic.long_run_rate() / 1e9);
    r = run_traffic(s, t, traffic);
  }
  report.table.columns = kRunColumns;
  report.table.rows.push_back(run_row(r));
  report.summary.emplace_back("injected", as_int(r.injected));
  report.summary.emplace_back("completed", as_int(r.completed));
  report.summary.emplace_back("simulated_ns", ticks_to_ns(r.final_clock));
  add_warnings(report, r);
  if (s.cdf) add_cdf(report, t.name, r);
}

void run_sweep(const Scenario& s, Report& report) {
  const Topology t = make_topology(s, s.topology);
  const RunResult unloaded = measure_unloaded(t, s.traffic, settings_of(s));
  report.summary.emplace_back("topology", t.name);
  report.summary.emplace_back("unloaded_avg_ns", unloaded.reads.mean_ns);
  report.summary.emplace_back("unloaded_p90_ns", unloaded.reads.p90_ns);
  report.table.columns = {"util", "avg_ns", "p50", "p90", "p99"};
  for (double u : s.sweep_utilizations) {
    const RunResult r = run_traffic(s, t, at_utilization(t, s.traffic, u));
    report.table.rows.push_back({u, r.reads.mean_ns, r.reads.p50_ns, r.reads.p90_ns, r.reads.p99_ns});
    add_warnings(report, r);
  }
}

void run_compare(const Scenario& s, Report& report) {
  const Topology a = make_topology(s, s.compare[0]);
  const Topology b = make_topology(s, s.compare[1]);
  const OpenLoopSpec traffic = make_traffic(s, a);
  const RunResult ra = run_traffic(s, a, traffic);
  const RunResult rb = run_traffic(s, b, traffic);
  report.table.columns = kRunColumns;
  report.table.rows.push_back(run_row(ra));
  report.table.rows.push_back(run_row(rb));
  report.summary.emplace_back("offered_gbps", traffic.long_run_rate() / 1e9);
  report.summary.emplace_back("avg_reduction", 1.0 - rb.reads.mean_ns / ra.reads.mean_ns);
  report.summary.emplace_back("p90_reduction", 1.0 - rb.reads.p90_ns / ra.reads.p90_ns);
  add_warnings(report, ra);
  add_warnings(report, rb);
  if (s.cdf) {
    add_cdf(report, a.name, ra);
    add_cdf(report, b.name, rb);
  }
}

void run_asym(const Scenario& s, Report& report) {
  const Topology asym = make_topology(s, s.asym_topology);
  if (asym.link_count() == 0) throw ConfigError("asym.topology must have CXL links");
  OpenLoopSpec traffic = s.traffic;
  traffic.rate_bytes_per_s =
      s.rate_gbps > 0 ? s.rate_gbps * 1e9 : asym_load_rate(asym, traffic.read_fraction, s.asym_load);
  const Topology sym = symmetric_counterpart(asym);
  const RunResult rs = run_traffic(s, sym, traffic);
  const RunResult ra = run_traffic(s, asym, traffic);

  report.table.columns = {"config",     "avg_ns",    "p50",        "p90",     "p99",    "write_avg_ns",
                          "read_gbps", "write_gbps", "rx_util", "tx_util"};
  for (const RunResult* r : {&rs, &ra}) {
    report.table.rows.push_back({r->topology, r->reads.mean_ns, r->reads.p50_ns, r->reads.p90_ns, r->reads.p99_ns,
                                 r->writes.mean_ns, r->utilization.read_bytes_per_s / 1e9,
                                 r->utilization.write_bytes_per_s / 1e9, mean_of(r->utilization.link_rx),
                                 mean_of(r->utilization.link_tx)});
    add_warnings(report, *r);
  }
  report.summary.emplace_back("offered_gbps", traffic.rate_bytes_per_s / 1e9);
  report.summary.emplace_back("read_fraction", traffic.read_fraction);
  report.summary.emplace_back("asym_read_latency_delta_ns", ra.reads.mean_ns - rs.reads.mean_ns);
}

void run_variance(const Scenario& s, Report& report) {
  const auto rows = run_variance_experiment(s.core, s.distributions, s.instructions, s.seed);
  const bool reference = s.distributions == default_variance_distributions();
  report.table.columns = {"distribution", "mean_ns",     "stdev_ns",     "measured_mean_ns", "measured_stdev_ns",
                          "ipc",          "relative_ipc", "reference_relative"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const VarianceRow& r = rows[i];
    report.table.rows.push_back({r.distribution.label(), r.distribution.mean_ns(), r.distribution.stdev_ns(),
                                 r.measured_mean_ns, r.measured_stdev_ns, r.ipc, r.relative,
                                 reference ? Cell(kReferenceRelativeIpc[i]) : Cell(std::string())});
  }
}

void run_pins(const Scenario& s, Report& report) {
  report.table.columns = {"interface", "pins", "bandwidth_gbps", "per_direction", "gbps_per_pin",
                          "ratio_vs_first", "pin_reduction_vs_first"};
  for (const InterfaceSpec& i : s.interfaces) {
    const PinComparison c = compare_pins(s.interfaces.front(), i);
    report.table.rows.push_back({i.name, static_cast<std::int64_t>(i.pins), i.bandwidth_gbps, i.per_direction,
                                 c.serial_gbps_per_pin, c.ratio, c.pin_reduction});
  }
}

void run_power(const Scenario& s, Report& report) {
  report.table.columns = {"design",   "ddr_channels", "pcie_lanes", "package_w", "ddr_controllers_w",
                          "ddr_phys_w", "pcie_lanes_w", "dimms_w",  "total_w",   "reported_w",
                          "cpi",      "edp",          "edp_exact",  "edp_relative"};
  for (const PowerRow& r : power_analysis(s.power_designs, s.power)) {
    std::vector<Cell> row = {r.counts.name, static_cast<std::int64_t>(r.counts.ddr_channels),
                             static_cast<std::int64_t>(r.counts.pcie_lanes)};
    for (const PowerComponent& c : r.power.components) row.emplace_back(c.watts);
    row.insert(row.end(), {r.power.total_w, r.reported_w, r.counts.cpi, r.edp.edp, r.edp_exact.edp, r.edp_relative});
    report.table.rows.push_back(std::move(row));
  }
}

}  // namespace

Topology make_topology(const Scenario& s, const std::string& preset) {
  Topology t = build_topology(preset, s.dram);
  t.interleave_bytes = s.interleave_bytes;
  for (MemoryPath& p : t.paths) {
    if (!p.link) continue;
    p.link->fifo_capacity = s.cxl_fifo_capacity;
    p.link->tx_read_priority = s.cxl_tx_read_priority;
    if (s.cxl_overhead_ns > 0) p.link = with_read_overhead(*p.link, s.cxl_overhead_ns);
  }
  t.validate();
  return t;
}

OpenLoopSpec make_traffic(const Scenario& s, const Topology& basis) {
  if (s.rate_gbps > 0) {
    OpenLoopSpec t = s.traffic;
    t.rate_bytes_per_s = s.rate_gbps * 1e9;
    return t;
  }
  return at_utilization(basis, s.traffic, s.utilization);
}

Report run_experiment(const Scenario& s) {
  s.validate_runnable();
  Report report;
  report.experiment = std::string(to_string(*s.experiment));
  report.seed = s.seed;
  report.config_yaml = emit_scenario(s);
  switch (*s.experiment) {
    case ExperimentKind::kRun: run_single(s, report); break;
    case ExperimentKind::kSweepLoad: run_sweep(s, report); break;
    case ExperimentKind::kCompare: run_compare(s, report); break;
    case ExperimentKind::kAsymCompare: run_asym(s, report); break;
    case ExperimentKind::kVariance: run_variance(s, report); break;
    case ExperimentKind::kPins: run_pins(s, report); break;
    case ExperimentKind::kPower: run_power(s, report); break;
  }
  return report;
}

}  // namespace coaxsim
