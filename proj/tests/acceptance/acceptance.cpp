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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "coaxsim/experiments.hpp"
#include "coaxsim/models.hpp"
#include "coaxsim/report.hpp"
#include "coaxsim/runner.hpp"
#include "coaxsim/scenario.hpp"

using namespace coaxsim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      detail += " [fail]";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome md1_oracle() {
  Outcome o;
  for (double rho : {0.3, 0.5, 0.7}) {
    auto t0 = std::chrono::steady_clock::now();
    const double service_ns = 40.0;
    DramConfig d;
    d.timing.fixed_service_ns = service_ns;
    d.timing.subchannels = 1;
    d.timing.banks_per_rank = 1;
    d.controller.scheduler = SchedulerPolicy::kFcfs;
    Topology t;
    t.name = "single-bank";
    t.paths.push_back(MemoryPath{std::nullopt, {d}});
    OpenLoopSpec s;
    s.read_fraction = 1.0;
    s.requests = 1000000;
    s.rate_bytes_per_s = rho * kLineBytes / (service_ns * 1e-9);
    RunResult r = run_open_loop(t, s, RunSettings{});
    double expect = rho * service_ns / (2 * (1 - rho));
    double err = r.breakdown.mc_queue_ns / expect - 1;
    double secs = seconds_since(t0);
    o.require(std::abs(err) <= 0.05 && secs <= 30.0, "rho %.1f wait %.3f ns vs %.3f (%+.2f%%, %.1f s)", rho,
              r.breakdown.mc_queue_ns, expect, 100 * err, secs);
  }
  return o;
}

Outcome load_latency() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Topology topo = build_topology("ddr-baseline");
  OpenLoopSpec s;
  s.requests = 1000000;
  RunSettings st;
  RunResult idle = measure_unloaded(topo, s, st);
  std::vector<double> utils{0.5, 0.6};
  auto pts = sweep_load(topo, s, utils, st);
  double a50 = pts[0].result.reads.mean_ns / idle.reads.mean_ns;
  double a60 = pts[1].result.reads.mean_ns / idle.reads.mean_ns;
  double p60 = pts[1].result.reads.p90_ns / idle.reads.p90_ns;
  o.require(idle.reads.mean_ns >= 35 && idle.reads.mean_ns <= 55, "unloaded %.2f ns in [35,55]", idle.reads.mean_ns);
  o.require(a50 >= 2.5, "avg(50%%)/unloaded %.2f >= 2.5", a50);
  o.require(a60 >= 3.0, "avg(60%%)/unloaded %.2f >= 3.0", a60);
  o.require(p60 > a60, "p90 ratio(60%%) %.2f > avg ratio %.2f", p60, a60);
  double secs = seconds_since(t0);
  o.require(secs <= 120, "%.1f s <= 120 s", secs);
  return o;
}

double link_overhead(double knob_ns) {
  Scenario sc;
  sc.cxl_overhead_ns = knob_ns;
  OpenLoopSpec s;
  s.requests = 20000;
  RunResult direct = measure_unloaded(make_topology(sc, "ddr-baseline"), s, RunSettings{});
  RunResult linked = measure_unloaded(make_topology(sc, "coaxial-4x"), s, RunSettings{});
  return linked.reads.mean_ns - direct.reads.mean_ns;
}

Outcome cxl_overhead() {
  Outcome o;
  double d = link_overhead(0.0);
  o.require(std::abs(d - 30.0) <= 3.0, "x8 adds %.3f ns (30 +/- 3)", d);
  double k = link_overhead(50.0);
  o.require(std::abs(k - 50.0) <= 3.0, "with overhead knob 50: %.3f ns (50 +/- 3)", k);
  return o;
}

Outcome topology_comparison() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Topology base = build_topology("ddr-baseline");
  Topology quad = build_topology("coaxial-4x");
  OpenLoopSpec s;
  s.requests = 1000000;
  Comparison c = compare_topologies(base, quad, at_utilization(base, s, 0.6), RunSettings{});
  double util = c.b.utilization.aggregate;
  double avg_cut = 1 - c.b.reads.mean_ns / c.a.reads.mean_ns;
  double p90_cut = 1 - c.b.reads.p90_ns / c.a.reads.p90_ns;
  o.require(std::abs(util - 0.15) <= 0.02, "coaxial-4x utilization %.4f (0.15 +/- 0.02)", util);
  o.require(avg_cut >= 0.40, "avg %.1f -> %.1f ns, %.1f%% lower (>= 40%%)", c.a.reads.mean_ns, c.b.reads.mean_ns,
            100 * avg_cut);
  o.require(p90_cut >= 0.55, "p90 %.1f -> %.1f ns, %.1f%% lower (>= 55%%)", c.a.reads.p90_ns, c.b.reads.p90_ns,
            100 * p90_cut);
  double secs = seconds_since(t0);
  o.require(secs <= 300, "%.1f s <= 300 s", secs);
  return o;
}

Outcome variance() {
  Outcome o;
  // Each backend's mean, analytically and over 1e6 draws.
  std::string draws;
  bool means = true;
  for (const auto& d : default_variance_distributions()) {
    Rng rng(1, streams::kSynthetic);
    long double sum = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += ticks_to_ns(synthetic_latency(d, rng));
    const double m = static_cast<double>(sum / n);
    means = means && std::abs(d.mean_ns() - 150.0) < 1e-9 && std::abs(m - 150.0) <= 0.5;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%s %.2f", draws.empty() ? "" : ", ", d.label().c_str(), m);
    draws += buf;
  }

  ClosedLoopCoreSpec core;
  auto rows = run_variance_experiment(core, default_variance_distributions(), 2000000, 1);
  const double reference[] = {1.0, 0.86, 0.78, 0.71};
  bool monotone = true;
  std::string rel;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) monotone = monotone && rows[i].relative < rows[i - 1].relative;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.3f (ref %.2f)", i ? ", " : "", rows[i].relative, reference[i]);
    rel += buf;
  }
  o.require(means, "mean of 1e6 draws: %s (150 +/- 0.5)", draws.c_str());
  o.require(monotone && core.mshrs >= 4, "mshrs %u relative IPC %s strictly decreasing", core.mshrs, rel.c_str());

  ClosedLoopCoreSpec serial;
  serial.mshrs = 1;
  serial.miss_prob = 1.0;
  auto flat = run_variance_experiment(serial, default_variance_distributions(), 200000, 1);
  double lo = 1e9, hi = 0;
  for (const auto& r : flat) {
    lo = std::min(lo, r.relative);
    hi = std::max(hi, r.relative);
  }
  o.require(hi - lo <= 0.01, "mshrs 1 relative IPC range [%.4f, %.4f] within 1%%", lo, hi);
  return o;
}

Outcome asym() {
  Outcome o;
  Scenario sc;
  Topology t = build_topology(sc.asym_topology);
  OpenLoopSpec s;
  s.read_fraction = 2.0 / 3.0;
  s.requests = 200000;
  s.rate_bytes_per_s = asym_load_rate(t, s.read_fraction, sc.asym_load);
  Comparison c = asym_compare(t, s, RunSettings{});
  o.require(c.b.reads.mean_ns < c.a.reads.mean_ns, "load %.2f (%.1f GB/s): read avg asym %.2f ns < symmetric %.2f ns",
            sc.asym_load, s.rate_bytes_per_s / 1e9, c.b.reads.mean_ns, c.a.reads.mean_ns);
  o.require(c.b.utilization.read_bytes_per_s >= c.a.utilization.read_bytes_per_s,
            "read throughput asym %.2f GB/s >= symmetric %.2f GB/s", c.b.utilization.read_bytes_per_s / 1e9,
            c.a.utilization.read_bytes_per_s / 1e9);
  return o;
}

Outcome pins() {
  Outcome o;
  double ddr = bandwidth_per_pin(InterfaceSpec::ddr5_4800());
  double x8 = bandwidth_per_pin(InterfaceSpec::pcie5_x8());
  PinComparison c = compare_pins(InterfaceSpec::ddr5_4800(), InterfaceSpec::pcie5_x8());
  o.require(std::abs(ddr - 0.24) < 1e-12, "DDR5-4800 %.4f GB/s/pin", ddr);
  o.require(x8 == 1.0, "PCIe5 x8 %.4f GB/s/pin/direction", x8);
  o.require(c.ratio >= 4.0, "ratio %.4f >= 4", c.ratio);
  o.require(c.pin_reduction == 5.0, "pin reduction %.1f == 5", c.pin_reduction);
  return o;
}

Outcome power() {
  Outcome o;
  auto rows = power_analysis({SystemCounts::baseline(), SystemCounts::coaxial()});
  o.require(std::abs(rows[0].power.total_w - 713) <= 1, "baseline %.1f W (713 +/- 1)", rows[0].power.total_w);
  o.require(std::abs(rows[1].power.total_w - 1180) <= 1, "coaxial %.1f W (1180 +/- 1)", rows[1].power.total_w);
  o.require(std::abs(rows[0].edp.edp - 2909) <= 1, "EDP %.0f W x %.2f^2 = %.2f (2909 +/- 1)", rows[0].reported_w,
            rows[0].counts.cpi, rows[0].edp.edp);
  o.require(std::abs(rows[1].edp.edp - 2087) <= 1, "EDP %.0f W x %.2f^2 = %.2f (2087 +/- 1)", rows[1].reported_w,
            rows[1].counts.cpi, rows[1].edp.edp);
  o.require(std::abs(rows[1].edp_relative - 0.72) <= 0.005, "ratio %.4f (0.72 +/- 0.005)", rows[1].edp_relative);
  o.detail += "; unrounded totals give EDP " + std::to_string(rows[0].edp_exact.edp) + " and " +
              std::to_string(rows[1].edp_exact.edp);
  return o;
}

Outcome determinism() {
  Outcome o;
  for (ExperimentKind k : {ExperimentKind::kRun, ExperimentKind::kSweepLoad, ExperimentKind::kVariance,
                           ExperimentKind::kCompare, ExperimentKind::kAsymCompare, ExperimentKind::kPins,
                           ExperimentKind::kPower}) {
    Scenario s;
    s.experiment = k;
    s.seed = 12345;
    s.traffic.requests = 20000;
    s.instructions = 200000;
    s.cdf = true;
    Report a = run_experiment(s), b = run_experiment(s);
    bool same = to_csv(a) == to_csv(b) && to_json(a) == to_json(b) && a.attachments == b.attachments;
    o.require(same, "%s", std::string(to_string(k)).c_str());
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "M/D/1 oracle", md1_oracle},
      {2, "load-latency curve", load_latency},
      {3, "CXL read overhead", cxl_overhead},
      {4, "topology comparison", topology_comparison},
      {5, "latency variance", variance},
      {6, "asymmetric link", asym},
      {7, "pin calculator", pins},
      {8, "power and EDP", power},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %d %s: %s | %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed ? 1 : 0;
}
