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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "coaxsim/analysis.hpp"
#include "coaxsim/cxl.hpp"
#include "coaxsim/error.hpp"
#include "coaxsim/experiments.hpp"
#include "coaxsim/models.hpp"
#include "coaxsim/report.hpp"
#include "coaxsim/rng.hpp"
#include "coaxsim/runner.hpp"
#include "coaxsim/scenario.hpp"
#include "coaxsim/topology.hpp"
#include "coaxsim/version.hpp"

namespace py = pybind11;
using namespace coaxsim;

namespace {

py::dict summary_dict(const StatsSummary& s) {
  py::dict d;
  d["count"] = s.count;
  d["mean_ns"] = s.mean_ns;
  d["stdev_ns"] = s.stdev_ns;
  d["min_ns"] = s.min_ns;
  d["p50_ns"] = s.p50_ns;
  d["p90_ns"] = s.p90_ns;
  d["p99_ns"] = s.p99_ns;
  d["max_ns"] = s.max_ns;
  return d;
}

py::dict run_dict(const RunResult& r) {
  py::dict d;
  d["topology"] = r.topology;
  d["reads"] = summary_dict(r.reads);
  d["writes"] = summary_dict(r.writes);
  py::dict b;
  b["mc_queue_ns"] = r.breakdown.mc_queue_ns;
  b["dram_service_ns"] = r.breakdown.dram_service_ns;
  b["link_port_ns"] = r.breakdown.link_port_ns;
  b["link_wire_queue_ns"] = r.breakdown.link_wire_queue_ns;
  b["total_ns"] = r.breakdown.total_ns;
  d["breakdown"] = b;
  d["utilization"] = r.utilization.aggregate;
  d["read_gbps"] = r.utilization.read_bytes_per_s / 1e9;
  d["write_gbps"] = r.utilization.write_bytes_per_s / 1e9;
  d["link_rx"] = r.utilization.link_rx;
  d["link_tx"] = r.utilization.link_tx;
  d["injected"] = r.injected;
  d["completed"] = r.completed;
  d["warnings"] = r.warnings;
  return d;
}

std::vector<Tick> to_ticks(const std::vector<double>& ns) {
  std::vector<Tick> t;
  t.reserve(ns.size());
  for (double x : ns) {
    if (!(x >= 0)) throw ConfigError("latencies must be non-negative");
    t.push_back(ns_to_ticks(x));
  }
  return t;
}

OpenLoopSpec traffic(std::uint64_t requests, double read_fraction) {
  OpenLoopSpec s;
  s.requests = requests;
  s.read_fraction = read_fraction;
  s.validate();
  return s;
}

std::string render(const Report& r, const std::string& format) {
  if (format == "csv") return to_csv(r);
  if (format == "json") return to_json(r);
  if (format == "text") return to_text(r);
  throw ConfigError("format must be csv, json or text, got '" + format + "'");
}

}  // namespace

PYBIND11_MODULE(_coaxsim, m) {
  m.doc() = "DDR and CXL memory-system simulator";
  m.attr("__version__") = std::string(kVersion);
  m.attr("PRNG") = std::string(Rng::kAlgorithm);

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<SimulationError> simulation_error(m, "SimulationError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const SimulationError& e) {
      py::set_error(simulation_error, e.what());
    }
  });

  m.def(
      "run_experiment",
      [](const std::string& scenario, const std::string& format) {
        Scenario s = parse_scenario(scenario);
        Report r;
        {
          py::gil_scoped_release release;
          r = run_experiment(s);
        }
        return render(r, format);
      },
      py::arg("scenario"), py::arg("format") = "json",
      "Runs a scenario document and returns the report as csv, json or text.");

  m.def(
      "normalize_scenario", [](const std::string& text) { return emit_scenario(parse_scenario(text)); },
      py::arg("scenario"), "Parses and validates a scenario; returns the complete effective configuration.");
  m.def(
      "load_scenario", [](const std::string& path) { return emit_scenario(load_scenario(path)); }, py::arg("path"));
  m.def("default_scenario", []() { return emit_scenario(Scenario{}); });

  m.def("preset_names", &preset_names);
  m.def(
      "map_address",
      [](std::uint64_t address, const std::string& topology) {
        ChannelLocation loc = map_address(address, build_topology(topology));
        return py::make_tuple(loc.path, loc.channel);
      },
      py::arg("address"), py::arg("topology") = "ddr-baseline");

  m.def(
      "summarize",
      [](const std::vector<double>& latencies_ns) { return summary_dict(summarize(to_ticks(latencies_ns))); },
      py::arg("latencies_ns"), "Mean, population stdev and nearest-rank percentiles.");
  m.def(
      "latency_cdf",
      [](const std::vector<double>& latencies_ns) {
        std::vector<std::pair<std::uint64_t, double>> out;
        for (const CdfPoint& p : latency_cdf(to_ticks(latencies_ns))) out.emplace_back(p.latency_ns, p.cumulative_fraction);
        return out;
      },
      py::arg("latencies_ns"));

  m.def(
      "serialize_ns",
      [](const std::string& direction, std::uint32_t payload_bytes, const std::string& link) {
        auto cfg = CxlLinkConfig::preset(link);
        if (!cfg) throw ConfigError("unknown link preset '" + link + "'");
        LinkDirection d;
        if (direction == "rx") d = LinkDirection::kRx;
        else if (direction == "tx") d = LinkDirection::kTx;
        else throw ConfigError("direction must be rx or tx");
        return ticks_to_ns(serialize(d, payload_bytes, *cfg));
      },
      py::arg("direction"), py::arg("payload_bytes"), py::arg("link") = "x8");
  m.def(
      "read_overhead_ns",
      [](const std::string& link, double target_ns) {
        auto cfg = CxlLinkConfig::preset(link);
        if (!cfg) throw ConfigError("unknown link preset '" + link + "'");
        if (target_ns > 0) *cfg = with_read_overhead(*cfg, target_ns);
        return ticks_to_ns(uncontended_read_overhead(*cfg));
      },
      py::arg("link") = "x8", py::arg("target_ns") = 0.0);

  m.def(
      "run",
      [](const std::string& topology, double utilization, std::uint64_t requests, double read_fraction,
         std::uint64_t seed) {
        Topology t = build_topology(topology);
        OpenLoopSpec s = at_utilization(t, traffic(requests, read_fraction), utilization);
        py::gil_scoped_release release;
        RunResult r = run_open_loop(t, s, RunSettings{seed});
        py::gil_scoped_acquire acquire;
        return run_dict(r);
      },
      py::arg("topology") = "ddr-baseline", py::arg("utilization") = 0.6, py::arg("requests") = 100000,
      py::arg("read_fraction") = 2.0 / 3.0, py::arg("seed") = 1);

  m.def(
      "unloaded",
      [](const std::string& topology, std::uint64_t requests, std::uint64_t seed) {
        RunResult r = measure_unloaded(build_topology(topology), traffic(requests, 2.0 / 3.0), RunSettings{seed});
        return run_dict(r);
      },
      py::arg("topology") = "ddr-baseline", py::arg("requests") = 20000, py::arg("seed") = 1);

  m.def(
      "compare",
      [](const std::string& a, const std::string& b, double utilization, std::uint64_t requests, std::uint64_t seed) {
        Topology ta = build_topology(a), tb = build_topology(b);
        OpenLoopSpec s = at_utilization(ta, traffic(requests, 2.0 / 3.0), utilization);
        Comparison c = compare_topologies(ta, tb, s, RunSettings{seed});
        return py::make_tuple(run_dict(c.a), run_dict(c.b));
      },
      py::arg("a") = "ddr-baseline", py::arg("b") = "coaxial-4x", py::arg("utilization") = 0.6,
      py::arg("requests") = 100000, py::arg("seed") = 1);

  m.def(
      "variance",
      [](std::uint64_t instructions, std::uint32_t mshrs, double miss_prob, std::uint64_t seed) {
        ClosedLoopCoreSpec core;
        core.mshrs = mshrs;
        core.miss_prob = miss_prob;
        py::list out;
        for (const VarianceRow& r : run_variance_experiment(core, default_variance_distributions(), instructions, seed)) {
          py::dict d;
          d["distribution"] = r.distribution.label();
          d["stdev_ns"] = r.distribution.stdev_ns();
          d["ipc"] = r.ipc;
          d["relative"] = r.relative;
          out.append(d);
        }
        return out;
      },
      py::arg("instructions") = 200000, py::arg("mshrs") = 16, py::arg("miss_prob") = 0.04, py::arg("seed") = 1);

  m.def(
      "bandwidth_per_pin",
      [](std::uint32_t pins, double bandwidth_gbps) { return bandwidth_per_pin(InterfaceSpec{"", pins, bandwidth_gbps, false}); },
      py::arg("pins"), py::arg("bandwidth_gbps"));
  m.def(
      "power",
      []() {
        py::list out;
        for (const PowerRow& r : power_analysis({SystemCounts::baseline(), SystemCounts::coaxial()})) {
          py::dict d;
          d["design"] = r.counts.name;
          d["total_w"] = r.power.total_w;
          d["reported_w"] = r.reported_w;
          d["cpi"] = r.counts.cpi;
          d["edp"] = r.edp.edp;
          d["edp_exact"] = r.edp_exact.edp;
          d["edp_relative"] = r.edp_relative;
          out.append(d);
        }
        return out;
      });
  m.def(
      "edp", [](double power_w, double cpi) { return edp(power_w, cpi).edp; }, py::arg("power_w"), py::arg("cpi"));
}
