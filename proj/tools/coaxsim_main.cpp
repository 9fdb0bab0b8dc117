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

// Command-line front end: scenario loading, flag overrides and report output.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coaxsim/error.hpp"
#include "coaxsim/report.hpp"
#include "coaxsim/runner.hpp"
#include "coaxsim/scenario.hpp"
#include "coaxsim/traffic.hpp"
#include "coaxsim/version.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<double> cxl_overhead_ns;
  bool quiet = false;

  std::optional<std::string> topology;
  std::optional<double> utilization;
  std::optional<double> rate_gbps;
  std::optional<std::uint64_t> requests;
  std::optional<double> read_fraction;
  std::optional<std::string> arrival;
  std::optional<std::string> trace;
  std::optional<double> until_ns;
  bool cdf = false;

  std::vector<double> utilizations;
  std::vector<std::string> compare;
  std::optional<double> load;

  std::optional<std::uint64_t> instructions;
  std::optional<std::uint32_t> mshrs;
  std::optional<double> miss_prob;
};

template <class T>
void set_if(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

void apply(const Flags& f, coaxsim::Scenario& s) {
  using namespace coaxsim;
  set_if(f.seed, s.seed);
  set_if(f.out_dir, s.out_dir);
  if (f.format) s.format = *parse_report_format(*f.format);
  set_if(f.cxl_overhead_ns, s.cxl_overhead_ns);
  set_if(f.topology, s.topology);
  set_if(f.utilization, s.utilization);
  set_if(f.rate_gbps, s.rate_gbps);
  set_if(f.requests, s.traffic.requests);
  set_if(f.read_fraction, s.traffic.read_fraction);
  if (f.arrival) s.traffic.arrival = *parse_arrival_process(*f.arrival);
  set_if(f.trace, s.trace);
  set_if(f.until_ns, s.until_ns);
  if (f.cdf) s.cdf = true;
  if (!f.utilizations.empty()) s.sweep_utilizations = f.utilizations;
  if (!f.compare.empty()) s.compare = f.compare;
  set_if(f.load, s.asym_load);
  set_if(f.instructions, s.instructions);
  set_if(f.mshrs, s.core.mshrs);
  set_if(f.miss_prob, s.core.miss_prob);
}

void add_traffic_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--utilization", f.utilization, "Offered load as a fraction of peak DRAM bandwidth");
  cmd->add_option("--rate-gbps", f.rate_gbps, "Offered load in GB/s (overrides --utilization)");
  cmd->add_option("--requests", f.requests, "Requests to simulate");
  cmd->add_option("--read-fraction", f.read_fraction, "Fraction of requests that are reads");
  cmd->add_option("--arrival", f.arrival, "Arrival process")->check(CLI::IsMember({"exponential", "fixed", "bursty"}));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace coaxsim;

  CLI::App app{"coaxsim: DDR and CXL memory-system simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.fallthrough();
  app.require_subcommand(0, 1);

  Flags f;
  app.add_option("--scenario", f.scenario, "Scenario file (YAML)")->check(CLI::ExistingFile);
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--out-dir", f.out_dir, "Directory for report files");
  app.add_option("--format", f.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--cxl-overhead-ns", f.cxl_overhead_ns,
                 "Uncontended read overhead of every CXL link; port delays are rescaled to match");
  app.add_flag("--quiet", f.quiet, "Do not print the result table");

  auto* run = app.add_subcommand("run", "Simulate one topology with open-loop or trace traffic");
  run->add_option("--topology", f.topology, "Topology preset");
  add_traffic_options(run, f);
  run->add_option("--trace", f.trace, "Replay a trace file instead of open-loop traffic");
  run->add_option("--until-ns", f.until_ns, "Stop at this simulated time");
  run->add_flag("--cdf", f.cdf, "Also write the read-latency CDF");

  auto* sweep = app.add_subcommand("sweep-load", "Load-latency curve of one topology");
  sweep->add_option("--topology", f.topology, "Topology preset");
  sweep->add_option("--utilizations", f.utilizations, "Comma-separated utilizations in (0, 1)")->delimiter(',');
  sweep->add_option("--requests", f.requests, "Requests per point");
  sweep->add_option("--read-fraction", f.read_fraction, "Fraction of requests that are reads");

  auto* variance = app.add_subcommand("variance", "Core IPC under same-mean latency distributions");
  variance->add_option("--instructions", f.instructions, "Instructions per core");
  variance->add_option("--mshrs", f.mshrs, "Outstanding misses per core");
  variance->add_option("--miss-prob", f.miss_prob, "Probability an instruction is a miss");

  auto* compare = app.add_subcommand("compare", "Two topologies under identical traffic");
  compare->add_option("topologies", f.compare, "Two topology presets")->expected(2);
  add_traffic_options(compare, f);
  compare->add_flag("--cdf", f.cdf, "Also write both read-latency CDFs");

  auto* asym = app.add_subcommand("asym-compare", "Asymmetric links against symmetric links on the same DRAM");
  asym->add_option("--load", f.load, "Read load as a fraction of the symmetric links' RX goodput");
  asym->add_option("--read-fraction", f.read_fraction, "Fraction of requests that are reads");
  asym->add_option("--rate-gbps", f.rate_gbps, "Offered load in GB/s (overrides --load)");
  asym->add_option("--requests", f.requests, "Requests to simulate");

  app.add_subcommand("pins", "Bandwidth per pin of DDR and serial interfaces");
  app.add_subcommand("power", "System power and energy-delay product");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Scenario s = f.scenario.empty() ? Scenario{} : load_scenario(f.scenario);
    for (const auto* sub : app.get_subcommands()) s.experiment = parse_experiment_kind(sub->get_name());
    apply(f, s);

    const Report report = run_experiment(s);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    const auto written = write_report(report, s.out_dir, s.format);
    if (!f.quiet) std::cout << to_text(report);
    for (const auto& path : written) std::cerr << "wrote " << path << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
