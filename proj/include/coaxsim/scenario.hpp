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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coaxsim/dram.hpp"
#include "coaxsim/models.hpp"
#include "coaxsim/traffic.hpp"

namespace coaxsim {

enum class ExperimentKind : std::uint8_t { kRun, kSweepLoad, kVariance, kCompare, kAsymCompare, kPins, kPower };

std::string_view to_string(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view s);

enum class ReportFormat : std::uint8_t { kCsv, kJson };

std::string_view to_string(ReportFormat f);
std::optional<ReportFormat> parse_report_format(std::string_view s);

/// Everything one invocation needs. Every field has a default except the
/// experiment kind.
struct Scenario {
  std::optional<ExperimentKind> experiment;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1;

  std::string topology = "ddr-baseline";
  std::vector<std::string> compare = {"ddr-baseline", "coaxial-4x"};
  std::uint64_t interleave_bytes = 64;
  DramConfig dram;

  /// Uncontended read overhead of every CXL link; zero keeps the preset
  /// port delays.
  double cxl_overhead_ns = 0.0;
  std::uint32_t cxl_fifo_capacity = 64;
  bool cxl_tx_read_priority = true;

  /// Open-loop traffic. Its rate comes from `utilization` of the target
  /// topology's peak unless `rate_gbps` is positive.
  OpenLoopSpec traffic;
  double utilization = 0.6;
  double rate_gbps = 0.0;
  std::string trace;  // replay file for `run`, overrides open-loop traffic
  double until_ns = 0.0;  // optional time horizon; zero runs to completion

  std::vector<double> sweep_utilizations = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};

  std::string asym_topology = "coaxial-asym";
  double asym_load = 0.8;

  ClosedLoopCoreSpec core;
  std::uint64_t instructions = 2000000;
  std::vector<SyntheticLatencySpec> distributions = default_variance_distributions();

  std::vector<InterfaceSpec> interfaces = InterfaceSpec::builtins();
  PowerConfig power;
  std::vector<SystemCounts> power_designs = {SystemCounts::baseline(), SystemCounts::coaxial()};

  std::string out_dir = ".";
  ReportFormat format = ReportFormat::kCsv;
  bool cdf = false;

  /// Range and consistency checks. Throws ConfigError naming the field.
  void validate() const;
  /// validate() plus the requirement that an experiment kind is set.
  void validate_runnable() const;

  bool operator==(const Scenario&) const = default;
};

/// Parses a scenario document. `source` names it in diagnostics, which
/// carry line and column. Unknown keys are rejected.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");

/// Reads and parses a scenario file. Throws ConfigError if it is missing.
Scenario load_scenario(const std::string& path);

/// The complete effective configuration as a scenario document; parsing
/// it yields an equal Scenario.
std::string emit_scenario(const Scenario& scenario);

}  // namespace coaxsim
