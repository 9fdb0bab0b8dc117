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
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coaxsim/request.hpp"
#include "coaxsim/rng.hpp"
#include "coaxsim/tick.hpp"

namespace coaxsim {

// ---------------------------------------------------------------------------
// Request sources

/// A request as produced by a traffic source, before it enters the system.
struct Arrival {
  Tick at = 0;
  std::uint32_t core = 0;
  std::uint64_t address = 0;
  AccessKind kind = AccessKind::kRead;
};

class RequestSource {
 public:
  virtual ~RequestSource() = default;
  /// Next arrival in non-decreasing time order, or nullopt when exhausted.
  virtual std::optional<Arrival> next() = 0;
  /// Offered rate in bytes/s, when the source has a nominal one.
  virtual std::optional<double> nominal_rate() const { return std::nullopt; }
};

enum class ArrivalProcess : std::uint8_t { kExponential, kFixed, kBursty };
enum class AddressPattern : std::uint8_t { kUniform, kSequential };

std::string_view to_string(ArrivalProcess p);
std::string_view to_string(AddressPattern p);
std::optional<ArrivalProcess> parse_arrival_process(std::string_view s);
std::optional<AddressPattern> parse_address_pattern(std::string_view s);

struct OpenLoopSpec {
  ArrivalProcess arrival = ArrivalProcess::kExponential;
  double rate_bytes_per_s = 0.6 * 38.4e9;
  AddressPattern pattern = AddressPattern::kUniform;
  std::uint64_t stride_bytes = 64;
  /// Bursty arrivals: Poisson at `burst_rate_multiplier` x rate during on
  /// periods, silence during off periods. Defaults keep the mean at `rate`.
  double burst_on_ns = 10000.0;
  double burst_off_ns = 10000.0;
  double burst_rate_multiplier = 2.0;
  double read_fraction = 2.0 / 3.0;
  std::uint64_t requests = 100000;
  std::uint64_t address_space_bytes = std::uint64_t{128} << 30;
  std::uint32_t cores = 12;

  /// Throws ConfigError for rates <= 0, read_fraction outside [0,1], and
  /// malformed burst or address parameters.
  void validate() const;
  double mean_interarrival_ps() const { return kLineBytes * 1.0e12 / rate_bytes_per_s; }
  /// Long-run offered bytes/s; differs from `rate_bytes_per_s` only for
  /// bursty arrivals with a non-default duty cycle.
  double long_run_rate() const {
    if (arrival != ArrivalProcess::kBursty) return rate_bytes_per_s;
    return rate_bytes_per_s * burst_rate_multiplier * burst_on_ns / (burst_on_ns + burst_off_ns);
  }

  bool operator==(const OpenLoopSpec&) const = default;
};

/// Lazily yields `spec.requests` arrivals.
class OpenLoopGenerator : public RequestSource {
 public:
  OpenLoopGenerator(OpenLoopSpec spec, Rng rng);

  std::optional<Arrival> next() override;
  std::optional<double> nominal_rate() const override { return spec_.long_run_rate(); }
  const OpenLoopSpec& spec() const { return spec_; }

 private:
  double gap_ps(double mean_ps);

  OpenLoopSpec spec_;
  Rng rng_;
  std::uint64_t emitted_ = 0;
  double clock_ps_ = 0.0;  // un-rounded arrival clock, avoids rounding drift
};

/// Replays `<tick_ps> <core> <R|W> <hex-address>` lines. Blank lines and
/// lines starting with '#' are skipped.
class TraceSource : public RequestSource {
 public:
  explicit TraceSource(const std::string& path);
  /// Parses an in-memory trace; `name` labels diagnostics.
  TraceSource(std::unique_ptr<std::istream> in, std::string name);

  std::optional<Arrival> next() override;

 private:
  std::unique_ptr<std::istream> in_;
  std::string name_;
  std::uint64_t line_no_ = 0;
  Tick last_ = 0;
};

/// Parses one trace line. Throws ConfigError naming `where` on bad input.
Arrival parse_trace_line(std::string_view line, std::string_view where);

// ---------------------------------------------------------------------------
// Synthetic latency backend

struct SyntheticLatencySpec {
  enum class Kind : std::uint8_t { kFixed, kBimodal };
  Kind kind = Kind::kFixed;
  double low_ns = 150.0;  // the fixed latency when kind == kFixed
  double high_ns = 150.0;
  double p_low = 1.0;

  static SyntheticLatencySpec fixed(double ns) { return {Kind::kFixed, ns, ns, 1.0}; }
  static SyntheticLatencySpec bimodal(double low, double high, double p_low) {
    return {Kind::kBimodal, low, high, p_low};
  }

  double mean_ns() const { return kind == Kind::kFixed ? low_ns : p_low * low_ns + (1 - p_low) * high_ns; }
  double stdev_ns() const;
  std::string label() const;
  /// Throws ConfigError on negative latencies, p_low outside [0,1], or when
  /// `target_mean_ns` is given and the mean differs by more than 1e-9 ns.
  void validate(std::optional<double> target_mean_ns = std::nullopt) const;

  bool operator==(const SyntheticLatencySpec&) const = default;
};

Tick synthetic_latency(const SyntheticLatencySpec& spec, Rng& rng);

/// Answers a memory access issued at `issue` with its completion tick.
class LatencyBackend {
 public:
  virtual ~LatencyBackend() = default;
  virtual Tick access(const MemoryRequest& request, Tick issue) = 0;
};

class SyntheticBackend : public LatencyBackend {
 public:
  SyntheticBackend(SyntheticLatencySpec spec, Rng rng);
  Tick access(const MemoryRequest& request, Tick issue) override;

 private:
  SyntheticLatencySpec spec_;
  Rng rng_;
};

// ---------------------------------------------------------------------------
// Closed-loop core model

struct ClosedLoopCoreSpec {
  std::uint32_t cores = 1;
  std::uint32_t issue_width = 4;
  std::uint32_t rob_entries = 256;
  std::uint32_t mshrs = 16;
  double clock_hz = 2.0e9;
  double miss_prob = 0.04;
  double write_prob = 0.0;
  double dependency_prob = 0.0;

  void validate() const;
  Tick cycle_ticks() const;

  bool operator==(const ClosedLoopCoreSpec&) const = default;
};

struct CoreRunResult {
  double ipc = 0.0;  // mean over cores
  std::uint64_t instructions = 0;  // per core
  std::uint64_t cycles = 0;        // summed over cores
  std::vector<Tick> read_latencies;
};

/// In-order-retire window model. Each cycle up to issue_width instructions
/// retire from the head and up to issue_width enter the ROB. Non-miss
/// instructions are ready one cycle after entry; a read miss holds an MSHR
/// and is ready when its data returns. Writes retire like non-miss
/// instructions. Cores are simulated one after another against the same
/// backend. Throws ConfigError when the spec is invalid (e.g. mshrs == 0).
CoreRunResult run_core_model(const ClosedLoopCoreSpec& spec, LatencyBackend& backend,
                             std::uint64_t instructions, std::uint64_t seed);

struct VarianceRow {
  SyntheticLatencySpec distribution;
  double ipc = 0.0;
  double relative = 0.0;
  double measured_mean_ns = 0.0;
  double measured_stdev_ns = 0.0;
};

/// The four latency distributions with a 150 ns mean: fixed, and the
/// 80/20 bimodals with stdev 100, 150 and 200 ns.
std::vector<SyntheticLatencySpec> default_variance_distributions();

/// Runs the core model against each distribution with common random
/// numbers for the instruction stream; IPC is normalised to the first
/// fixed-latency entry (or the first entry if none is fixed).
std::vector<VarianceRow> run_variance_experiment(const ClosedLoopCoreSpec& core,
                                                 const std::vector<SyntheticLatencySpec>& distributions,
                                                 std::uint64_t instructions, std::uint64_t seed);

}  // namespace coaxsim
