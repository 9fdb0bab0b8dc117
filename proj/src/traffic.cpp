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

#include "coaxsim/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "coaxsim/error.hpp"

namespace coaxsim {

std::string_view to_string(ArrivalProcess p) {
  switch (p) {
    case ArrivalProcess::kExponential: return "exponential";
    case ArrivalProcess::kFixed: return "fixed";
    case ArrivalProcess::kBursty: return "bursty";
  }
  return "?";
}

std::string_view to_string(AddressPattern p) {
  return p == AddressPattern::kUniform ? "uniform" : "sequential";
}

std::optional<ArrivalProcess> parse_arrival_process(std::string_view s) {
  if (s == "exponential") return ArrivalProcess::kExponential;
  if (s == "fixed") return ArrivalProcess::kFixed;
  if (s == "bursty") return ArrivalProcess::kBursty;
  return std::nullopt;
}

std::optional<AddressPattern> parse_address_pattern(std::string_view s) {
  if (s == "uniform") return AddressPattern::kUniform;
  if (s == "sequential") return AddressPattern::kSequential;
  return std::nullopt;
}

void OpenLoopSpec::validate() const {
  if (!(rate_bytes_per_s > 0) || !std::isfinite(rate_bytes_per_s)) {
    throw ConfigError("traffic rate must be positive");
  }
  if (!(read_fraction >= 0 && read_fraction <= 1)) throw ConfigError("traffic.read_fraction must be in [0, 1]");
  if (address_space_bytes < kLineBytes) throw ConfigError("traffic.address_space_gib too small");
  if (stride_bytes == 0 || stride_bytes % kLineBytes != 0) {
    throw ConfigError("traffic.stride_bytes must be a non-zero multiple of 64");
  }
  if (cores == 0) throw ConfigError("traffic.cores must be >= 1");
  if (arrival == ArrivalProcess::kBursty) {
    if (!(burst_on_ns > 0) || !(burst_off_ns >= 0) || !(burst_rate_multiplier > 0)) {
      throw ConfigError("burst parameters must be positive");
    }
  }
}

OpenLoopGenerator::OpenLoopGenerator(OpenLoopSpec spec, Rng rng) : spec_(spec), rng_(std::move(rng)) {
  spec_.validate();
}

double OpenLoopGenerator::gap_ps(double mean_ps) {
  return spec_.arrival == ArrivalProcess::kFixed ? mean_ps : rng_.exponential(mean_ps);
}

std::optional<Arrival> OpenLoopGenerator::next() {
  if (emitted_ >= spec_.requests) return std::nullopt;
  Arrival a;
  const double mean = spec_.mean_interarrival_ps();
  if (emitted_ > 0) {
    if (spec_.arrival == ArrivalProcess::kBursty) {
      // Poisson in "on time"; mapping on-time to wall time is exact because
      // the process is memoryless across the off gap.
      const double on_mean = mean / spec_.burst_rate_multiplier;
      clock_ps_ += rng_.exponential(on_mean);
    } else {
      clock_ps_ += gap_ps(mean);
    }
  }
  double wall = clock_ps_;
  if (spec_.arrival == ArrivalProcess::kBursty) {
    const double on = spec_.burst_on_ns * 1000.0;
    const double period = on + spec_.burst_off_ns * 1000.0;
    const double k = std::floor(clock_ps_ / on);
    wall = k * period + (clock_ps_ - k * on);
  }
  a.at = static_cast<Tick>(std::llround(wall));
  a.core = static_cast<std::uint32_t>(emitted_ % spec_.cores);
  a.kind = rng_.bernoulli(spec_.read_fraction) ? AccessKind::kRead : AccessKind::kWrite;
  const std::uint64_t lines = spec_.address_space_bytes / kLineBytes;
  if (spec_.pattern == AddressPattern::kUniform) {
    a.address = rng_.below(lines) * kLineBytes;
  } else {
    a.address = (emitted_ * spec_.stride_bytes) % (lines * kLineBytes);
  }
  ++emitted_;
  return a;
}

Arrival parse_trace_line(std::string_view line, std::string_view where) {
  auto fail = [&](const std::string& why) {
    throw ConfigError(std::string(where) + ": " + why + " (expected '<tick_ps> <core> <R|W> <hex-address>')");
  };
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  if (fields.size() != 4) fail("expected 4 fields, found " + std::to_string(fields.size()));

  Arrival a;
  auto parse_uint = [&](std::string_view s, int base, auto& out, const char* what) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
    if (ec != std::errc() || p != s.data() + s.size()) fail(std::string("bad ") + what + " '" + std::string(s) + "'");
  };
  parse_uint(fields[0], 10, a.at, "tick");
  parse_uint(fields[1], 10, a.core, "core");
  if (fields[2] == "R" || fields[2] == "r") {
    a.kind = AccessKind::kRead;
  } else if (fields[2] == "W" || fields[2] == "w") {
    a.kind = AccessKind::kWrite;
  } else {
    fail("bad access kind '" + std::string(fields[2]) + "'");
  }
  std::string_view addr = fields[3];
  if (addr.size() > 2 && addr[0] == '0' && (addr[1] == 'x' || addr[1] == 'X')) addr.remove_prefix(2);
  parse_uint(addr, 16, a.address, "address");
  return a;
}

TraceSource::TraceSource(const std::string& path)
    : in_(std::make_unique<std::ifstream>(path)), name_(path) {
  if (!*in_) throw ConfigError("cannot open trace file '" + path + "'");
}

TraceSource::TraceSource(std::unique_ptr<std::istream> in, std::string name)
    : in_(std::move(in)), name_(std::move(name)) {}

std::optional<Arrival> TraceSource::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_no_;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    Arrival a = parse_trace_line(line, name_ + ":" + std::to_string(line_no_));
    if (a.at < last_) {
      throw ConfigError(name_ + ":" + std::to_string(line_no_) + ": tick " + std::to_string(a.at) +
                        " goes backwards (previous " + std::to_string(last_) + ")");
    }
    last_ = a.at;
    return a;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

double SyntheticLatencySpec::stdev_ns() const {
  if (kind == Kind::kFixed) return 0.0;
  return std::sqrt(p_low * (1 - p_low)) * std::abs(high_ns - low_ns);
}

std::string SyntheticLatencySpec::label() const {
  std::ostringstream os;
  if (kind == Kind::kFixed) {
    os << "fixed(" << low_ns << ")";
  } else {
    os << "bimodal(" << low_ns << "," << high_ns << "," << p_low << ")";
  }
  return os.str();
}

void SyntheticLatencySpec::validate(std::optional<double> target_mean_ns) const {
  if (low_ns < 0 || high_ns < 0) throw ConfigError("synthetic latency must be >= 0");
  if (!(p_low >= 0 && p_low <= 1)) throw ConfigError("bimodal p_low must be in [0, 1]");
  if (target_mean_ns && std::abs(mean_ns() - *target_mean_ns) > 1e-9) {
    throw ConfigError(label() + " has mean " + std::to_string(mean_ns()) + " ns, expected " +
                      std::to_string(*target_mean_ns) + " ns");
  }
}

Tick synthetic_latency(const SyntheticLatencySpec& spec, Rng& rng) {
  if (spec.kind == SyntheticLatencySpec::Kind::kFixed) return ns_to_ticks(spec.low_ns);
  return ns_to_ticks(rng.bernoulli(spec.p_low) ? spec.low_ns : spec.high_ns);
}

SyntheticBackend::SyntheticBackend(SyntheticLatencySpec spec, Rng rng) : spec_(spec), rng_(std::move(rng)) {
  spec_.validate();
}

Tick SyntheticBackend::access(const MemoryRequest& /*request*/, Tick issue) {
  return issue + synthetic_latency(spec_, rng_);
}

// ---------------------------------------------------------------------------

void ClosedLoopCoreSpec::validate() const {
  if (cores == 0) throw ConfigError("core.cores must be >= 1");
  if (issue_width == 0) throw ConfigError("core.issue_width must be >= 1");
  if (rob_entries == 0) throw ConfigError("core.rob_entries must be >= 1");
  if (mshrs == 0) throw ConfigError("core.mshrs must be >= 1");
  if (mshrs > rob_entries) throw ConfigError("core.mshrs must not exceed core.rob_entries");
  if (!(clock_hz > 0)) throw ConfigError("core.clock_hz must be positive");
  for (double p : {miss_prob, write_prob, dependency_prob}) {
    if (!(p >= 0 && p <= 1)) throw ConfigError("core probabilities must be in [0, 1]");
  }
  const double ps = 1.0e12 / clock_hz;
  if (std::abs(ps - std::round(ps)) > 1e-6) throw ConfigError("core.clock_hz must give an integer ps cycle");
}

Tick ClosedLoopCoreSpec::cycle_ticks() const { return static_cast<Tick>(std::llround(1.0e12 / clock_hz)); }

namespace {

struct RobEntry {
  std::uint64_t ready;  // cycle at which the instruction may retire
};

struct CoreOutcome {
  std::uint64_t cycles = 0;
};

CoreOutcome simulate_core(const ClosedLoopCoreSpec& spec, LatencyBackend& backend, std::uint64_t instructions,
                          Rng& rng, std::uint32_t core, std::uint64_t& next_id, std::vector<Tick>& latencies) {
  const Tick cycle = spec.cycle_ticks();
  std::deque<RobEntry> rob;
  // Completion cycles of outstanding read misses.
  std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> mshr_busy;
  Tick youngest_miss_done = 0;
  bool have_outstanding = false;

  // The next instruction, drawn once and held while dispatch is blocked.
  enum class Op { kAlu, kRead, kWrite };
  std::optional<Op> held;
  auto draw = [&]() {
    if (!rng.bernoulli(spec.miss_prob)) return Op::kAlu;
    return rng.bernoulli(spec.write_prob) ? Op::kWrite : Op::kRead;
  };

  std::uint64_t dispatched = 0;
  std::uint64_t retired = 0;
  std::uint64_t c = 0;
  std::uint64_t last_retire = 0;

  while (retired < instructions) {
    while (!mshr_busy.empty() && mshr_busy.top() <= c) mshr_busy.pop();
    if (mshr_busy.empty()) have_outstanding = false;

    std::uint32_t did = 0;
    for (std::uint32_t k = 0; k < spec.issue_width && !rob.empty() && rob.front().ready <= c; ++k) {
      rob.pop_front();
      ++retired;
      ++did;
      last_retire = c;
    }

    for (std::uint32_t k = 0; k < spec.issue_width && dispatched < instructions && rob.size() < spec.rob_entries;
         ++k) {
      if (!held) held = draw();
      if (*held == Op::kRead) {
        if (mshr_busy.size() >= spec.mshrs) break;
        MemoryRequest req;
        req.id = next_id++;
        req.source = core;
        req.kind = AccessKind::kRead;
        Tick issue = c * cycle;
        if (have_outstanding && rng.bernoulli(spec.dependency_prob)) issue = std::max(issue, youngest_miss_done);
        const Tick done = backend.access(req, issue);
        latencies.push_back(done - issue);
        const std::uint64_t ready = ceil_div(done, cycle);
        mshr_busy.push(ready);
        youngest_miss_done = done;
        have_outstanding = true;
        rob.push_back(RobEntry{std::max(ready, c + 1)});
      } else {
        if (*held == Op::kWrite) {
          MemoryRequest req;
          req.id = next_id++;
          req.source = core;
          req.kind = AccessKind::kWrite;
          backend.access(req, c * cycle);
        }
        rob.push_back(RobEntry{c + 1});
      }
      held.reset();
      ++dispatched;
      ++did;
    }

    if (did > 0) {
      ++c;
      continue;
    }
    // Nothing moved: jump to the next cycle where the head can retire or
    // an MSHR frees.
    std::uint64_t next = std::numeric_limits<std::uint64_t>::max();
    if (!rob.empty()) next = std::min(next, rob.front().ready);
    if (!mshr_busy.empty()) next = std::min(next, mshr_busy.top());
    c = std::max(c + 1, next);
  }
  return CoreOutcome{last_retire};
}

}  // namespace

CoreRunResult run_core_model(const ClosedLoopCoreSpec& spec, LatencyBackend& backend, std::uint64_t instructions,
                             std::uint64_t seed) {
  spec.validate();
  if (instructions == 0) throw ConfigError("core model needs at least one instruction");
  CoreRunResult out;
  out.instructions = instructions;
  std::uint64_t next_id = 0;
  double ipc_sum = 0.0;
  for (std::uint32_t core = 0; core < spec.cores; ++core) {
    Rng rng(seed, streams::kCoreBase + core);
    const CoreOutcome o = simulate_core(spec, backend, instructions, rng, core, next_id, out.read_latencies);
    const std::uint64_t cycles = std::max<std::uint64_t>(o.cycles, 1);
    out.cycles += cycles;
    ipc_sum += static_cast<double>(instructions) / static_cast<double>(cycles);
  }
  out.ipc = ipc_sum / spec.cores;
  return out;
}

std::vector<SyntheticLatencySpec> default_variance_distributions() {
  return {SyntheticLatencySpec::fixed(150.0), SyntheticLatencySpec::bimodal(100.0, 350.0, 0.8),
          SyntheticLatencySpec::bimodal(75.0, 450.0, 0.8), SyntheticLatencySpec::bimodal(50.0, 550.0, 0.8)};
}

std::vector<VarianceRow> run_variance_experiment(const ClosedLoopCoreSpec& core,
                                                 const std::vector<SyntheticLatencySpec>& distributions,
                                                 std::uint64_t instructions, std::uint64_t seed) {
  if (distributions.empty()) throw ConfigError("variance experiment needs at least one distribution");
  const double mean = distributions.front().mean_ns();
  for (const auto& d : distributions) {
    try {
      d.validate(mean);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("variance distributions must share one mean: ") + e.what());
    }
  }
  std::vector<VarianceRow> rows;
  for (const auto& d : distributions) {
    SyntheticBackend backend(d, Rng(seed, streams::kSynthetic));
    const CoreRunResult r = run_core_model(core, backend, instructions, seed);
    VarianceRow row;
    row.distribution = d;
    row.ipc = r.ipc;
    if (!r.read_latencies.empty()) {
      double s = 0, s2 = 0;
      for (Tick t : r.read_latencies) {
        const double v = ticks_to_ns(t);
        s += v;
        s2 += v * v;
      }
      const double n = static_cast<double>(r.read_latencies.size());
      row.measured_mean_ns = s / n;
      row.measured_stdev_ns = std::sqrt(std::max(0.0, s2 / n - row.measured_mean_ns * row.measured_mean_ns));
    }
    rows.push_back(row);
  }
  std::size_t base = 0;
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    if (distributions[i].kind == SyntheticLatencySpec::Kind::kFixed) {
      base = i;
      break;
    }
  }
  for (auto& r : rows) r.relative = r.ipc / rows[base].ipc;
  return rows;
}

}  // namespace coaxsim
