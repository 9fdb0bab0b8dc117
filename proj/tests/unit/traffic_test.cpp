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

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "coaxsim/error.hpp"
#include "coaxsim/topology.hpp"
#include "coaxsim/traffic.hpp"

using namespace coaxsim;

TEST_CASE("mean inter-arrival at 60% of one DDR5-4800 channel") {
  OpenLoopSpec s;
  s.rate_bytes_per_s = 0.6 * 38.4e9;
  CHECK(s.mean_interarrival_ps() == doctest::Approx(64.0 / (0.6 * 38.4e9) * 1e12));
  CHECK(s.mean_interarrival_ps() / 1000.0 == doctest::Approx(2.78).epsilon(0.001));
}

TEST_CASE("open-loop achieved rate converges to the configured rate") {
  for (ArrivalProcess p : {ArrivalProcess::kExponential, ArrivalProcess::kFixed, ArrivalProcess::kBursty}) {
    OpenLoopSpec s;
    s.arrival = p;
    s.requests = 1000000;
    OpenLoopGenerator g(s, Rng(3, streams::kTraffic));
    Tick last = 0;
    std::uint64_t n = 0;
    while (auto a = g.next()) {
      CHECK_FALSE(a->at < last);
      last = a->at;
      ++n;
    }
    REQUIRE(n == s.requests);
    double achieved = n * 64.0 / (ticks_to_ns(last) * 1e-9);
    INFO("arrival ", to_string(p));
    CHECK(std::abs(achieved / s.rate_bytes_per_s - 1.0) < 0.01);
  }
}

TEST_CASE("read fraction 1 never emits a write, 0 never a read") {
  OpenLoopSpec s;
  s.requests = 20000;
  s.read_fraction = 1.0;
  OpenLoopGenerator g(s, Rng(1, 1));
  std::uint64_t writes = 0;
  while (auto a = g.next()) writes += a->kind == AccessKind::kWrite;
  CHECK(writes == 0);

  s.read_fraction = 0.0;
  OpenLoopGenerator w(s, Rng(1, 1));
  std::uint64_t reads = 0;
  while (auto a = w.next()) reads += a->kind == AccessKind::kRead;
  CHECK(reads == 0);
}

TEST_CASE("uniform addresses spread evenly over the 32 banks") {
  OpenLoopSpec s;
  s.requests = 1000000;
  OpenLoopGenerator g(s, Rng(11, 1));
  Topology topo = build_topology("ddr-baseline");
  const DramTiming timing;
  std::vector<double> count(timing.banks_per_rank, 0.0);
  while (auto a = g.next()) {
    CHECK(a->address % 64 == 0);
    CHECK(a->address < s.address_space_bytes);
    ChannelLocation loc = map_address(a->address, topo);
    count[decode_line(loc.local_line, timing).bank] += 1;
  }
  double expected = s.requests / 32.0, chi2 = 0;
  for (double c : count) {
    CHECK(std::abs(c / s.requests - 0.03125) < 0.001);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // 31 degrees of freedom; 61.1 is the 0.999 quantile.
  CHECK(chi2 < 61.1);
}

TEST_CASE("sequential stride walks the address space") {
  OpenLoopSpec s;
  s.pattern = AddressPattern::kSequential;
  s.stride_bytes = 128;
  s.requests = 4;
  OpenLoopGenerator g(s, Rng(1, 1));
  std::vector<std::uint64_t> addr;
  while (auto a = g.next()) addr.push_back(a->address);
  CHECK(addr == std::vector<std::uint64_t>{0, 128, 256, 384});
}

TEST_CASE("open-loop spec validation") {
  OpenLoopSpec s;
  s.rate_bytes_per_s = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.read_fraction = 1.5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.read_fraction = -0.1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK_NOTHROW(OpenLoopSpec{}.validate());
}

TEST_CASE("trace lines parse and malformed ones name their location") {
  Arrival a = parse_trace_line("1500 3 W 0x1f40", "t:1");
  CHECK(a.at == 1500);
  CHECK(a.core == 3);
  CHECK(a.kind == AccessKind::kWrite);
  CHECK(a.address == 0x1f40);
  CHECK_THROWS_WITH_AS(parse_trace_line("12 0 X 0x0", "t.txt:7"), doctest::Contains("t.txt:7"), ConfigError);
  CHECK_THROWS_AS(parse_trace_line("abc 0 R 0x0", "t:1"), ConfigError);

  TraceSource src(std::make_unique<std::istringstream>("# header\n\n10 0 R 0x0\n20 1 W 40\n"), "mem");
  auto x = src.next();
  auto y = src.next();
  REQUIRE(x);
  REQUIRE(y);
  CHECK(y->address == 0x40);
  CHECK_FALSE(src.next());

  TraceSource back(std::make_unique<std::istringstream>("20 0 R 0x0\n10 0 R 0x0\n"), "mem");
  back.next();
  CHECK_THROWS_AS(back.next(), ConfigError);
  CHECK_THROWS_AS(TraceSource("/nonexistent/trace.txt"), ConfigError);
}

TEST_CASE("synthetic latency draws") {
  Rng rng(5, streams::kSynthetic);
  auto fixed = SyntheticLatencySpec::fixed(150);
  for (int i = 0; i < 1000; ++i) CHECK(synthetic_latency(fixed, rng) == 150000);

  const int n = 1000000;
  auto moments = [&](const SyntheticLatencySpec& s) {
    long double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      double x = ticks_to_ns(synthetic_latency(s, rng));
      sum += x;
      sq += x * x;
    }
    double mean = static_cast<double>(sum / n);
    return std::pair{mean, std::sqrt(static_cast<double>(sq / n) - mean * mean)};
  };
  auto [m1, s1] = moments(SyntheticLatencySpec::bimodal(100, 350, 0.8));
  CHECK(std::abs(m1 - 150.0) < 0.5);
  CHECK(std::abs(s1 - 100.0) < 1.0);
  auto [m2, s2] = moments(SyntheticLatencySpec::bimodal(50, 550, 0.8));
  CHECK(SyntheticLatencySpec::bimodal(50, 550, 0.8).stdev_ns() == doctest::Approx(200.0));
  CHECK(std::abs(m2 - 150.0) < 0.5);
  CHECK(std::abs(s2 - 200.0) < 1.0);
}

TEST_CASE("default variance distributions share a 150 ns mean") {
  auto d = default_variance_distributions();
  REQUIRE(d.size() == 4);
  std::vector<double> sd;
  for (const auto& s : d) {
    CHECK(s.mean_ns() == doctest::Approx(150.0));
    CHECK_NOTHROW(s.validate(150.0));
    sd.push_back(s.stdev_ns());
  }
  CHECK(sd[0] == 0.0);
  CHECK(sd[1] == doctest::Approx(100.0));
  CHECK(sd[2] == doctest::Approx(150.0));
  CHECK(sd[3] == doctest::Approx(200.0));
  CHECK_THROWS_AS(SyntheticLatencySpec::bimodal(100, 300, 0.8).validate(150.0), ConfigError);
  CHECK_THROWS_AS(SyntheticLatencySpec::bimodal(100, 350, 1.2).validate(), ConfigError);
}

namespace {

struct FixedBackend : LatencyBackend {
  Tick latency;
  explicit FixedBackend(double ns) : latency(ns_to_ticks(ns)) {}
  Tick access(const MemoryRequest&, Tick issue) override { return issue + latency; }
};

}  // namespace

TEST_CASE("core model without misses runs at issue width") {
  ClosedLoopCoreSpec c;
  c.miss_prob = 0;
  FixedBackend b(150);
  CoreRunResult r = run_core_model(c, b, 100000, 1);
  CHECK(r.ipc == doctest::Approx(4.0).epsilon(0.001));
  CHECK(r.read_latencies.empty());
}

TEST_CASE("serialized misses give one instruction per memory latency") {
  ClosedLoopCoreSpec c;
  c.miss_prob = 1;
  c.mshrs = 1;
  FixedBackend b(150);
  CoreRunResult r = run_core_model(c, b, 20000, 1);
  CHECK(r.ipc == doctest::Approx(1.0 / 300.0).epsilon(0.01));
  CHECK(r.read_latencies.size() == 20000);
}

TEST_CASE("core model IPC is non-increasing in latency and bounded by issue width") {
  ClosedLoopCoreSpec c;
  double prev = 1e9;
  for (double ns : {20.0, 50.0, 100.0, 200.0, 400.0}) {
    FixedBackend b(ns);
    double ipc = run_core_model(c, b, 200000, 9).ipc;
    CHECK(ipc <= c.issue_width);
    CHECK(ipc <= prev);
    prev = ipc;
  }
}

TEST_CASE("zero MSHRs is rejected") {
  ClosedLoopCoreSpec c;
  c.mshrs = 0;
  FixedBackend b(150);
  CHECK_THROWS_AS(run_core_model(c, b, 1000, 1), ConfigError);
  c.mshrs = 512;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("at MLP 1 only the mean latency matters") {
  ClosedLoopCoreSpec c;
  c.miss_prob = 1;
  c.mshrs = 1;
  auto rows = run_variance_experiment(
      c, {SyntheticLatencySpec::fixed(150), SyntheticLatencySpec::bimodal(100, 350, 0.8)}, 100000, 1);
  CHECK(rows[0].relative == 1.0);
  CHECK(std::abs(rows[1].relative - 1.0) < 0.01);
}

TEST_CASE("variance sensitivity with memory-level parallelism") {
  ClosedLoopCoreSpec c;
  auto rows = run_variance_experiment(c, default_variance_distributions(), 300000, 1);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].relative == 1.0);
  CHECK(rows[1].relative < rows[0].relative);
  CHECK(rows[2].relative < rows[1].relative);
  CHECK(rows[3].relative < rows[2].relative);

  auto same = run_variance_experiment(c, {SyntheticLatencySpec::fixed(150), SyntheticLatencySpec::fixed(150)}, 50000, 1);
  CHECK(same[1].relative == 1.0);
}

TEST_CASE("variance experiment requires equal means") {
  ClosedLoopCoreSpec c;
  CHECK_THROWS_AS(
      run_variance_experiment(c, {SyntheticLatencySpec::fixed(150), SyntheticLatencySpec::fixed(200)}, 1000, 1),
      ConfigError);
}
