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

#include <vector>

#include "coaxsim/error.hpp"
#include "coaxsim/topology.hpp"
#include "coaxsim/traffic.hpp"

using namespace coaxsim;

TEST_CASE("line interleave across four channels") {
  Topology t = build_topology("coaxial-4x");
  for (std::uint64_t a : {0, 64, 128, 192}) CHECK(map_address(a, t).channel == a / 64);
  CHECK(map_address(256, t).channel == 0);
  CHECK(map_address(256, t).local_line == 1);
  CHECK(map_address(100, t).channel == 1);
  CHECK(map_address(192, t).path == 3);
}

TEST_CASE("one channel takes every address") {
  Topology t = build_topology("ddr-baseline");
  for (std::uint64_t a : {0ull, 64ull, 4096ull, 0xdeadbeefull}) CHECK(map_address(a, t).channel == 0);
  CHECK(map_address(640, t).local_line == 10);
}

TEST_CASE("coarser interleave keeps a block on one channel") {
  Topology t = build_topology("coaxial-4x");
  t.interleave_bytes = 4096;
  CHECK(map_address(4032, t).channel == 0);
  CHECK(map_address(4096, t).channel == 1);
  CHECK(map_address(4096 * 4 + 64, t).local_line == 65);
  t.interleave_bytes = 96;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("uniform addresses split evenly over eight channels") {
  Topology t = build_topology("coaxial-asym");
  REQUIRE(t.channel_count() == 8);
  OpenLoopSpec s;
  s.requests = 1000000;
  OpenLoopGenerator g(s, Rng(21, 1));
  std::vector<double> count(8, 0.0);
  while (auto a = g.next()) count[map_address(a->address, t).channel] += 1;
  for (double c : count) CHECK(std::abs(c / s.requests - 0.125) < 0.002);
}

TEST_CASE("presets") {
  Topology base = build_topology("ddr-baseline");
  CHECK(base.link_count() == 0);
  CHECK(base.channel_count() == 1);
  CHECK(base.peak_dram_bytes_per_s() == doctest::Approx(38.4e9));

  Topology c2 = build_topology("coaxial-2x");
  CHECK(c2.link_count() == 2);
  CHECK(c2.peak_dram_bytes_per_s() == doctest::Approx(2 * 38.4e9));

  Topology c4 = build_topology("coaxial-4x");
  CHECK(c4.link_count() == 4);
  CHECK(c4.channel_count() == 4);
  CHECK(c4.peak_dram_bytes_per_s() == doctest::Approx(153.6e9));

  Topology asym = build_topology("coaxial-asym");
  CHECK(asym.link_count() == 4);
  CHECK(asym.channel_count() == 8);
  for (const auto& p : asym.paths) {
    REQUIRE(p.link);
    CHECK(p.link->rx_pins == 20);
    CHECK(p.channels.size() == 2);
  }
  for (const auto& name : preset_names()) CHECK_NOTHROW(build_topology(name).validate());
}

TEST_CASE("unknown preset lists the known ones") {
  CHECK_THROWS_WITH_AS(build_topology("coaxial-9x"), doctest::Contains("coaxial-4x"), ConfigError);
}

TEST_CASE("structural validation") {
  Topology t;
  t.name = "empty";
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t.paths.push_back(MemoryPath{});
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
