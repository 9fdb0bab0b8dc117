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

#include "coaxsim/error.hpp"
#include "coaxsim/models.hpp"

using namespace coaxsim;

TEST_CASE("bandwidth per pin") {
  CHECK(bandwidth_per_pin(InterfaceSpec::ddr5_4800()) == doctest::Approx(0.24));
  CHECK(bandwidth_per_pin(InterfaceSpec::pcie5_lane()) == 1.0);
  CHECK(bandwidth_per_pin(InterfaceSpec::pcie5_x8()) == 1.0);
  CHECK_THROWS_AS(bandwidth_per_pin(InterfaceSpec{"none", 0, 1.0, false}), ConfigError);
}

TEST_CASE("serial versus parallel pins") {
  PinComparison c = compare_pins(InterfaceSpec::ddr5_4800(), InterfaceSpec::pcie5_x8());
  CHECK(c.ratio == doctest::Approx(1.0 / 0.24));
  CHECK(c.ratio >= 4.0);
  CHECK(c.pin_reduction == 5.0);
  // Twelve lanes: 48 pins, 48 GB/s per direction.
  PinComparison twelve = compare_pins(InterfaceSpec::ddr5_4800(), InterfaceSpec{"pcie5-x12", 48, 48.0, true});
  CHECK(twelve.pin_reduction == doctest::Approx(160.0 / 48.0));
}

TEST_CASE("system power components") {
  PowerReport b = system_power(SystemCounts::baseline());
  CHECK(b.total_w == doctest::Approx(713.2));
  PowerReport c = system_power(SystemCounts::coaxial());
  CHECK(c.total_w == doctest::Approx(1180.6));
  double sum = 0;
  for (const auto& part : c.components) sum += part.watts;
  CHECK(sum == c.total_w);

  PowerReport bare = system_power(SystemCounts{"bare", 0, 0, 0.0, 1.0});
  CHECK(bare.total_w == 500.0);
  CHECK_THROWS_AS(system_power(SystemCounts{"neg", 1, 0, -5.0, 1.0}), ConfigError);
}

TEST_CASE("system power is linear in each count") {
  SystemCounts s{"s", 10, 100, 50.0, 1.0};
  double base = system_power(s).total_w;
  s.ddr_channels += 1;
  CHECK(system_power(s).total_w - base == doctest::Approx(1.1));
  s.pcie_lanes += 10;
  CHECK(system_power(s).total_w - base == doctest::Approx(3.1));
}

TEST_CASE("energy-delay product") {
  CHECK(edp(713, 2.02).edp == doctest::Approx(2909.3252));
  CHECK(edp(1180, 1.33).edp == doctest::Approx(2087.302));
  CHECK(edp(640, 1.0).edp == 640.0);
  CHECK_THROWS_AS(edp(0, 1.0), ConfigError);
  CHECK_THROWS_AS(edp(100, -1.0), ConfigError);
}

TEST_CASE("power analysis of the two server designs") {
  auto rows = power_analysis({SystemCounts::baseline(), SystemCounts::coaxial()});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].reported_w == 713.0);
  CHECK(rows[1].reported_w == 1180.0);
  CHECK(std::round(rows[0].edp.edp) == 2909.0);
  CHECK(std::round(rows[1].edp.edp) == 2087.0);
  CHECK(rows[1].edp_exact.edp == doctest::Approx(1180.6 * 1.33 * 1.33));
  CHECK(rows[0].edp_relative == 1.0);
  CHECK(std::abs(rows[1].edp_relative - 0.72) < 0.005);
}
