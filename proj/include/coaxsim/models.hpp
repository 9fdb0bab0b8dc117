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
#include <string>
#include <vector>

namespace coaxsim {

// ---------------------------------------------------------------------------
// Bandwidth per pin

struct InterfaceSpec {
  std::string name;
  std::uint32_t pins = 0;
  /// GB/s; per direction when `per_direction`, otherwise combined.
  double bandwidth_gbps = 0.0;
  bool per_direction = false;

  static InterfaceSpec ddr5_4800();        // 160 pins, 38.4 GB/s combined
  static InterfaceSpec pcie5_lane();       // 4 pins, 4 GB/s per direction
  static InterfaceSpec pcie5_x8();         // 32 pins, 32 GB/s per direction
  static std::vector<InterfaceSpec> builtins();

  bool operator==(const InterfaceSpec&) const = default;
};

/// bandwidth / pins. Throws ConfigError for zero pins.
double bandwidth_per_pin(const InterfaceSpec& spec);

struct PinComparison {
  double ddr_gbps_per_pin = 0.0;
  double serial_gbps_per_pin = 0.0;
  double ratio = 0.0;               // serial / ddr per-pin bandwidth
  double pin_reduction = 0.0;       // ddr pins / serial pins per channel
};

PinComparison compare_pins(const InterfaceSpec& ddr, const InterfaceSpec& serial);

// ---------------------------------------------------------------------------
// Power and EDP

struct PowerConfig {
  double package_w = 500.0;
  double ddr_controller_w = 0.5;
  double ddr_phy_w = 0.6;
  double pcie_lane_w = 0.2;

  bool operator==(const PowerConfig&) const = default;
};

struct SystemCounts {
  std::string name;
  std::uint32_t ddr_channels = 0;
  std::uint32_t pcie_lanes = 0;
  double dimm_w = 0.0;
  double cpi = 1.0;

  /// Full-scale inputs of the two evaluated server designs.
  static SystemCounts baseline();
  static SystemCounts coaxial();

  bool operator==(const SystemCounts&) const = default;
};

struct PowerComponent {
  std::string name;
  double watts = 0.0;
};

struct PowerReport {
  std::vector<PowerComponent> components;
  double total_w = 0.0;
};

/// Package + channels x (controller + PHY) + lanes x lane + DIMMs. Throws
/// ConfigError for negative inputs.
PowerReport system_power(const SystemCounts& counts, const PowerConfig& config = {});

struct EdpResult {
  double power_w = 0.0;
  double cpi = 0.0;
  double edp = 0.0;
};

/// power x cpi^2. Throws ConfigError unless both are positive.
EdpResult edp(double power_w, double cpi);

/// One design in a power comparison. `edp` uses the total truncated to
/// whole watts, the precision power figures are usually quoted at;
/// `edp_exact` uses the unrounded total.
struct PowerRow {
  SystemCounts counts;
  PowerReport power;
  double reported_w = 0.0;
  EdpResult edp;
  EdpResult edp_exact;
  double edp_relative = 0.0;  // to the first row
};

std::vector<PowerRow> power_analysis(const std::vector<SystemCounts>& designs, const PowerConfig& config = {});

}  // namespace coaxsim
