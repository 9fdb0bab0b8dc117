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

#include "coaxsim/models.hpp"

#include <cmath>

#include "coaxsim/error.hpp"

namespace coaxsim {

InterfaceSpec InterfaceSpec::ddr5_4800() { return {"DDR5-4800", 160, 38.4, false}; }
InterfaceSpec InterfaceSpec::pcie5_lane() { return {"PCIe5 lane", 4, 4.0, true}; }
InterfaceSpec InterfaceSpec::pcie5_x8() { return {"PCIe5 x8", 32, 32.0, true}; }

std::vector<InterfaceSpec> InterfaceSpec::builtins() { return {ddr5_4800(), pcie5_lane(), pcie5_x8()}; }

double bandwidth_per_pin(const InterfaceSpec& spec) {
  if (spec.pins == 0) throw ConfigError("interface '" + spec.name + "' has zero pins");
  if (!(spec.bandwidth_gbps >= 0)) throw ConfigError("interface '" + spec.name + "' has negative bandwidth");
  return spec.bandwidth_gbps / spec.pins;
}

PinComparison compare_pins(const InterfaceSpec& ddr, const InterfaceSpec& serial) {
  PinComparison c;
  c.ddr_gbps_per_pin = bandwidth_per_pin(ddr);
  c.serial_gbps_per_pin = bandwidth_per_pin(serial);
  c.ratio = c.serial_gbps_per_pin / c.ddr_gbps_per_pin;
  c.pin_reduction = static_cast<double>(ddr.pins) / serial.pins;
  return c;
}

SystemCounts SystemCounts::baseline() { return {"baseline", 12, 0, 200.0, 2.02}; }
// 48 x8 links, 8 lanes each.
SystemCounts SystemCounts::coaxial() { return {"coaxial", 48, 384, 551.0, 1.33}; }

PowerReport system_power(const SystemCounts& counts, const PowerConfig& config) {
  for (double v : {config.package_w, config.ddr_controller_w, config.ddr_phy_w, config.pcie_lane_w, counts.dimm_w}) {
    if (!(v >= 0) || !std::isfinite(v)) throw ConfigError("power inputs must be finite and >= 0");
  }
  PowerReport r;
  r.components = {
      {"package", config.package_w},
      {"ddr_controllers", counts.ddr_channels * config.ddr_controller_w},
      {"ddr_phys", counts.ddr_channels * config.ddr_phy_w},
      {"pcie_lanes", counts.pcie_lanes * config.pcie_lane_w},
      {"dimms", counts.dimm_w},
  };
  for (const auto& c : r.components) r.total_w += c.watts;
  return r;
}

EdpResult edp(double power_w, double cpi) {
  if (!(power_w > 0) || !(cpi > 0)) throw ConfigError("EDP needs positive power and CPI");
  return EdpResult{power_w, cpi, power_w * cpi * cpi};
}

std::vector<PowerRow> power_analysis(const std::vector<SystemCounts>& designs, const PowerConfig& config) {
  std::vector<PowerRow> rows;
  for (const SystemCounts& d : designs) {
    PowerRow row;
    row.counts = d;
    row.power = system_power(d, config);
    row.reported_w = std::floor(row.power.total_w + 1e-9);
    row.edp = edp(row.reported_w, d.cpi);
    row.edp_exact = edp(row.power.total_w, d.cpi);
    row.edp_relative = rows.empty() ? 1.0 : row.edp.edp / rows.front().edp.edp;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace coaxsim
