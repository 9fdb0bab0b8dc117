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

#include "coaxsim/topology.hpp"

#include "coaxsim/error.hpp"

namespace coaxsim {

std::uint32_t Topology::channel_count() const {
  std::uint32_t n = 0;
  for (const auto& p : paths) n += static_cast<std::uint32_t>(p.channels.size());
  return n;
}

std::uint32_t Topology::link_count() const {
  std::uint32_t n = 0;
  for (const auto& p : paths) n += p.link.has_value() ? 1 : 0;
  return n;
}

double Topology::peak_dram_bytes_per_s() const {
  double total = 0;
  for (const auto& p : paths) {
    for (const auto& c : p.channels) total += c.timing.peak_bytes_per_s();
  }
  return total;
}

void Topology::validate() const {
  if (paths.empty()) throw ConfigError("topology '" + name + "' has no memory paths");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].channels.empty()) {
      throw ConfigError("topology '" + name + "' path " + std::to_string(i) + " has no channels");
    }
    if (paths[i].link) paths[i].link->validate();
    for (const auto& c : paths[i].channels) {
      c.timing.validate();
      c.controller.validate();
    }
  }
  if (interleave_bytes < kLineBytes || (interleave_bytes & (interleave_bytes - 1)) != 0) {
    throw ConfigError("interleave_bytes must be a power of two >= 64");
  }
  if (cores == 0) throw ConfigError("topology cores must be >= 1");
  if (!(llc_miss_multiplier > 0)) throw ConfigError("llc_miss_multiplier must be positive");
}

ChannelLocation map_address(std::uint64_t address, const Topology& topology) {
  const std::uint64_t n = topology.channel_count();
  const std::uint64_t g = topology.interleave_bytes;
  const std::uint64_t chunk = address / g;
  ChannelLocation loc;
  loc.channel = static_cast<std::uint32_t>(chunk % n);
  const std::uint64_t local_addr = (chunk / n) * g + address % g;
  loc.local_line = local_addr / kLineBytes;

  std::uint32_t remaining = loc.channel;
  for (std::uint32_t p = 0; p < topology.paths.size(); ++p) {
    const auto k = static_cast<std::uint32_t>(topology.paths[p].channels.size());
    if (remaining < k) {
      loc.path = p;
      loc.channel_in_path = remaining;
      break;
    }
    remaining -= k;
  }
  return loc;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"ddr-baseline", "coaxial-2x", "coaxial-4x",
                                                 "coaxial-5x", "coaxial-asym"};
  return names;
}

namespace {

Topology cxl_preset(std::string name, std::uint32_t links, const CxlLinkConfig& link,
                    std::uint32_t channels_per_link, const DramConfig& dram, double miss_multiplier) {
  Topology t;
  t.name = std::move(name);
  t.llc_miss_multiplier = miss_multiplier;
  for (std::uint32_t i = 0; i < links; ++i) {
    t.paths.push_back(MemoryPath{link, std::vector<DramConfig>(channels_per_link, dram)});
  }
  return t;
}

}  // namespace

Topology build_topology(std::string_view preset, const DramConfig& dram) {
  // Presets with half the per-core LLC see more misses.
  constexpr double kHalvedLlc = 1.3;
  Topology t;
  if (preset == "ddr-baseline") {
    t.name = "ddr-baseline";
    t.paths.push_back(MemoryPath{std::nullopt, {dram}});
  } else if (preset == "coaxial-2x") {
    t = cxl_preset("coaxial-2x", 2, CxlLinkConfig::x8(), 1, dram, 1.0);
  } else if (preset == "coaxial-4x") {
    t = cxl_preset("coaxial-4x", 4, CxlLinkConfig::x8(), 1, dram, kHalvedLlc);
  } else if (preset == "coaxial-5x") {
    t = cxl_preset("coaxial-5x", 5, CxlLinkConfig::x8(), 1, dram, 1.0);
  } else if (preset == "coaxial-asym") {
    t = cxl_preset("coaxial-asym", 4, CxlLinkConfig::x8_asym(), 2, dram, kHalvedLlc);
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown topology preset '" + std::string(preset) + "' (available: " + known + ")");
  }
  t.validate();
  return t;
}

}  // namespace coaxsim
