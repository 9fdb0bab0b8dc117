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

#include "coaxsim/cxl.hpp"
#include "coaxsim/dram.hpp"

namespace coaxsim {

/// One route from the cores to memory: an optional CXL link in front of one
/// or more DDR channels.
struct MemoryPath {
  std::optional<CxlLinkConfig> link;
  std::vector<DramConfig> channels;
};

struct Topology {
  std::string name;
  std::uint32_t cores = 12;
  std::vector<MemoryPath> paths;
  std::uint64_t interleave_bytes = 64;
  /// Stand-in for the smaller per-core LLC of some presets: scales the
  /// closed-loop miss probability. Open-loop traffic ignores it.
  double llc_miss_multiplier = 1.0;

  std::uint32_t channel_count() const;
  std::uint32_t link_count() const;
  double peak_dram_bytes_per_s() const;
  /// Throws ConfigError when the structure is unusable.
  void validate() const;
};

struct ChannelLocation {
  std::uint32_t path = 0;
  std::uint32_t channel = 0;          // global channel index
  std::uint32_t channel_in_path = 0;
  std::uint64_t local_line = 0;       // line index inside the channel
};

/// Round-robin interleave across all channels (path-major order) at the
/// topology's granularity.
ChannelLocation map_address(std::uint64_t address, const Topology& topology);

/// Preset names accepted by build_topology, in a stable order.
const std::vector<std::string>& preset_names();

/// Builds a named preset with the given DDR configuration for every
/// channel. Throws ConfigError listing the presets for an unknown name.
Topology build_topology(std::string_view preset, const DramConfig& dram = {});

}  // namespace coaxsim
