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
#include <string_view>

#include "coaxsim/tick.hpp"

namespace coaxsim {

inline constexpr std::uint32_t kLineBytes = 64;

enum class AccessKind : std::uint8_t { kRead, kWrite };

inline constexpr std::string_view to_string(AccessKind k) {
  return k == AccessKind::kRead ? "R" : "W";
}

enum class RowOutcome : std::uint8_t { kNone, kHit, kClosed, kConflict };

/// Per-stage timestamps. Stages a request never visits stay kNever, except
/// the link fields, which are zero on paths without a link.
struct Timeline {
  Tick inject = kNever;
  Tick tx_depart = kNever;   // host-to-device link, when present
  Tick mc_enqueue = kNever;  // arrival at the memory controller
  Tick dispatch = kNever;
  Tick dram_done = kNever;
  Tick rx_depart = kNever;   // device-to-host link, reads only
  Tick complete = kNever;

  Tick tx_wire = 0;
  Tick tx_port = 0;
  Tick rx_wire = 0;
  Tick rx_port = 0;
};

/// One 64-byte line access.
struct MemoryRequest {
  std::uint64_t id = 0;
  std::uint32_t source = 0;
  std::uint64_t address = 0;
  AccessKind kind = AccessKind::kRead;
  std::uint32_t size = kLineBytes;

  std::uint32_t path = 0;
  std::uint32_t channel = 0;  // global channel index
  RowOutcome row = RowOutcome::kNone;
  Timeline t;

  bool is_read() const { return kind == AccessKind::kRead; }
  bool completed() const { return t.complete != kNever; }
};

/// Queue/service/link decomposition of one completed request, in ticks.
/// The parts always sum to `total`.
struct RequestBreakdown {
  Tick mc_queue = 0;
  Tick dram_service = 0;
  Tick link_port = 0;
  Tick link_wire_queue = 0;
  Tick total = 0;
};

RequestBreakdown decompose(const MemoryRequest& r);

/// True when every visited stage is non-decreasing in pipeline order.
bool timeline_is_monotone(const MemoryRequest& r);

}  // namespace coaxsim
