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
#include <queue>
#include <string_view>
#include <vector>

#include "coaxsim/tick.hpp"

namespace coaxsim {

/// Declaration order is the same-tick dispatch order.
enum class EventKind : std::uint8_t {
  kInject,
  kMcEnqueue,
  kMcDispatch,
  kDramComplete,
  kLinkDepart,
  kLinkArrive,
  kComplete,
};

std::string_view to_string(EventKind k);

/// `id` is a request id for request events and a resource index (channel,
/// link direction) for kMcDispatch/kLinkDepart. `aux` carries a small
/// qualifier such as the link direction.
struct Event {
  Tick due = 0;
  EventKind kind = EventKind::kInject;
  std::uint64_t id = 0;
  std::uint32_t aux = 0;
};

/// Min-heap of events with a total, platform-independent order:
/// (due, kind, id, insertion sequence).
class EventQueue {
 public:
  /// Throws std::logic_error when `e.due` precedes the current clock.
  void schedule(const Event& e);

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top().event; }

  /// Removes the earliest event and advances the clock to its due time.
  Event pop();

  Tick now() const { return now_; }

  /// Moves the clock forward without dispatching. Only valid when no pending
  /// event is due before `t`.
  void advance_to(Tick t);

  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Entry {
    Event event;
    std::uint64_t seq;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const;
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  Tick now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t dispatched_ = 0;
};

}  // namespace coaxsim
