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

#include "coaxsim/event_queue.hpp"

#include <stdexcept>
#include <string>

namespace coaxsim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kInject: return "inject";
    case EventKind::kMcEnqueue: return "mc-enqueue";
    case EventKind::kMcDispatch: return "mc-dispatch";
    case EventKind::kDramComplete: return "dram-complete";
    case EventKind::kLinkDepart: return "link-depart";
    case EventKind::kLinkArrive: return "link-arrive";
    case EventKind::kComplete: return "complete";
  }
  return "?";
}

bool EventQueue::Later::operator()(const Entry& a, const Entry& b) const {
  if (a.event.due != b.event.due) return a.event.due > b.event.due;
  if (a.event.kind != b.event.kind) return a.event.kind > b.event.kind;
  if (a.event.id != b.event.id) return a.event.id > b.event.id;
  return a.seq > b.seq;
}

void EventQueue::schedule(const Event& e) {
  if (e.due < now_) {
    throw std::logic_error("event '" + std::string(to_string(e.kind)) + "' for id " +
                           std::to_string(e.id) + " scheduled at " + std::to_string(e.due) +
                           " ps, before the current clock " + std::to_string(now_) + " ps");
  }
  heap_.push(Entry{e, seq_++});
}

Event EventQueue::pop() {
  Event e = heap_.top().event;
  heap_.pop();
  now_ = e.due;
  ++dispatched_;
  return e;
}

void EventQueue::advance_to(Tick t) {
  if (t < now_) throw std::logic_error("clock cannot move backwards");
  if (!heap_.empty() && heap_.top().event.due < t) {
    throw std::logic_error("advance_to would skip a pending event");
  }
  now_ = t;
}

}  // namespace coaxsim
