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

#include "coaxsim/request.hpp"

namespace coaxsim {

RequestBreakdown decompose(const MemoryRequest& r) {
  const Timeline& t = r.t;
  RequestBreakdown b;
  b.total = t.complete - t.inject;
  b.mc_queue = t.dispatch - t.mc_enqueue;
  b.dram_service = t.dram_done - t.dispatch;
  b.link_port = t.tx_port + t.rx_port;
  // Everything before the controller and after the DRAM that is not port
  // delay is link queueing or wire time.
  b.link_wire_queue = (t.mc_enqueue - t.inject - t.tx_port) + (t.complete - t.dram_done - t.rx_port);
  return b;
}

bool timeline_is_monotone(const MemoryRequest& r) {
  const Timeline& t = r.t;
  if (t.inject == kNever || t.mc_enqueue == kNever || t.dispatch == kNever ||
      t.dram_done == kNever || t.complete == kNever) {
    return false;
  }
  if (!(t.inject <= t.mc_enqueue && t.mc_enqueue <= t.dispatch && t.dispatch <= t.dram_done &&
        t.dram_done <= t.complete)) {
    return false;
  }
  if (t.tx_depart != kNever && !(t.inject <= t.tx_depart && t.tx_depart <= t.mc_enqueue)) return false;
  if (t.rx_depart != kNever && !(t.dram_done <= t.rx_depart && t.rx_depart <= t.complete)) return false;
  return true;
}

}  // namespace coaxsim
