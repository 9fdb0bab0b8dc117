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
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coaxsim/cxl.hpp"
#include "coaxsim/dram.hpp"
#include "coaxsim/event_queue.hpp"
#include "coaxsim/request.hpp"
#include "coaxsim/topology.hpp"
#include "coaxsim/traffic.hpp"

namespace coaxsim {

/// Stop condition: whichever of the tick horizon or the completed-request
/// count comes first. Zero requests means no count limit.
struct RunLimit {
  Tick until = kNever;
  std::uint64_t requests = 0;

  static RunLimit ticks(Tick t) { return RunLimit{t, 0}; }
  static RunLimit count(std::uint64_t n) { return RunLimit{kNever, n}; }
};

/// Completed-request ledger plus engine counters and the topology facts
/// needed to interpret it.
struct SimulationTrace {
  std::vector<MemoryRequest> requests;  // every injected request; index == id
  std::uint64_t injected = 0;
  std::uint64_t completed = 0;
  std::uint64_t events_dispatched = 0;
  Tick final_clock = 0;

  /// Requests with id below this are excluded from statistics.
  std::uint64_t warmup_requests = 0;
  Tick measure_begin = 0;
  Tick measure_end = 0;

  std::vector<double> channel_peak_bytes_per_s;
  std::vector<int> path_link;  // link index per path, -1 for a direct path
  std::uint32_t link_count = 0;
  std::vector<std::string> warnings;
};

struct SystemOptions {
  double warmup_fraction = 0.1;
};

/// One simulation instance: traffic source, optional CXL links and DDR
/// channels, driven by a single event queue.
class System {
 public:
  System(Topology topology, std::unique_ptr<RequestSource> source, SystemOptions options = {});
  System(const System&) = delete;
  System& operator=(const System&) = delete;

  /// Dispatches events until the limit. Throws SimulationError if the
  /// event queue runs dry while traffic is still owed.
  SimulationTrace run(RunLimit limit);

  const Topology& topology() const { return topology_; }
  Tick now() const { return events_.now(); }
  const Channel& channel(std::uint32_t i) const { return *channels_[i]; }
  const Link& link(std::uint32_t i) const { return *links_[i]; }

 private:
  void pull_arrival();
  void on_inject(std::uint64_t id);
  void on_mc_enqueue(std::uint64_t id);
  void on_mc_dispatch(std::uint32_t channel);
  void on_dram_complete(std::uint64_t id);
  void on_link_depart(std::uint32_t link_dir);
  void on_link_arrive(std::uint64_t id, LinkDirection dir);
  void on_complete(std::uint64_t id);

  void wake_channel(std::uint32_t channel, Tick at);
  void send(std::uint32_t link, LinkDirection dir, MemoryRequest& r, MessageKind kind);

  Topology topology_;
  std::unique_ptr<RequestSource> source_;
  SystemOptions options_;
  EventQueue events_;

  std::vector<std::unique_ptr<Channel>> channels_;
  std::vector<std::unique_ptr<Link>> links_;
  std::vector<int> path_link_;
  std::vector<std::uint32_t> path_first_channel_;
  std::vector<std::uint32_t> channel_path_;
  std::vector<Tick> channel_wake_;

  std::deque<MemoryRequest> requests_;
  std::uint64_t request_limit_ = 0;
  bool source_done_ = false;
  std::uint64_t completed_ = 0;
};

}  // namespace coaxsim
