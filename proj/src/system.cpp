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

#include "coaxsim/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coaxsim/error.hpp"

namespace coaxsim {

namespace {

std::uint32_t link_dir_id(std::uint32_t link, LinkDirection d) {
  return link * 2 + static_cast<std::uint32_t>(d);
}

}  // namespace

System::System(Topology topology, std::unique_ptr<RequestSource> source, SystemOptions options)
    : topology_(std::move(topology)), source_(std::move(source)), options_(options) {
  topology_.validate();
  if (!(options_.warmup_fraction >= 0 && options_.warmup_fraction < 1)) {
    throw ConfigError("warmup_fraction must be in [0, 1)");
  }
  std::uint32_t ch = 0;
  for (const auto& path : topology_.paths) {
    path_first_channel_.push_back(ch);
    if (path.link) {
      path_link_.push_back(static_cast<int>(links_.size()));
      links_.push_back(std::make_unique<Link>(*path.link));
    } else {
      path_link_.push_back(-1);
    }
    for (const auto& cfg : path.channels) {
      channel_path_.push_back(static_cast<std::uint32_t>(path_first_channel_.size() - 1));
      channels_.push_back(std::make_unique<Channel>(ch++, cfg));
    }
  }
  channel_wake_.assign(channels_.size(), kNever);
}

void System::pull_arrival() {
  if (source_done_ || (request_limit_ != 0 && requests_.size() >= request_limit_)) {
    source_done_ = true;
    return;
  }
  const std::optional<Arrival> a = source_ ? source_->next() : std::nullopt;
  if (!a) {
    source_done_ = true;
    return;
  }
  MemoryRequest r;
  r.id = requests_.size();
  r.source = a->core;
  r.address = a->address;
  r.kind = a->kind;
  r.t.inject = a->at;
  requests_.push_back(r);
  events_.schedule(Event{a->at, EventKind::kInject, r.id, 0});
}

void System::send(std::uint32_t link, LinkDirection dir, MemoryRequest& r, MessageKind kind) {
  const Tick depart = links_[link]->direction(dir).enqueue(LinkMessage{&r, kind}, events_.now());
  if (depart != kNever) {
    events_.schedule(Event{depart, EventKind::kLinkDepart, link_dir_id(link, dir), static_cast<std::uint32_t>(dir)});
  }
}

void System::on_inject(std::uint64_t id) {
  MemoryRequest& r = requests_[id];
  const ChannelLocation loc = map_address(r.address, topology_);
  r.path = loc.path;
  r.channel = loc.channel;
  const int link = path_link_[loc.path];
  if (link >= 0) {
    send(static_cast<std::uint32_t>(link), LinkDirection::kTx, r,
         r.is_read() ? MessageKind::kReadRequest : MessageKind::kWrite);
  } else {
    events_.schedule(Event{events_.now(), EventKind::kMcEnqueue, id, 0});
  }
  pull_arrival();
}

void System::on_mc_enqueue(std::uint64_t id) {
  MemoryRequest& r = requests_[id];
  channels_[r.channel]->enqueue(r, map_address(r.address, topology_).local_line, events_.now());
  wake_channel(r.channel, events_.now());
}

void System::wake_channel(std::uint32_t channel, Tick at) {
  if (at >= channel_wake_[channel]) return;
  channel_wake_[channel] = at;
  events_.schedule(Event{at, EventKind::kMcDispatch, channel, 0});
}

void System::on_mc_dispatch(std::uint32_t channel) {
  const Tick now = events_.now();
  if (channel_wake_[channel] <= now) channel_wake_[channel] = kNever;
  const std::uint32_t path = channel_path_[channel];
  Link* l = path_link_[path] >= 0 ? links_[static_cast<std::size_t>(path_link_[path])].get() : nullptr;
  const std::uint32_t budget = l ? l->response_credits() : std::numeric_limits<std::uint32_t>::max();

  Channel::DispatchResult res = channels_[channel]->dispatch(now, budget);
  for (const Issue& is : res.issued) {
    if (l && is.request->is_read()) l->reserve_response(1);
    events_.schedule(Event{is.done, EventKind::kDramComplete, is.request->id, 0});
  }
  if (res.next_wakeup != kNever) wake_channel(channel, res.next_wakeup);
}

void System::on_dram_complete(std::uint64_t id) {
  MemoryRequest& r = requests_[id];
  r.t.dram_done = events_.now();
  const int link = path_link_[r.path];
  if (link >= 0 && r.is_read()) {
    send(static_cast<std::uint32_t>(link), LinkDirection::kRx, r, MessageKind::kReadResponse);
  } else {
    events_.schedule(Event{events_.now(), EventKind::kComplete, id, 0});
  }
}

void System::on_link_depart(std::uint32_t link_dir) {
  const std::uint32_t link = link_dir / 2;
  const auto dir = static_cast<LinkDirection>(link_dir % 2);
  const Departure d = links_[link]->direction(dir).depart(events_.now());
  MemoryRequest& r = *d.message.request;
  if (dir == LinkDirection::kTx) {
    r.t.tx_depart = events_.now();
    r.t.tx_wire = d.wire;
    r.t.tx_port = d.port;
  } else {
    r.t.rx_depart = events_.now();
    r.t.rx_wire = d.wire;
    r.t.rx_port = d.port;
    links_[link]->release_response();
    const std::uint32_t path = r.path;
    const std::uint32_t first = path_first_channel_[path];
    const auto n = static_cast<std::uint32_t>(topology_.paths[path].channels.size());
    for (std::uint32_t c = first; c < first + n; ++c) {
      if (channels_[c]->pending_reads() > 0) wake_channel(c, events_.now());
    }
  }
  events_.schedule(Event{d.arrival, EventKind::kLinkArrive, r.id, static_cast<std::uint32_t>(dir)});
  if (d.next_departure != kNever) {
    events_.schedule(Event{d.next_departure, EventKind::kLinkDepart, link_dir, static_cast<std::uint32_t>(dir)});
  }
}

void System::on_link_arrive(std::uint64_t id, LinkDirection dir) {
  if (dir == LinkDirection::kTx) {
    events_.schedule(Event{events_.now(), EventKind::kMcEnqueue, id, 0});
  } else {
    events_.schedule(Event{events_.now(), EventKind::kComplete, id, 0});
  }
}

void System::on_complete(std::uint64_t id) {
  MemoryRequest& r = requests_[id];
  if (r.t.complete != kNever) {
    throw SimulationError("request " + std::to_string(id) + " completed twice");
  }
  r.t.complete = events_.now();
  ++completed_;
}

SimulationTrace System::run(RunLimit limit) {
  request_limit_ = limit.requests;
  pull_arrival();

  while (!events_.empty()) {
    if (events_.top().due > limit.until) break;
    const Event e = events_.pop();
    switch (e.kind) {
      case EventKind::kInject: on_inject(e.id); break;
      case EventKind::kMcEnqueue: on_mc_enqueue(e.id); break;
      case EventKind::kMcDispatch: on_mc_dispatch(static_cast<std::uint32_t>(e.id)); break;
      case EventKind::kDramComplete: on_dram_complete(e.id); break;
      case EventKind::kLinkDepart: on_link_depart(static_cast<std::uint32_t>(e.id)); break;
      case EventKind::kLinkArrive: on_link_arrive(e.id, static_cast<LinkDirection>(e.aux)); break;
      case EventKind::kComplete: on_complete(e.id); break;
    }
    if (limit.requests != 0 && completed_ >= limit.requests) break;
  }

  if (events_.empty()) {
    if (!source_done_ || completed_ != requests_.size()) {
      std::ostringstream os;
      os << "event queue drained at " << events_.now() << " ps with " << requests_.size() << " injected and "
         << completed_ << " completed requests";
      throw SimulationError(os.str());
    }
    if (limit.until != kNever && events_.now() < limit.until) events_.advance_to(limit.until);
  } else if (limit.until != kNever && events_.now() < limit.until && events_.top().due > limit.until) {
    events_.advance_to(limit.until);
  }

  SimulationTrace trace;
  trace.injected = requests_.size();
  trace.completed = completed_;
  trace.events_dispatched = events_.dispatched();
  trace.final_clock = events_.now();
  trace.requests.assign(requests_.begin(), requests_.end());
  const std::uint64_t basis = limit.requests != 0 ? limit.requests : trace.injected;
  trace.warmup_requests = std::min<std::uint64_t>(
      trace.injected, static_cast<std::uint64_t>(std::floor(options_.warmup_fraction * static_cast<double>(basis))));
  if (trace.warmup_requests < trace.injected) {
    trace.measure_begin = trace.requests[trace.warmup_requests].t.inject;
    trace.measure_end = trace.requests.back().t.inject;
  }
  for (const auto& c : channels_) trace.channel_peak_bytes_per_s.push_back(c->config().timing.peak_bytes_per_s());
  trace.path_link = path_link_;
  trace.link_count = static_cast<std::uint32_t>(links_.size());

  if (source_) {
    if (const auto rate = source_->nominal_rate()) {
      const double min_peak =
          *std::min_element(trace.channel_peak_bytes_per_s.begin(), trace.channel_peak_bytes_per_s.end());
      if (*rate > 10.0 * min_peak) {
        std::ostringstream os;
        os << "offered rate " << *rate / 1e9 << " GB/s exceeds 10x the peak of a downstream channel ("
           << min_peak / 1e9 << " GB/s); queues will saturate";
        trace.warnings.push_back(os.str());
      }
    }
  }
  return trace;
}

}  // namespace coaxsim
