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

#include "coaxsim/cxl.hpp"

#include <cmath>
#include <stdexcept>

#include "coaxsim/error.hpp"

namespace coaxsim {

std::string_view to_string(LinkDirection d) { return d == LinkDirection::kRx ? "rx" : "tx"; }

CxlLinkConfig CxlLinkConfig::x8() { return CxlLinkConfig{}; }

CxlLinkConfig CxlLinkConfig::x8_asym() {
  CxlLinkConfig c;
  c.name = "x8-asym";
  c.rx_pins = 20;
  c.tx_pins = 12;
  c.raw_rx_gbps = 40.0;
  c.raw_tx_gbps = 24.0;
  c.goodput_rx_gbps = 32.0;
  c.goodput_tx_gbps = 10.0;
  // 72 B / 10 GB/s gives 7.2 ns; the reference traversal figure is 9 ns.
  c.tx_data_serialization_ns = 9.0;
  return c;
}

std::optional<CxlLinkConfig> CxlLinkConfig::preset(std::string_view name) {
  if (name == "x8") return x8();
  if (name == "x8-asym") return x8_asym();
  return std::nullopt;
}

void CxlLinkConfig::validate() const {
  if (!(goodput_rx_gbps > 0) || !(goodput_tx_gbps > 0)) {
    throw ConfigError("cxl link '" + name + "': goodput must be positive in both directions");
  }
  if (goodput_rx_gbps > raw_rx_gbps || goodput_tx_gbps > raw_tx_gbps) {
    throw ConfigError("cxl link '" + name + "': goodput cannot exceed raw bandwidth");
  }
  if (port_delay_rx_ns < 0 || port_delay_tx_ns < 0 || tx_data_serialization_ns < 0 ||
      rx_data_serialization_ns < 0) {
    throw ConfigError("cxl link '" + name + "': delays must be >= 0");
  }
  if (fifo_capacity == 0) throw ConfigError("cxl link '" + name + "': fifo_capacity must be >= 1");
}

Tick serialize(LinkDirection direction, std::uint32_t payload_bytes, const CxlLinkConfig& config) {
  const double goodput = config.goodput_gbps(direction);
  if (!(goodput > 0)) {
    throw ConfigError("cxl link '" + config.name + "': zero goodput on " +
                      std::string(to_string(direction)));
  }
  const std::uint64_t bytes = std::uint64_t{payload_bytes} + config.message_overhead_bytes;
  if (bytes == 0) return 0;
  // bytes / (GB/s) is ns; x1000 for ps. The epsilon absorbs representation
  // error so exact quotients do not round up.
  const double ps = static_cast<double>(bytes) * 1000.0 / goodput;
  return static_cast<Tick>(std::ceil(ps - 1e-6));
}

LinkDirection direction_of(MessageKind kind) {
  return kind == MessageKind::kReadResponse ? LinkDirection::kRx : LinkDirection::kTx;
}

Tick message_serialization(MessageKind kind, const CxlLinkConfig& config) {
  switch (kind) {
    case MessageKind::kReadRequest:
      return serialize(LinkDirection::kTx, config.read_request_bytes, config);
    case MessageKind::kWrite:
      if (config.tx_data_serialization_ns > 0) return ns_to_ticks(config.tx_data_serialization_ns);
      return serialize(LinkDirection::kTx, kLineBytes + config.write_header_bytes, config);
    case MessageKind::kReadResponse:
      if (config.rx_data_serialization_ns > 0) return ns_to_ticks(config.rx_data_serialization_ns);
      return serialize(LinkDirection::kRx, kLineBytes + config.response_header_bytes, config);
  }
  return 0;
}

Tick uncontended_read_overhead(const CxlLinkConfig& config) {
  return config.port_delay(LinkDirection::kTx) + message_serialization(MessageKind::kReadRequest, config) +
         config.port_delay(LinkDirection::kRx) + message_serialization(MessageKind::kReadResponse, config);
}

CxlLinkConfig with_read_overhead(const CxlLinkConfig& config, double target_ns) {
  const Tick wire = message_serialization(MessageKind::kReadRequest, config) +
                    message_serialization(MessageKind::kReadResponse, config);
  const Tick target = ns_to_ticks(target_ns);
  if (target < wire) {
    throw ConfigError("cxl overhead " + std::to_string(target_ns) +
                      " ns is below the link's own wire time of " + std::to_string(ticks_to_ns(wire)) +
                      " ns");
  }
  const Tick ports_now = config.port_delay(LinkDirection::kTx) + config.port_delay(LinkDirection::kRx);
  const Tick ports_want = target - wire;
  CxlLinkConfig out = config;
  if (ports_now == 0) {
    out.port_delay_tx_ns = ticks_to_ns(ports_want / 2);
    out.port_delay_rx_ns = ticks_to_ns(ports_want - ports_want / 2);
    return out;
  }
  // Scale TX, then give RX the remainder so the total is exact in ps.
  const Tick tx = static_cast<Tick>(std::llround(static_cast<double>(config.port_delay(LinkDirection::kTx)) *
                                                 static_cast<double>(ports_want) /
                                                 static_cast<double>(ports_now)));
  out.port_delay_tx_ns = ticks_to_ns(tx);
  out.port_delay_rx_ns = ticks_to_ns(ports_want - tx);
  return out;
}

LinkChannel::LinkChannel(LinkDirection direction, const CxlLinkConfig& config)
    : direction_(direction), config_(&config) {}

Tick LinkChannel::enqueue(const LinkMessage& m, Tick now) {
  const bool urgent = config_->tx_read_priority && m.kind == MessageKind::kReadRequest;
  (urgent ? priority_ : normal_).push_back(m);
  if (departure_pending_) return kNever;
  departure_pending_ = true;
  return std::max(now, busy_until_);
}

Departure LinkChannel::depart(Tick now) {
  if (queued() == 0) throw std::logic_error("link depart with an empty queue");
  if (now < busy_until_) throw std::logic_error("link depart while the wire is busy");
  std::deque<LinkMessage>& q = priority_.empty() ? normal_ : priority_;
  Departure d;
  d.message = q.front();
  q.pop_front();
  d.wire = message_serialization(d.message.kind, *config_);
  d.port = config_->port_delay(direction_);
  busy_until_ = now + d.wire;
  busy_total_ += d.wire;
  d.arrival = busy_until_ + d.port;
  if (queued() > 0) {
    d.next_departure = busy_until_;
  } else {
    departure_pending_ = false;
  }
  return d;
}

Link::Link(CxlLinkConfig config)
    : config_(std::move(config)), rx_(LinkDirection::kRx, config_), tx_(LinkDirection::kTx, config_) {
  config_.validate();
}

}  // namespace coaxsim
