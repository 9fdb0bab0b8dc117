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
#include <optional>
#include <string>
#include <string_view>

#include "coaxsim/request.hpp"
#include "coaxsim/tick.hpp"

namespace coaxsim {

/// RX carries device-to-host traffic (read data), TX host-to-device
/// (read requests and write data).
enum class LinkDirection : std::uint8_t { kRx = 0, kTx = 1 };

std::string_view to_string(LinkDirection d);

enum class MessageKind : std::uint8_t { kReadRequest, kWrite, kReadResponse };

struct CxlLinkConfig {
  std::string name = "x8";
  std::uint32_t rx_pins = 16;
  std::uint32_t tx_pins = 16;
  double raw_rx_gbps = 32.0;
  double raw_tx_gbps = 32.0;
  double goodput_rx_gbps = 26.0;
  double goodput_tx_gbps = 13.0;
  double port_delay_rx_ns = 12.0;
  double port_delay_tx_ns = 12.0;
  std::uint32_t message_overhead_bytes = 0;

  std::uint32_t read_request_bytes = 8;
  std::uint32_t write_header_bytes = 8;  // a write message is 64 + this
  std::uint32_t response_header_bytes = 0;
  /// Fixed wire time for a 64-byte data message in that direction; zero
  /// derives it from goodput.
  double tx_data_serialization_ns = 0.0;
  double rx_data_serialization_ns = 0.0;

  std::uint32_t fifo_capacity = 64;
  /// Read requests leave ahead of queued write data on TX.
  bool tx_read_priority = true;

  static CxlLinkConfig x8();
  static CxlLinkConfig x8_asym();
  static std::optional<CxlLinkConfig> preset(std::string_view name);

  void validate() const;

  double goodput_gbps(LinkDirection d) const {
    return d == LinkDirection::kRx ? goodput_rx_gbps : goodput_tx_gbps;
  }
  Tick port_delay(LinkDirection d) const {
    return ns_to_ticks(d == LinkDirection::kRx ? port_delay_rx_ns : port_delay_tx_ns);
  }
};

/// (payload + message overhead) / goodput, rounded up to whole ps.
/// Throws ConfigError for zero goodput.
Tick serialize(LinkDirection direction, std::uint32_t payload_bytes, const CxlLinkConfig& config);

LinkDirection direction_of(MessageKind kind);

/// Wire time of one protocol message, honouring the fixed data overrides.
Tick message_serialization(MessageKind kind, const CxlLinkConfig& config);

/// Link time added to an uncontended read: both port delays plus the
/// request and response wire times.
Tick uncontended_read_overhead(const CxlLinkConfig& config);

/// Returns `config` with both port delays scaled by a common factor so the
/// uncontended read overhead equals `target_ns` (to the picosecond).
CxlLinkConfig with_read_overhead(const CxlLinkConfig& config, double target_ns);

/// One queued message on a link direction.
struct LinkMessage {
  MemoryRequest* request = nullptr;
  MessageKind kind = MessageKind::kReadRequest;
};

/// A message that has just left: when it lands on the far side, and when
/// the direction can start the next one.
struct Departure {
  LinkMessage message;
  Tick wire = 0;
  Tick port = 0;
  Tick arrival = 0;
  Tick next_departure = kNever;  // kNever when nothing else is queued
};

/// Serializing state of one direction of one link.
class LinkChannel {
 public:
  LinkChannel(LinkDirection direction, const CxlLinkConfig& config);

  /// Queues a message. Returns the tick at which a departure must be
  /// scheduled, or kNever if one is already pending.
  Tick enqueue(const LinkMessage& m, Tick now);

  /// Sends the next message at `now`. Requires a queued message and an
  /// idle wire.
  Departure depart(Tick now);

  std::size_t queued() const { return priority_.size() + normal_.size(); }
  Tick busy_until() const { return busy_until_; }
  Tick busy_total() const { return busy_total_; }
  LinkDirection direction() const { return direction_; }

 private:
  LinkDirection direction_;
  const CxlLinkConfig* config_;
  std::deque<LinkMessage> priority_;
  std::deque<LinkMessage> normal_;
  Tick busy_until_ = 0;
  Tick busy_total_ = 0;
  bool departure_pending_ = false;
};

/// Both directions of one link plus the response-slot credits the device
/// controller must hold before it may start a read.
class Link {
 public:
  explicit Link(CxlLinkConfig config);
  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  const CxlLinkConfig& config() const { return config_; }
  LinkChannel& direction(LinkDirection d) { return d == LinkDirection::kRx ? rx_ : tx_; }
  const LinkChannel& direction(LinkDirection d) const { return d == LinkDirection::kRx ? rx_ : tx_; }

  std::uint32_t response_credits() const { return config_.fifo_capacity - reserved_; }
  void reserve_response(std::uint32_t n) { reserved_ += n; }
  void release_response() { --reserved_; }

 private:
  CxlLinkConfig config_;
  LinkChannel rx_;
  LinkChannel tx_;
  std::uint32_t reserved_ = 0;
};

}  // namespace coaxsim
