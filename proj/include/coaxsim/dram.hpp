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

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "coaxsim/request.hpp"
#include "coaxsim/tick.hpp"

namespace coaxsim {

/// Device and interface timing for one DDR channel. Values in ns convert to
/// integer picoseconds on use.
struct DramTiming {
  double data_rate_mts = 4800.0;
  std::uint32_t subchannels = 2;
  std::uint32_t ranks_per_subchannel = 1;
  std::uint32_t banks_per_rank = 32;
  double t_rcd_ns = 16.0;
  double t_cl_ns = 16.0;
  double t_rp_ns = 16.0;
  double t_ras_ns = 32.0;
  std::uint32_t burst_length = 16;
  std::uint32_t bus_width_bits = 32;  // per subchannel
  double read_write_turnaround_ns = 2.0;   // last read data -> first write data
  double write_read_turnaround_ns = 10.0;  // last write data -> read CAS
  double controller_pipeline_ns = 8.0;

  double t_wr_ns = 30.0;    // write recovery before precharge
  double t_ccd_ns = 5.0;    // CAS to CAS, same bank
  double t_rrd_ns = 5.0;    // ACT to ACT, same subchannel
  double t_faw_ns = 13.333; // four-activate window, same subchannel
  std::uint32_t row_bytes = 2048;

  /// All-bank refresh per subchannel: every refresh_interval_ns the
  /// subchannel is unavailable for refresh_cycle_ns and its rows close.
  /// Zero interval disables refresh.
  double refresh_interval_ns = 0.0;
  double refresh_cycle_ns = 295.0;

  /// When non-zero every access costs exactly this long and holds its bank
  /// for the whole access; bus and activate constraints are ignored.
  double fixed_service_ns = 0.0;

  Tick t_burst() const;
  /// Peak data bandwidth of the whole channel, bytes/s.
  double peak_bytes_per_s() const;
  std::uint32_t banks_per_subchannel() const { return ranks_per_subchannel * banks_per_rank; }
  std::uint32_t lines_per_row() const { return row_bytes / kLineBytes; }

  /// Throws ConfigError on a non-physical configuration.
  void validate() const;

  bool operator==(const DramTiming&) const = default;
};

enum class PagePolicy : std::uint8_t {
  kOpen,          // rows stay open until a conflict
  kOpenAdaptive,  // row kept open only while a queued request targets it
  kClosed,        // auto-precharge after every access
};

enum class SchedulerPolicy : std::uint8_t { kFrFcfs, kFcfs };

std::string_view to_string(PagePolicy p);
std::string_view to_string(SchedulerPolicy p);
std::optional<PagePolicy> parse_page_policy(std::string_view s);
std::optional<SchedulerPolicy> parse_scheduler_policy(std::string_view s);

struct ControllerConfig {
  std::uint32_t read_queue_capacity = 64;
  std::uint32_t write_queue_capacity = 64;
  std::uint32_t write_high_watermark = 48;
  std::uint32_t write_low_watermark = 16;
  std::uint32_t starvation_cap = 16;
  PagePolicy page_policy = PagePolicy::kOpenAdaptive;
  SchedulerPolicy scheduler = SchedulerPolicy::kFrFcfs;

  void validate() const;
  bool operator==(const ControllerConfig&) const = default;
};

struct DramConfig {
  DramTiming timing;
  ControllerConfig controller;

  bool operator==(const DramConfig&) const = default;
};

/// Location of a line inside one channel.
struct DramCoordinates {
  std::uint32_t subchannel = 0;
  std::uint32_t bank = 0;  // rank-major index within the subchannel
  std::uint32_t column = 0;
  std::uint64_t row = 0;
};

/// Decodes a channel-local line index. Bits, low to high: subchannel, bank,
/// rank, column, row.
DramCoordinates decode_line(std::uint64_t local_line, const DramTiming& timing);

/// DRAM access time for one request on an idle bank, including the
/// controller pipeline.
Tick service_time(RowOutcome outcome, const DramTiming& timing);

struct BankState {
  std::optional<std::uint64_t> open_row;
  Tick busy_until = 0;  // earliest next command of any kind
  AccessKind last_op = AccessKind::kRead;
  bool used = false;

  Tick next_act = 0;
  Tick next_cas = 0;
  Tick next_pre = 0;
  Tick last_act = 0;
  std::uint64_t refresh_epoch = 0;  // refreshes seen when the open row was last used
};

/// One issued access: the request, its dispatch and its data-done time.
struct Issue {
  MemoryRequest* request = nullptr;
  Tick done = 0;
};

/// Controller queue, scheduler and bank/bus timing for one DDR channel.
class Channel {
 public:
  Channel(std::uint32_t index, DramConfig config);

  std::uint32_t index() const { return index_; }
  const DramConfig& config() const { return config_; }

  /// Adds a request that reached the controller. `local_line` is the
  /// channel-local line index produced by the topology's address map.
  void enqueue(MemoryRequest& request, std::uint64_t local_line, Tick now);

  struct DispatchResult {
    std::vector<Issue> issued;
    Tick next_wakeup = kNever;  // earliest tick a blocked request may issue
    bool read_blocked_on_budget = false;
  };

  /// Issues every request the scheduler allows at `now`, at most
  /// `read_budget` of them reads.
  DispatchResult dispatch(Tick now, std::uint32_t read_budget);

  std::size_t pending_reads() const { return reads_.size(); }
  std::size_t pending_writes() const { return writes_.size(); }
  bool draining_writes() const { return drain_; }
  const BankState& bank(std::uint32_t subchannel, std::uint32_t bank) const {
    return banks_[subchannel * config_.timing.banks_per_subchannel() + bank];
  }

 private:
  struct Entry {
    MemoryRequest* request;
    DramCoordinates at;
    std::uint32_t bypassed = 0;
  };

  struct Plan {
    RowOutcome outcome = RowOutcome::kNone;
    Tick earliest = 0;
    Tick pre_rel = 0;
    Tick act_rel = 0;
    Tick cas_rel = 0;
    Tick data_rel = 0;
    Tick service = 0;
    bool needs_act = false;
  };

  struct SubchannelState {
    Tick bus_free = 0;
    Tick last_read_data_end = kNever;
    Tick last_write_data_end = kNever;
    std::array<Tick, 4> recent_acts{kNever, kNever, kNever, kNever};  // oldest first
    Tick last_act = kNever;
  };

  // Timing in ticks, resolved once.
  struct Ticks {
    Tick rcd, cl, rp, ras, burst, rtw, wtr, pipe, wr, ccd, rrd, faw, fixed, refi, rfc;
  };

  Plan plan(const Entry& e, Tick now) const;
  Plan plan(const Entry& e, Tick now, bool row_lost) const;
  /// Refresh windows of `subchannel` that have started at or before `t`.
  std::uint64_t refresh_epoch(std::uint32_t subchannel, Tick t) const;
  /// Pushes a command span [d + first, d + last) past any refresh window.
  Tick avoid_refresh(std::uint32_t subchannel, Tick d, Tick first, Tick last) const;
  void issue(std::deque<Entry>& queue, std::size_t pos, const Plan& p, Tick now,
             DispatchResult& out);
  bool row_wanted_elsewhere(const Entry& e) const;
  BankState& bank_of(const DramCoordinates& at) {
    return banks_[at.subchannel * config_.timing.banks_per_subchannel() + at.bank];
  }
  const BankState& bank_of(const DramCoordinates& at) const {
    return banks_[at.subchannel * config_.timing.banks_per_subchannel() + at.bank];
  }
  std::size_t visible(const std::deque<Entry>& q, std::uint32_t cap) const {
    return std::min<std::size_t>(q.size(), cap);
  }

  std::uint32_t index_;
  DramConfig config_;
  Ticks tk_;
  std::vector<BankState> banks_;
  std::vector<SubchannelState> subs_;
  std::deque<Entry> reads_;
  std::deque<Entry> writes_;
  bool drain_ = false;
};

}  // namespace coaxsim
