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

#include "coaxsim/dram.hpp"

#include <cmath>
#include <string>

#include "coaxsim/error.hpp"

namespace coaxsim {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

Tick DramTiming::t_burst() const {
  // burst_length transfers at data_rate_mts MT/s, rounded up to whole ps so
  // that delivered bandwidth never exceeds the nominal peak.
  const double ps = static_cast<double>(burst_length) * 1.0e6 / data_rate_mts;
  return static_cast<Tick>(std::ceil(ps - 1e-9));
}

double DramTiming::peak_bytes_per_s() const {
  return data_rate_mts * 1.0e6 * (bus_width_bits / 8.0) * subchannels;
}

void DramTiming::validate() const {
  require(data_rate_mts > 0, "dram.data_rate_mts must be positive");
  require(subchannels >= 1, "dram.subchannels must be >= 1");
  require(ranks_per_subchannel >= 1, "dram.ranks_per_subchannel must be >= 1");
  require(banks_per_rank >= 1, "dram.banks_per_rank must be >= 1");
  require(burst_length >= 1, "dram.burst_length must be >= 1");
  require(bus_width_bits >= 8 && bus_width_bits % 8 == 0, "dram.bus_width_bits must be a multiple of 8");
  require(burst_length * bus_width_bits / 8 == kLineBytes,
          "dram.burst_length x dram.bus_width_bits must move exactly one 64-byte line");
  require(refresh_interval_ns == 0 || refresh_interval_ns > refresh_cycle_ns,
          "dram.refresh_interval_ns must exceed dram.refresh_cycle_ns");
  require(row_bytes >= kLineBytes && is_pow2(row_bytes), "dram.row_bytes must be a power of two >= 64");
  for (double v : {t_rcd_ns, t_cl_ns, t_rp_ns, t_ras_ns, read_write_turnaround_ns,
                   write_read_turnaround_ns, controller_pipeline_ns, t_wr_ns, t_ccd_ns, t_rrd_ns,
                   t_faw_ns, fixed_service_ns, refresh_interval_ns, refresh_cycle_ns}) {
    require(v >= 0 && std::isfinite(v), "dram timing values must be finite and >= 0");
  }
}

void ControllerConfig::validate() const {
  require(read_queue_capacity >= 1, "controller.read_queue_capacity must be >= 1");
  require(write_queue_capacity >= 1, "controller.write_queue_capacity must be >= 1");
  require(write_low_watermark < write_high_watermark,
          "controller.write_low_watermark must be below write_high_watermark");
  require(write_high_watermark <= write_queue_capacity,
          "controller.write_high_watermark must not exceed write_queue_capacity");
}

std::string_view to_string(PagePolicy p) {
  switch (p) {
    case PagePolicy::kOpen: return "open";
    case PagePolicy::kOpenAdaptive: return "open-adaptive";
    case PagePolicy::kClosed: return "closed";
  }
  return "?";
}

std::string_view to_string(SchedulerPolicy p) {
  return p == SchedulerPolicy::kFrFcfs ? "fr-fcfs" : "fcfs";
}

std::optional<PagePolicy> parse_page_policy(std::string_view s) {
  if (s == "open") return PagePolicy::kOpen;
  if (s == "open-adaptive") return PagePolicy::kOpenAdaptive;
  if (s == "closed") return PagePolicy::kClosed;
  return std::nullopt;
}

std::optional<SchedulerPolicy> parse_scheduler_policy(std::string_view s) {
  if (s == "fr-fcfs") return SchedulerPolicy::kFrFcfs;
  if (s == "fcfs") return SchedulerPolicy::kFcfs;
  return std::nullopt;
}

DramCoordinates decode_line(std::uint64_t local_line, const DramTiming& timing) {
  DramCoordinates c;
  std::uint64_t v = local_line;
  c.subchannel = static_cast<std::uint32_t>(v % timing.subchannels);
  v /= timing.subchannels;
  c.bank = static_cast<std::uint32_t>(v % timing.banks_per_rank);
  v /= timing.banks_per_rank;
  const auto rank = static_cast<std::uint32_t>(v % timing.ranks_per_subchannel);
  v /= timing.ranks_per_subchannel;
  c.bank += rank * timing.banks_per_rank;
  c.column = static_cast<std::uint32_t>(v % timing.lines_per_row());
  c.row = v / timing.lines_per_row();
  return c;
}

Tick service_time(RowOutcome outcome, const DramTiming& timing) {
  if (timing.fixed_service_ns > 0) return ns_to_ticks(timing.fixed_service_ns);
  const Tick core = ns_to_ticks(timing.t_cl_ns) + timing.t_burst();
  Tick t = ns_to_ticks(timing.controller_pipeline_ns) + core;
  switch (outcome) {
    case RowOutcome::kHit: break;
    case RowOutcome::kNone:
    case RowOutcome::kClosed: t += ns_to_ticks(timing.t_rcd_ns); break;
    case RowOutcome::kConflict: t += ns_to_ticks(timing.t_rp_ns) + ns_to_ticks(timing.t_rcd_ns); break;
  }
  return t;
}

Channel::Channel(std::uint32_t index, DramConfig config) : index_(index), config_(config) {
  config_.timing.validate();
  config_.controller.validate();
  const DramTiming& t = config_.timing;
  tk_ = Ticks{ns_to_ticks(t.t_rcd_ns),
              ns_to_ticks(t.t_cl_ns),
              ns_to_ticks(t.t_rp_ns),
              ns_to_ticks(t.t_ras_ns),
              t.t_burst(),
              ns_to_ticks(t.read_write_turnaround_ns),
              ns_to_ticks(t.write_read_turnaround_ns),
              ns_to_ticks(t.controller_pipeline_ns),
              ns_to_ticks(t.t_wr_ns),
              ns_to_ticks(t.t_ccd_ns),
              ns_to_ticks(t.t_rrd_ns),
              ns_to_ticks(t.t_faw_ns),
              ns_to_ticks(t.fixed_service_ns),
              ns_to_ticks(t.refresh_interval_ns),
              ns_to_ticks(t.refresh_cycle_ns)};
  banks_.resize(static_cast<std::size_t>(t.subchannels) * t.banks_per_subchannel());
  subs_.resize(t.subchannels);
}

void Channel::enqueue(MemoryRequest& request, std::uint64_t local_line, Tick now) {
  request.t.mc_enqueue = now;
  Entry e{&request, decode_line(local_line, config_.timing), 0};
  (request.is_read() ? reads_ : writes_).push_back(e);
}

std::uint64_t Channel::refresh_epoch(std::uint32_t subchannel, Tick t) const {
  if (tk_.refi == 0) return 0;
  // Subchannels are staggered so they never refresh together.
  const Tick first = tk_.refi + tk_.refi * subchannel / subs_.size();
  return t < first ? 0 : (t - first) / tk_.refi + 1;
}

Tick Channel::avoid_refresh(std::uint32_t subchannel, Tick d, Tick first, Tick last) const {
  if (tk_.refi == 0) return d;
  for (;;) {
    const std::uint64_t k = refresh_epoch(subchannel, d + last - 1);
    if (k == 0) return d;
    const Tick start = tk_.refi + tk_.refi * subchannel / subs_.size() + (k - 1) * tk_.refi;
    if (start + tk_.rfc <= d + first) return d;
    d = start + tk_.rfc - first;
  }
}

Channel::Plan Channel::plan(const Entry& e, Tick now) const {
  const Plan p = plan(e, now, false);
  const BankState& bank = bank_of(e.at);
  if (tk_.refi == 0 || tk_.fixed > 0 || !bank.open_row) return p;
  const Tick first = p.outcome == RowOutcome::kConflict ? p.pre_rel : (p.needs_act ? p.act_rel : p.cas_rel);
  if (refresh_epoch(e.at.subchannel, p.earliest + first) == bank.refresh_epoch) return p;
  return plan(e, now, true);
}

Channel::Plan Channel::plan(const Entry& e, Tick now, bool row_lost) const {
  Plan p;
  const BankState& bank = bank_of(e.at);

  if (tk_.fixed > 0) {
    p.service = tk_.fixed;
    p.earliest = std::max(now, bank.busy_until);
    return p;
  }

  if (!row_lost && bank.open_row && *bank.open_row == e.at.row) {
    p.outcome = RowOutcome::kHit;
    p.cas_rel = tk_.pipe;
  } else if (row_lost || !bank.open_row) {
    p.outcome = RowOutcome::kClosed;
    p.act_rel = tk_.pipe;
    p.cas_rel = p.act_rel + tk_.rcd;
    p.needs_act = true;
  } else {
    p.outcome = RowOutcome::kConflict;
    p.pre_rel = tk_.pipe;
    p.act_rel = p.pre_rel + tk_.rp;
    p.cas_rel = p.act_rel + tk_.rcd;
    p.needs_act = true;
  }
  p.data_rel = p.cas_rel + tk_.cl;
  p.service = p.data_rel + tk_.burst;

  // Each constraint "command at d + rel must not precede abs" bounds d.
  Tick lb = now;
  auto need = [&lb](Tick abs, Tick rel) {
    if (abs != kNever && abs > rel) lb = std::max(lb, abs - rel);
  };

  switch (p.outcome) {
    case RowOutcome::kHit: need(bank.next_cas, p.cas_rel); break;
    case RowOutcome::kClosed:
      need(bank.next_act, p.act_rel);
      if (row_lost) need(bank.next_pre + tk_.rp, p.act_rel);
      break;
    case RowOutcome::kConflict: need(bank.next_pre, p.pre_rel); break;
    case RowOutcome::kNone: break;
  }

  const SubchannelState& sc = subs_[e.at.subchannel];
  if (p.needs_act) {
    if (sc.last_act != kNever) need(sc.last_act + tk_.rrd, p.act_rel);
    if (sc.recent_acts[0] != kNever) need(sc.recent_acts[0] + tk_.faw, p.act_rel);
  }
  need(sc.bus_free, p.data_rel);
  if (e.request->is_read()) {
    if (sc.last_write_data_end != kNever) need(sc.last_write_data_end + tk_.wtr, p.cas_rel);
  } else {
    if (sc.last_read_data_end != kNever) need(sc.last_read_data_end + tk_.rtw, p.data_rel);
  }
  const Tick first = p.outcome == RowOutcome::kConflict ? p.pre_rel : (p.needs_act ? p.act_rel : p.cas_rel);
  p.earliest = avoid_refresh(e.at.subchannel, lb, first, p.service);
  return p;
}

bool Channel::row_wanted_elsewhere(const Entry& e) const {
  auto same_row = [&e](const Entry& o) {
    return o.request != e.request && o.at.subchannel == e.at.subchannel && o.at.bank == e.at.bank &&
           o.at.row == e.at.row;
  };
  const std::size_t nr = visible(reads_, config_.controller.read_queue_capacity);
  for (std::size_t i = 0; i < nr; ++i) {
    if (same_row(reads_[i])) return true;
  }
  const std::size_t nw = visible(writes_, config_.controller.write_queue_capacity);
  for (std::size_t i = 0; i < nw; ++i) {
    if (same_row(writes_[i])) return true;
  }
  return false;
}

void Channel::issue(std::deque<Entry>& queue, std::size_t pos, const Plan& p, Tick now,
                    DispatchResult& out) {
  Entry e = queue[pos];
  queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(pos));
  MemoryRequest& r = *e.request;
  BankState& bank = bank_of(e.at);

  r.t.dispatch = now;
  r.row = p.outcome;
  const Tick done = now + p.service;
  bank.last_op = r.kind;
  bank.used = true;

  if (tk_.fixed > 0) {
    bank.busy_until = std::max(bank.busy_until, done);
    out.issued.push_back(Issue{&r, done});
    return;
  }

  SubchannelState& sc = subs_[e.at.subchannel];
  if (p.needs_act) {
    const Tick act = now + p.act_rel;
    bank.last_act = act;
    sc.last_act = (sc.last_act == kNever) ? act : std::max(sc.last_act, act);
    // recent_acts holds the four latest activates, oldest first.
    for (std::size_t i = 0; i + 1 < sc.recent_acts.size(); ++i) sc.recent_acts[i] = sc.recent_acts[i + 1];
    sc.recent_acts.back() = act;
  }
  const Tick cas = now + p.cas_rel;
  const Tick data_end = now + p.service;
  sc.bus_free = data_end;
  if (r.is_read()) {
    sc.last_read_data_end = data_end;
  } else {
    sc.last_write_data_end = data_end;
  }

  const Tick pre_ready = std::max(bank.last_act + tk_.ras, r.is_read() ? data_end : data_end + tk_.wr);
  bool keep_open = false;
  switch (config_.controller.page_policy) {
    case PagePolicy::kOpen: keep_open = true; break;
    case PagePolicy::kClosed: keep_open = false; break;
    case PagePolicy::kOpenAdaptive: keep_open = row_wanted_elsewhere(e); break;
  }
  if (keep_open) {
    bank.open_row = e.at.row;
    bank.refresh_epoch = refresh_epoch(e.at.subchannel, cas);
    bank.next_cas = cas + tk_.ccd;
    bank.next_pre = pre_ready;
    bank.busy_until = std::max(bank.busy_until, bank.next_cas);
  } else {
    bank.open_row.reset();
    bank.next_act = pre_ready + tk_.rp;
    bank.busy_until = std::max(bank.busy_until, bank.next_act);
  }
  out.issued.push_back(Issue{&r, done});
}

Channel::DispatchResult Channel::dispatch(Tick now, std::uint32_t read_budget) {
  DispatchResult out;
  const ControllerConfig& cc = config_.controller;

  for (;;) {
    const std::size_t nw = visible(writes_, cc.write_queue_capacity);
    if (!drain_ && nw >= cc.write_high_watermark) drain_ = true;
    if (drain_ && nw <= cc.write_low_watermark) drain_ = false;

    const bool use_writes = drain_ || reads_.empty();
    std::deque<Entry>& queue = use_writes ? writes_ : reads_;
    if (queue.empty()) return out;
    if (!use_writes && read_budget == 0) {
      out.read_blocked_on_budget = true;
      return out;
    }
    const std::size_t n = visible(queue, use_writes ? cc.write_queue_capacity : cc.read_queue_capacity);

    // FCFS looks only at the head. A starved head keeps its bank to itself:
    // younger requests to other banks may still go around it.
    const bool fcfs = cc.scheduler == SchedulerPolicy::kFcfs;
    const bool starved = !fcfs && queue.front().bypassed >= cc.starvation_cap;
    const std::size_t considered = fcfs ? 1 : n;
    const DramCoordinates head = queue.front().at;

    std::size_t best = considered;
    Plan best_plan;
    bool best_hit = false;
    Tick wake = kNever;
    for (std::size_t i = 0; i < considered; ++i) {
      if (starved && i > 0 && queue[i].at.subchannel == head.subchannel && queue[i].at.bank == head.bank) continue;
      const Plan p = plan(queue[i], now);
      if (p.earliest > now) {
        wake = std::min(wake, p.earliest);
        continue;
      }
      const bool hit = p.outcome == RowOutcome::kHit;
      if (best == considered || (hit && !best_hit)) {
        best = i;
        best_plan = p;
        best_hit = hit;
        if (hit) break;  // oldest ready row hit
      }
    }

    if (best == considered) {
      out.next_wakeup = std::min(out.next_wakeup, wake);
      return out;
    }
    for (std::size_t i = 0; i < best; ++i) ++queue[i].bypassed;
    const bool was_read = !use_writes;
    issue(queue, best, best_plan, now, out);
    if (was_read) --read_budget;
  }
}

}  // namespace coaxsim
