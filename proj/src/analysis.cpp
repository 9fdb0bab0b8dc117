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

#include "coaxsim/analysis.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coaxsim {

Tick nearest_rank(std::span<const Tick> sorted, std::uint32_t percent) {
  const std::uint64_t n = sorted.size();
  std::uint64_t rank = (static_cast<std::uint64_t>(percent) * n + 99) / 100;
  rank = std::clamp<std::uint64_t>(rank, 1, n);
  return sorted[rank - 1];
}

StatsSummary summarize(std::span<const Tick> latencies, std::uint32_t histogram_ns) {
  StatsSummary s;
  s.histogram.bins.assign(histogram_ns, 0);
  if (latencies.empty()) return s;

  std::vector<Tick> sorted(latencies.begin(), latencies.end());
  std::sort(sorted.begin(), sorted.end());
  s.count = sorted.size();

  // Two-pass mean/variance in ps; sums of ~1e6 samples of ~1e6 ps fit easily.
  long double sum = 0;
  for (Tick t : sorted) sum += static_cast<long double>(t);
  const long double mean = sum / static_cast<long double>(s.count);
  long double sq = 0;
  for (Tick t : sorted) {
    const long double d = static_cast<long double>(t) - mean;
    sq += d * d;
  }
  s.mean_ns = static_cast<double>(mean / kPsPerNs);
  s.stdev_ns = static_cast<double>(std::sqrt(sq / static_cast<long double>(s.count)) / kPsPerNs);
  s.min_ns = ticks_to_ns(sorted.front());
  s.max_ns = ticks_to_ns(sorted.back());
  s.p50_ns = ticks_to_ns(nearest_rank(sorted, 50));
  s.p90_ns = ticks_to_ns(nearest_rank(sorted, 90));
  s.p99_ns = ticks_to_ns(nearest_rank(sorted, 99));

  for (Tick t : sorted) {
    const std::uint64_t bin = t / kPsPerNs;
    if (bin < histogram_ns) {
      ++s.histogram.bins[bin];
    } else {
      ++s.histogram.overflow;
    }
  }
  return s;
}

namespace {

std::vector<Tick> latencies_of(const SimulationTrace& trace, AccessKind kind) {
  std::vector<Tick> out;
  for (std::uint64_t i = trace.warmup_requests; i < trace.requests.size(); ++i) {
    const MemoryRequest& r = trace.requests[i];
    if (r.kind == kind && r.completed()) out.push_back(r.t.complete - r.t.inject);
  }
  return out;
}

}  // namespace

std::vector<Tick> read_latencies(const SimulationTrace& trace) { return latencies_of(trace, AccessKind::kRead); }

std::vector<Tick> write_latencies(const SimulationTrace& trace) { return latencies_of(trace, AccessKind::kWrite); }

LatencyBreakdown breakdown(const SimulationTrace& trace) {
  LatencyBreakdown b;
  Tick q = 0, svc = 0, port = 0, wire = 0, total = 0;
  for (std::uint64_t i = trace.warmup_requests; i < trace.requests.size(); ++i) {
    const MemoryRequest& r = trace.requests[i];
    if (!r.is_read() || !r.completed()) continue;
    const RequestBreakdown d = decompose(r);
    q += d.mc_queue;
    svc += d.dram_service;
    port += d.link_port;
    wire += d.link_wire_queue;
    total += d.total;
    ++b.count;
  }
  if (b.count == 0) return b;
  const double n = static_cast<double>(b.count) * kPsPerNs;
  b.mc_queue_ns = static_cast<double>(q) / n;
  b.dram_service_ns = static_cast<double>(svc) / n;
  b.link_port_ns = static_cast<double>(port) / n;
  b.link_wire_queue_ns = static_cast<double>(wire) / n;
  b.total_ns = static_cast<double>(total) / n;
  return b;
}

UtilizationReport utilization(const SimulationTrace& trace) {
  UtilizationReport u;
  const std::size_t channels = trace.channel_peak_bytes_per_s.size();
  u.channel.assign(channels, 0.0);
  u.link_rx.assign(trace.link_count, 0.0);
  u.link_tx.assign(trace.link_count, 0.0);
  if (trace.measure_end <= trace.measure_begin) return u;
  u.window = trace.measure_end - trace.measure_begin;

  const auto in_window = [&](Tick t) { return t != kNever && t >= trace.measure_begin && t < trace.measure_end; };
  std::vector<std::uint64_t> bytes(channels, 0);
  std::uint64_t read_bytes = 0, write_bytes = 0;
  std::vector<Tick> rx(trace.link_count, 0), tx(trace.link_count, 0);
  for (const MemoryRequest& r : trace.requests) {
    if (in_window(r.t.dram_done)) {
      bytes[r.channel] += r.size;
      (r.is_read() ? read_bytes : write_bytes) += r.size;
    }
    const int link = r.path < trace.path_link.size() ? trace.path_link[r.path] : -1;
    if (link < 0) continue;
    if (in_window(r.t.tx_depart)) tx[static_cast<std::size_t>(link)] += r.t.tx_wire;
    if (in_window(r.t.rx_depart)) rx[static_cast<std::size_t>(link)] += r.t.rx_wire;
  }

  const double seconds = static_cast<double>(u.window) * 1e-12;
  double delivered = 0.0, peak = 0.0;
  for (std::size_t c = 0; c < channels; ++c) {
    u.channel[c] = static_cast<double>(bytes[c]) / seconds / trace.channel_peak_bytes_per_s[c];
    delivered += static_cast<double>(bytes[c]);
    peak += trace.channel_peak_bytes_per_s[c];
  }
  u.aggregate = delivered / seconds / peak;
  u.read_bytes_per_s = static_cast<double>(read_bytes) / seconds;
  u.write_bytes_per_s = static_cast<double>(write_bytes) / seconds;
  for (std::uint32_t l = 0; l < trace.link_count; ++l) {
    u.link_rx[l] = std::min(1.0, static_cast<double>(rx[l]) / static_cast<double>(u.window));
    u.link_tx[l] = std::min(1.0, static_cast<double>(tx[l]) / static_cast<double>(u.window));
  }
  return u;
}

std::vector<CdfPoint> latency_cdf(std::span<const Tick> latencies) {
  std::vector<std::uint64_t> ns;
  ns.reserve(latencies.size());
  for (Tick t : latencies) ns.push_back(ceil_div(t, kPsPerNs));
  std::sort(ns.begin(), ns.end());

  std::vector<CdfPoint> out;
  const double n = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i + 1 < ns.size() && ns[i + 1] == ns[i]) continue;
    out.push_back({ns[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

std::string cdf_csv(std::span<const Tick> latencies) {
  std::ostringstream out;
  out.precision(17);
  out << "latency_ns,cumulative_fraction\n";
  for (const CdfPoint& p : latency_cdf(latencies)) out << p.latency_ns << ',' << p.cumulative_fraction << '\n';
  return out.str();
}

void export_cdf(std::span<const Tick> latencies, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CDF to " + path + ": " + std::strerror(errno));
  out << cdf_csv(latencies);
  out.flush();
  if (!out) throw std::runtime_error("error while writing CDF to " + path);
}

}  // namespace coaxsim
