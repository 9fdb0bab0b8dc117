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
#include <span>
#include <string>
#include <vector>

#include "coaxsim/system.hpp"
#include "coaxsim/tick.hpp"

namespace coaxsim {

/// Fixed-width latency histogram with a single overflow bucket.
struct Histogram {
  double bin_ns = 1.0;
  std::vector<std::uint64_t> bins;
  std::uint64_t overflow = 0;
};

struct StatsSummary {
  std::uint64_t count = 0;
  double mean_ns = 0.0;
  double stdev_ns = 0.0;  // population
  double min_ns = 0.0;
  double p50_ns = 0.0;
  double p90_ns = 0.0;
  double p99_ns = 0.0;
  double max_ns = 0.0;
  Histogram histogram;

  bool empty() const { return count == 0; }
};

/// Nearest-rank percentile (1-based rank ceil(q*n/100)) over sorted data.
/// `sorted` must be non-empty.
Tick nearest_rank(std::span<const Tick> sorted, std::uint32_t percent);

/// Summary of latencies in ticks. An empty input yields a summary with
/// count 0 and zeroed fields. Histogram bins are 1 ns up to `histogram_ns`.
StatsSummary summarize(std::span<const Tick> latencies, std::uint32_t histogram_ns = 4000);

/// End-to-end latency of every completed post-warmup read, in id order.
std::vector<Tick> read_latencies(const SimulationTrace& trace);
/// Same for writes (completion is when the data reaches DRAM).
std::vector<Tick> write_latencies(const SimulationTrace& trace);

/// Mean per-component latency of post-warmup reads.
struct LatencyBreakdown {
  std::uint64_t count = 0;
  double mc_queue_ns = 0.0;
  double dram_service_ns = 0.0;
  double link_port_ns = 0.0;
  double link_wire_queue_ns = 0.0;
  double total_ns = 0.0;

  double share(double component_ns) const { return total_ns > 0 ? component_ns / total_ns : 0.0; }
};

LatencyBreakdown breakdown(const SimulationTrace& trace);

/// Delivered bandwidth over the measurement window as a fraction of peak,
/// per channel and per link direction (busy-time fraction).
struct UtilizationReport {
  Tick window = 0;
  std::vector<double> channel;
  double aggregate = 0.0;
  double read_bytes_per_s = 0.0;   // delivered by DRAM
  double write_bytes_per_s = 0.0;
  std::vector<double> link_rx;
  std::vector<double> link_tx;
};

UtilizationReport utilization(const SimulationTrace& trace);

struct CdfPoint {
  std::uint64_t latency_ns = 0;
  double cumulative_fraction = 0.0;
};

/// Empirical CDF at 1 ns resolution: each latency is rounded up to whole
/// nanoseconds and one point is emitted per distinct value.
std::vector<CdfPoint> latency_cdf(std::span<const Tick> latencies);

/// `latency_ns,cumulative_fraction` CSV text with a column-name row.
std::string cdf_csv(std::span<const Tick> latencies);

/// Writes `latency_ns,cumulative_fraction` rows. Throws std::runtime_error
/// naming the path when the file cannot be written.
void export_cdf(std::span<const Tick> latencies, const std::string& path);

}  // namespace coaxsim
