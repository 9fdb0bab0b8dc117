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

#include <cmath>
#include <cstdint>
#include <limits>

namespace coaxsim {

/// Simulation time in integer picoseconds.
using Tick = std::uint64_t;

inline constexpr Tick kNever = std::numeric_limits<Tick>::max();
inline constexpr Tick kPsPerNs = 1000;

/// Converts a nanosecond value to picoseconds. Values with at most three
/// decimals convert exactly.
inline Tick ns_to_ticks(double ns) {
  return static_cast<Tick>(std::llround(ns * static_cast<double>(kPsPerNs)));
}

inline constexpr double ticks_to_ns(Tick t) {
  return static_cast<double>(t) / static_cast<double>(kPsPerNs);
}

/// ceil(num / den) for the byte/bandwidth conversions that must never
/// under-report occupancy.
inline constexpr std::uint64_t ceil_div(std::uint64_t num, std::uint64_t den) {
  return (num + den - 1) / den;
}

}  // namespace coaxsim
