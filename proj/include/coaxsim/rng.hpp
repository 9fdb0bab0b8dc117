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
#include <random>
#include <string_view>

namespace coaxsim {

/// Seeded generator with independent streams.
///
/// Draws come straight from std::mt19937_64, whose output sequence is fixed
/// by the standard. The std:: distributions are implementation-defined, so
/// the conversions to uniform/exponential/Bernoulli draws live here.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64 seeded via std::seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}";

  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be non-zero.
  std::uint64_t below(std::uint64_t bound);

  double exponential(double mean);

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Well-known stream ids so that adding a consumer never perturbs another.
namespace streams {
inline constexpr std::uint64_t kTraffic = 1;
inline constexpr std::uint64_t kSynthetic = 2;
inline constexpr std::uint64_t kCoreBase = 0x100;
}  // namespace streams

}  // namespace coaxsim
