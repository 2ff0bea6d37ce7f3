// Copyright (c) 2026 The bell-lab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace bell {

/// One SplitMix64 step from an explicit state word.
inline constexpr std::uint64_t splitmix64_step(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless 64-bit hash (a single SplitMix64 step of x).
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  return splitmix64_step(x);
}

inline constexpr double to_unit_interval(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;  // [0, 1)
}

/// Counter-based random stream for one (seed, sample index) pair.  Every
/// sample owns its own stream, so chunked or threaded integration loops
/// consume exactly the same variates as a serial one.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t sample_index) noexcept
      : state_(mix64(mix64(seed) ^ mix64(sample_index ^ 0x6a09e667f3bcc909ULL))) {}

  std::uint64_t next_u64() noexcept { return splitmix64_step(state_); }
  double next_unit() noexcept { return to_unit_interval(next_u64()); }

 private:
  std::uint64_t state_;
};

}  // namespace bell
