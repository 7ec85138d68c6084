// Copyright 2026 The vecopt Authors
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

#ifndef VECOPT_UNITS_HPP
#define VECOPT_UNITS_HPP

#include <cmath>
#include <cstdint>

namespace vecopt {

// Data rates are exact integers in bits per second so that sums of task rates
// can be used as lookup-table keys.
using BitRate = std::int64_t;

inline constexpr double kSpeedOfLight = 299'792'000.0;  // m/s
// Speed of light in fibre relative to free space.
inline constexpr double kFibreVelocityRatio = 2.0 / 3.0;
inline constexpr std::int64_t kEthernetPacketBits = 1500 * 8;

inline constexpr BitRate kGbps = 1'000'000'000;
inline constexpr BitRate kMbps = 1'000'000;

inline BitRate to_bit_rate(double bits_per_second) {
  return static_cast<BitRate>(std::llround(bits_per_second));
}

inline double to_mbps(BitRate rate) {
  return static_cast<double>(rate) / static_cast<double>(kMbps);
}

inline constexpr double kMicro = 1e-6;

}  // namespace vecopt

#endif  // VECOPT_UNITS_HPP
