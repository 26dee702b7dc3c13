// Copyright 2026 The ubmrps Authors
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

#ifndef UBMRPS_RNG_HPP
#define UBMRPS_RNG_HPP

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace ubmrps {

/// A reproducible stream of standard normal deviates.
///
/// Stream k of seed s is derived from the pair (s, k) alone: the engine state
/// is expanded from the four 32-bit halves of s and k through std::seed_seq,
/// so any trajectory can be regenerated without replaying the others. Normals
/// come from Boost's ziggurat sampler, which does not depend on the standard
/// library implementation.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

/// Stream index reserved for auxiliary draws (test matrices, panels) that must
/// not collide with trajectory streams 0..M-1.
inline constexpr std::uint64_t kAuxiliaryStreamBase = 0xA000'0000'0000'0000ULL;

}  // namespace ubmrps

#endif  // UBMRPS_RNG_HPP
