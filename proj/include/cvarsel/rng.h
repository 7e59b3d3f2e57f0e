// Copyright 2026 The Authors.
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

// Counter-based random streams.
//
// Every random draw in the library comes from a CounterStream: a SplitMix64
// counter generator whose starting key is derived from (seed, domain tag,
// coordinates...). Draw n of a stream is mix64(key + (n + 1) * kGolden), so
// any scenario/element sample can be recomputed in isolation, in any order,
// on any thread, and adding elements never perturbs the samples of others.

#ifndef CVARSEL_RNG_H_
#define CVARSEL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cvarsel {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Domain tags keep streams for different purposes disjoint.
enum class StreamDomain : std::uint64_t {
  kModPositions = 1,
  kModEfficiency = 2,
  kCoverageCandidates = 3,
  kCoverageAlive = 4,
  kCityLayout = 5,
  kNodeWait = 6,
  kPathSamples = 7,
  kTestData = 8,
  kOtaPlacement = 9,
};

class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, StreamDomain domain,
                std::initializer_list<std::uint64_t> coords = {})
      : key_(mix64(seed ^ mix64(static_cast<std::uint64_t>(domain) * kGolden))) {
    for (std::uint64_t c : coords) key_ = mix64(key_ ^ mix64(c + kGolden));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1); safe as an inverse-CDF argument.
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % n;
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cvarsel

#endif  // CVARSEL_RNG_H_
