// Copyright 2026 The chainauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINAUCTION_RANDOM_HPP_
#define CHAINAUCTION_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>

#include "chainauction/rational.hpp"

namespace chainauction {

// SplitMix64 (Steele, Lea & Flood's mixing constants). Chosen because it is
// tiny, bit-stable across platforms (unlike std:: distributions), and cheap
// to split into independent substreams: every (seed, run, slot) tuple gets
// its own stream via key folding, so experiments are reproducible and
// common-random-number comparisons across rules reuse identical draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n), n >= 1, via rejection (no modulo bias).
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw BadParameter("bounded(0) is undefined");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % n;
  }

  // Bernoulli draw with exact rational success probability p in [0, 1]:
  // returns 1 with probability p.num/p.den.
  int bernoulli(const Rat& p) {
    if (p.is_negative() || p > Rat(1)) {
      throw BadParameter("Bernoulli probability outside [0, 1]");
    }
    return bounded(static_cast<std::uint64_t>(p.den())) <
                   static_cast<std::uint64_t>(p.num())
               ? 1
               : 0;
  }

 private:
  std::uint64_t state_;
};

// Derives an independent substream from a master seed and a list of tags
// (run index, agent slot, purpose code, ...). Each tag is folded through
// one SplitMix64 step so that distinct tuples give unrelated streams.
inline SplitMix64 substream(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = seed;
  for (std::uint64_t t : tags) {
    SplitMix64 fold(h ^ (t + 0x632BE59BD9B4E019ULL));
    h = fold.next();
  }
  return SplitMix64(h);
}

}  // namespace chainauction

#endif  // CHAINAUCTION_RANDOM_HPP_
