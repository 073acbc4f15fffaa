// Copyright 2026 The qem-mix Authors
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

#ifndef QEM_RNG_H
#define QEM_RNG_H

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace qem {

/// One step of the splitmix64 output function (Steele, Lea & Flood 2014).
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Folds `parts` into `seed`. Used to give every experiment cell, shot and
/// subsample its own stream, so adding work never shifts existing streams.
constexpr uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> parts) {
    uint64_t h = splitmix64(seed);
    for (uint64_t p : parts) {
        h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

/// xoshiro256** 1.0 (Blackman & Vigna), state filled by splitmix64.
///
/// The standard library engines are portable but its distributions are not,
/// so every draw used by this project goes through the helpers below, which
/// are fully specified bit manipulations.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    uint64_t operator()() {
        return next();
    }
    uint64_t next();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }
    /// Uniform on {0, ..., bound - 1}; bound must be positive. Lemire's
    /// multiply-shift with rejection, so it is exactly unbiased.
    uint64_t below(uint64_t bound);
    bool bernoulli(double p) {
        return uniform() < p;
    }

   private:
    std::array<uint64_t, 4> state_;
};

/// A seed from the operating system's entropy source.
uint64_t entropy_seed();

}  // namespace qem

#endif
