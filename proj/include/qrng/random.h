// Copyright 2026 The qrngsim Authors
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

#ifndef QRNG_RANDOM_H
#define QRNG_RANDOM_H

#include <array>
#include <cstdint>
#include <vector>

namespace qrng {

/// xoshiro256++ (Blackman and Vigna), seeded through splitmix64 so that any
/// 64-bit seed, including 0, gives a valid non-zero state. Satisfies
/// std::uniform_random_bit_generator.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed = 0);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return ~result_type{0};
    }

    result_type operator()() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    bool operator==(const Rng &) const = default;

   private:
    static constexpr uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<uint64_t, 4> s_;
};

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
/// Fixed here rather than via std::uniform_real_distribution so that streams
/// are bit-identical across standard library implementations.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Seed for replica `index` of a run seeded with `seed` (splitmix64 finalizer
/// applied to seed ^ index).
uint64_t derive_seed(uint64_t seed, uint64_t index);

/// Seed drawn from the operating system, for the CLI's --entropy-seed.
uint64_t entropy_seed();

/// Poisson variate generator for a fixed mean.
///
/// Means below kInversionLimit use exact inversion of the cumulative table
/// (one uniform per draw) accelerated by a guide table. Larger means use the
/// PTRS transformed-rejection method.
class PoissonSampler {
   public:
    static constexpr double kInversionLimit = 64.0;

    explicit PoissonSampler(double mean);

    uint64_t operator()(Rng &rng) const;

    double mean() const {
        return mean_;
    }

   private:
    uint64_t sample_ptrs(Rng &rng) const;

    double mean_;
    std::vector<double> cdf_;
    std::vector<uint32_t> guide_;
    // PTRS constants.
    double slam_ = 0, loglam_ = 0, a_ = 0, b_ = 0, invalpha_ = 0, vr_ = 0;
};

}  // namespace qrng

#endif
