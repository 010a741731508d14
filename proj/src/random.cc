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

#include "qrng/random.h"

#include <cmath>
#include <random>

#include "qrng/errors.h"

using namespace qrng;

namespace {

constexpr size_t kGuideSize = 4096;

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto &v : s_) {
        v = splitmix64(x);
        x += 0x9E3779B97F4A7C15ULL;
    }
}

uint64_t qrng::derive_seed(uint64_t seed, uint64_t index) {
    return splitmix64(seed ^ index);
}

uint64_t qrng::entropy_seed() {
    std::random_device d;
    return (uint64_t{d()} << 32) ^ uint64_t{d()};
}

PoissonSampler::PoissonSampler(double mean) : mean_(mean) {
    if (!std::isfinite(mean) || mean < 0) {
        throw DomainError("Poisson mean must be finite and non-negative, got " + std::to_string(mean));
    }
    if (mean < kInversionLimit) {
        // Same recurrence as a sequential inversion search, stored.
        double p = std::exp(-mean);
        double f = p;
        cdf_.push_back(f);
        for (uint64_t n = 1;; n++) {
            p *= mean / static_cast<double>(n);
            double next = f + p;
            if (next == f && static_cast<double>(n) > mean) {
                break;
            }
            f = next;
            cdf_.push_back(f);
        }
        guide_.resize(kGuideSize);
        size_t n = 0;
        for (size_t j = 0; j < kGuideSize; j++) {
            double edge = static_cast<double>(j) / kGuideSize;
            while (n + 1 < cdf_.size() && cdf_[n] <= edge) {
                n++;
            }
            guide_[j] = static_cast<uint32_t>(n);
        }
    } else {
        slam_ = std::sqrt(mean);
        loglam_ = std::log(mean);
        b_ = 0.931 + 2.53 * slam_;
        a_ = -0.059 + 0.02483 * b_;
        invalpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
        vr_ = 0.9277 - 3.6224 / (b_ - 2);
    }
}

uint64_t PoissonSampler::operator()(Rng &rng) const {
    if (mean_ == 0) {
        return 0;
    }
    if (cdf_.empty()) {
        return sample_ptrs(rng);
    }
    double u = uniform01(rng);
    size_t n = guide_[static_cast<size_t>(u * kGuideSize)];
    size_t last = cdf_.size() - 1;
    while (n < last && u >= cdf_[n]) {
        n++;
    }
    return n;
}

// Hörmann's PTRS (transformed rejection with squeeze), valid for mean >= 10.
uint64_t PoissonSampler::sample_ptrs(Rng &rng) const {
    while (true) {
        double u = uniform01(rng) - 0.5;
        double v = uniform01(rng);
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2 * a_ / us + b_) * u + mean_ + 0.43);
        if (us >= 0.07 && v <= vr_) {
            return static_cast<uint64_t>(k);
        }
        if (k < 0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(invalpha_) - std::log(a_ / (us * us) + b_) <=
            -mean_ + k * loglam_ - std::lgamma(k + 1)) {
            return static_cast<uint64_t>(k);
        }
    }
}
