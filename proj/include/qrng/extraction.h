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

#ifndef QRNG_EXTRACTION_H
#define QRNG_EXTRACTION_H

#include <cstdint>

#include "qrng/bitstream.h"

namespace qrng {

struct BiasReport {
    double p0;
    double p1;
    double bias;  // p0 - 1/2
};

BiasReport measure_bias(const BitStream &stream);

constexpr uint64_t kDefaultDecimation = 7;
constexpr uint32_t kDefaultPeresDepth = 32;

/// Keeps bits 0, factor, 2 factor, ...
BitStream decimate(const BitStream &stream, uint64_t factor = kDefaultDecimation);

/// Non-overlapping pairs: 01 -> 0, 10 -> 1, 00 and 11 dropped, odd tail dropped.
BitStream von_neumann(const BitStream &stream);

/// Peres' iterated von Neumann extractor:
///   peres(x, d) = vn(x) ++ peres(u, d - 1) ++ peres(v, d - 1)
/// where u holds the XOR of every pair and v the first bit of every
/// concordant pair. Depth 1 is plain von Neumann.
BitStream peres(const BitStream &stream, uint32_t max_depth = kDefaultPeresDepth);

}  // namespace qrng

#endif
