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

#include "qrng/extraction.h"

#include "qrng/errors.h"

using namespace qrng;

namespace {

void peres_into(const BitStream &x, uint32_t depth, BitStream &out) {
    if (depth == 0 || x.size() < 2) {
        return;
    }
    size_t pairs = x.size() / 2;
    BitStream xors;
    BitStream firsts;
    xors.reserve(pairs);
    for (size_t i = 0; i < pairs; i++) {
        bool a = x[2 * i];
        bool b = x[2 * i + 1];
        if (a != b) {
            out.push_back(a);
        } else {
            firsts.push_back(a);
        }
        xors.push_back(a != b);
    }
    peres_into(xors, depth - 1, out);
    peres_into(firsts, depth - 1, out);
}

}  // namespace

BiasReport qrng::measure_bias(const BitStream &stream) {
    if (stream.empty()) {
        throw DomainError("Cannot measure the bias of an empty stream");
    }
    double n = static_cast<double>(stream.size());
    double p1 = static_cast<double>(stream.count_ones()) / n;
    double p0 = static_cast<double>(stream.size() - stream.count_ones()) / n;
    return BiasReport{p0, p1, p0 - 0.5};
}

BitStream qrng::decimate(const BitStream &stream, uint64_t factor) {
    if (factor < 1) {
        throw DomainError("Decimation factor must be >= 1");
    }
    if (factor == 1) {
        return stream;
    }
    BitStream out;
    out.reserve(stream.size() / factor + 1);
    for (size_t i = 0; i < stream.size(); i += factor) {
        out.push_back(stream[i]);
    }
    return out;
}

BitStream qrng::von_neumann(const BitStream &stream) {
    BitStream out;
    out.reserve(stream.size() / 4);
    for (size_t i = 0; i + 1 < stream.size(); i += 2) {
        bool a = stream[i];
        if (a != stream[i + 1]) {
            out.push_back(a);
        }
    }
    return out;
}

BitStream qrng::peres(const BitStream &stream, uint32_t max_depth) {
    if (max_depth < 1) {
        throw DomainError("Peres depth must be >= 1");
    }
    BitStream out;
    peres_into(stream, max_depth, out);
    return out;
}
