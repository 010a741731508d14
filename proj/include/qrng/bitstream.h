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

#ifndef QRNG_BITSTREAM_H
#define QRNG_BITSTREAM_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrng {

/// A packed sequence of bits with an exact length.
///
/// Bit i lives in word i / 64 at position i % 64 (least significant first).
/// Bits past size() in the last word are always zero; several algorithms
/// (pair counting, popcount) rely on that.
class BitStream {
   public:
    BitStream() = default;
    explicit BitStream(size_t num_bits);

    /// Parses a string of '0'/'1' characters. Spaces are ignored.
    static BitStream from_string(std::string_view bits);
    /// Wraps pre-packed words. Bits past num_bits are cleared.
    static BitStream from_words(std::vector<uint64_t> words, size_t num_bits);

    size_t size() const {
        return size_;
    }
    bool empty() const {
        return size_ == 0;
    }

    bool operator[](size_t index) const {
        return (words_[index >> 6] >> (index & 63)) & 1;
    }
    void set(size_t index, bool value);

    void push_back(bool bit) {
        if ((size_ & 63) == 0) {
            words_.push_back(0);
        }
        words_.back() |= uint64_t{bit} << (size_ & 63);
        size_++;
    }
    void reserve(size_t num_bits) {
        words_.reserve((num_bits + 63) >> 6);
    }
    void append(const BitStream &other);

    /// The 64 bits starting at `pos`, bit j of the result being bit pos + j.
    /// Positions at or beyond size() read as zero.
    uint64_t window64(size_t pos) const;

    /// Copy of bits [begin, end).
    BitStream slice(size_t begin, size_t end) const;

    size_t count_ones() const;
    size_t count_ones(size_t begin, size_t end) const;

    std::span<const uint64_t> words() const {
        return words_;
    }

    std::string str() const;

    bool operator==(const BitStream &other) const = default;

   private:
    std::vector<uint64_t> words_;
    size_t size_ = 0;
};

}  // namespace qrng

#endif
