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

#include "qrng/bitstream.h"

#include <bit>

#include "qrng/errors.h"

using namespace qrng;

namespace {

uint64_t low_mask(size_t n) {
    return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
}

}  // namespace

BitStream::BitStream(size_t num_bits) : words_((num_bits + 63) >> 6, 0), size_(num_bits) {
}

BitStream BitStream::from_string(std::string_view bits) {
    BitStream result;
    for (char c : bits) {
        if (c == '0' || c == '1') {
            result.push_back(c == '1');
        } else if (c != ' ') {
            throw DomainError(std::string("Not a bit character: '") + c + "'");
        }
    }
    return result;
}

BitStream BitStream::from_words(std::vector<uint64_t> words, size_t num_bits) {
    if (words.size() * 64 < num_bits) {
        throw DomainError("from_words: not enough words for the requested length");
    }
    words.resize((num_bits + 63) >> 6);
    if (num_bits & 63) {
        words.back() &= low_mask(num_bits & 63);
    }
    BitStream result;
    result.words_ = std::move(words);
    result.size_ = num_bits;
    return result;
}

void BitStream::set(size_t index, bool value) {
    uint64_t bit = uint64_t{1} << (index & 63);
    if (value) {
        words_[index >> 6] |= bit;
    } else {
        words_[index >> 6] &= ~bit;
    }
}

void BitStream::append(const BitStream &other) {
    if (other.size_ == 0) {
        return;
    }
    size_t shift = size_ & 63;
    if (shift == 0) {
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    } else {
        for (uint64_t w : other.words_) {
            words_.back() |= w << shift;
            words_.push_back(w >> (64 - shift));
        }
    }
    size_ += other.size_;
    words_.resize((size_ + 63) >> 6);
}

uint64_t BitStream::window64(size_t pos) const {
    size_t q = pos >> 6;
    size_t r = pos & 63;
    if (q >= words_.size()) {
        return 0;
    }
    uint64_t result = words_[q] >> r;
    if (r != 0 && q + 1 < words_.size()) {
        result |= words_[q + 1] << (64 - r);
    }
    return result;
}

BitStream BitStream::slice(size_t begin, size_t end) const {
    if (begin > end || end > size_) {
        throw DomainError("slice: range out of bounds");
    }
    size_t n = end - begin;
    std::vector<uint64_t> out((n + 63) >> 6);
    for (size_t w = 0; w < out.size(); w++) {
        out[w] = window64(begin + 64 * w);
    }
    return from_words(std::move(out), n);
}

size_t BitStream::count_ones() const {
    size_t total = 0;
    for (uint64_t w : words_) {
        total += std::popcount(w);
    }
    return total;
}

size_t BitStream::count_ones(size_t begin, size_t end) const {
    if (begin > end || end > size_) {
        throw DomainError("count_ones: range out of bounds");
    }
    size_t total = 0;
    size_t pos = begin;
    while (end - pos >= 64) {
        total += std::popcount(window64(pos));
        pos += 64;
    }
    total += std::popcount(window64(pos) & low_mask(end - pos));
    return total;
}

std::string BitStream::str() const {
    std::string result;
    result.reserve(size_);
    for (size_t i = 0; i < size_; i++) {
        result.push_back((*this)[i] ? '1' : '0');
    }
    return result;
}
