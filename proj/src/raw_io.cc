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

#include "qrng/raw_io.h"

#include <array>
#include <fstream>
#include <iterator>

#include "qrng/errors.h"

using namespace qrng;

namespace {

constexpr std::array<uint8_t, 256> make_reverse_table() {
    std::array<uint8_t, 256> t{};
    for (unsigned v = 0; v < 256; v++) {
        unsigned r = 0;
        for (unsigned j = 0; j < 8; j++) {
            r |= ((v >> j) & 1) << (7 - j);
        }
        t[v] = static_cast<uint8_t>(r);
    }
    return t;
}

constexpr auto kReverse = make_reverse_table();

}  // namespace

std::vector<uint8_t> qrng::pack_msb_first(const BitStream &stream) {
    if (stream.size() % 8 != 0) {
        throw DomainError("Raw export needs a bit count that is a multiple of 8 (got " +
                          std::to_string(stream.size()) + "); truncate first");
    }
    std::vector<uint8_t> out(stream.size() / 8);
    auto words = stream.words();
    for (size_t i = 0; i < out.size(); i++) {
        out[i] = kReverse[(words[i >> 3] >> (8 * (i & 7))) & 0xFF];
    }
    return out;
}

BitStream qrng::unpack_msb_first(std::span<const uint8_t> bytes) {
    std::vector<uint64_t> words((bytes.size() + 7) / 8, 0);
    for (size_t i = 0; i < bytes.size(); i++) {
        words[i >> 3] |= uint64_t{kReverse[bytes[i]]} << (8 * (i & 7));
    }
    return BitStream::from_words(std::move(words), bytes.size() * 8);
}

BitStream qrng::truncate_to_bytes(const BitStream &stream) {
    return stream.slice(0, stream.size() - stream.size() % 8);
}

void qrng::export_raw(const BitStream &stream, const std::string &path) {
    auto bytes = pack_msb_first(stream);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("Cannot open '" + path + "' for writing");
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("Failed writing '" + path + "'");
    }
}

BitStream qrng::import_raw(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("Cannot open '" + path + "' for reading");
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("Failed reading '" + path + "'");
    }
    return unpack_msb_first(bytes);
}
