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

#ifndef QRNG_RAW_IO_H
#define QRNG_RAW_IO_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrng/bitstream.h"

namespace qrng {

/// Headerless packing, 8 bits per byte, first stream bit in the most
/// significant bit of the first byte. The stream length must be a multiple
/// of 8.
std::vector<uint8_t> pack_msb_first(const BitStream &stream);
BitStream unpack_msb_first(std::span<const uint8_t> bytes);

/// Drops trailing bits so the length is a multiple of 8.
BitStream truncate_to_bytes(const BitStream &stream);

/// Writes pack_msb_first(stream) to `path`. Throws IoError on failure.
void export_raw(const BitStream &stream, const std::string &path);
BitStream import_raw(const std::string &path);

}  // namespace qrng

#endif
