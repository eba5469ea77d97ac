// Copyright 2026 The tablefew Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tablefew {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

// Field separator used inside every multi-part hash input (ASCII unit
// separator).
inline constexpr char kUnitSeparator = '\x1F';

// Incremental 64-bit FNV-1a.
class Fnv1a64 {
 public:
  Fnv1a64& Update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kFnvPrime;
    }
    return *this;
  }

  // Feeds the eight little-endian bytes of `value`.
  Fnv1a64& UpdateLe64(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<unsigned char>(value >> (8 * i));
      state_ *= kFnvPrime;
    }
    return *this;
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = kFnvOffsetBasis;
};

inline std::uint64_t Fnv1a(std::string_view bytes) {
  return Fnv1a64().Update(bytes).digest();
}

// Lower-case, zero-padded, 16 characters.
std::string Hex16(std::uint64_t value);

// Hash used for every seeded ranking: FNV-1a over LE64(seed) followed by
// `\x1F part` for each part.
std::uint64_t SeededHash(std::uint64_t seed, std::string_view part);
std::uint64_t SeededHash(std::uint64_t seed, std::string_view part,
                         std::uint64_t index);

}  // namespace tablefew
