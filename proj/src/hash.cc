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

#include "tablefew/hash.h"

#include <string>

namespace tablefew {

std::string Hex16(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::uint64_t SeededHash(std::uint64_t seed, std::string_view part) {
  Fnv1a64 h;
  h.UpdateLe64(seed);
  h.Update(std::string_view(&kUnitSeparator, 1));
  h.Update(part);
  return h.digest();
}

std::uint64_t SeededHash(std::uint64_t seed, std::string_view part,
                         std::uint64_t index) {
  Fnv1a64 h;
  h.UpdateLe64(seed);
  h.Update(std::string_view(&kUnitSeparator, 1));
  h.Update(part);
  h.Update(std::string_view(&kUnitSeparator, 1));
  h.Update(std::to_string(index));
  return h.digest();
}

}  // namespace tablefew
