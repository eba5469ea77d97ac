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

#include <string>
#include <string_view>
#include <vector>

namespace tablefew {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD one byte
// at a time, so decoding is total.
std::u32string DecodeUtf8(std::string_view text);

bool IsValidUtf8(std::string_view text);

// Collapses runs of whitespace (ASCII whitespace and U+00A0) to a single
// space and trims both ends.
std::string NormalizeWhitespace(std::string_view text);
void NormalizeWhitespaceInPlace(std::string& text);

// True if the ASCII-whitespace-only check holds.
bool IsBlank(std::string_view text);

inline bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Calls fn(token) for each maximal run of non-whitespace characters.
template <typename Fn>
void ForEachToken(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < n && !IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) fn(text.substr(start, i - start));
  }
}

std::vector<std::string_view> SplitTokens(std::string_view text);

std::string AsciiLower(std::string_view text);

}  // namespace tablefew
