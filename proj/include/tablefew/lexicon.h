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
#include <vector>

namespace tablefew {

// A set of lowercase tokens loaded from a one-token-per-line file. Lines
// starting with '#' and blank lines are ignored.
class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon FromText(std::string_view text);
  static Lexicon FromFile(const std::string& path);

  bool Contains(std::string_view token) const { return Find(token, false); }
  // Like Contains, with ASCII letters in `token` lowercased first.
  bool ContainsFolded(std::string_view token) const { return Find(token, true); }
  std::size_t size() const { return words_.size(); }
  // Length in bytes of the longest entry.
  std::size_t max_length() const { return max_length_; }

 private:
  static unsigned char Fold(unsigned char c) {
    return c >= 'A' && c <= 'Z' ? static_cast<unsigned char>(c - 'A' + 'a') : c;
  }
  static std::size_t HashOf(std::string_view s, bool fold) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) h = (h ^ (fold ? Fold(c) : c)) * 0x100000001b3ull;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
  bool Find(std::string_view token, bool fold) const {
    if (token.size() > max_length_ || slots_.empty()) return false;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = HashOf(token, fold) & mask;; i = (i + 1) & mask) {
      if (slots_[i] == 0) return false;
      const std::string& word = words_[slots_[i] - 1];
      if (word.size() != token.size()) continue;
      bool same = true;
      for (std::size_t k = 0; same && k < word.size(); ++k) {
        const auto c = static_cast<unsigned char>(token[k]);
        same = static_cast<unsigned char>(word[k]) == (fold ? Fold(c) : c);
      }
      if (same) return true;
    }
  }
  void Insert(std::string word);

  std::vector<std::string> words_;
  // Open addressing over words_; 0 marks an empty slot, otherwise index + 1.
  std::vector<std::uint32_t> slots_;
  std::size_t max_length_ = 0;
};

// Bundled lexicons, compiled in from data/.
std::string_view CommonWordsText();
std::string_view StopwordsText();
const Lexicon& CommonWords();
const Lexicon& Stopwords();

}  // namespace tablefew
