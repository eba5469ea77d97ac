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

#include "tablefew/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "tablefew/text.h"

namespace tablefew {

void Lexicon::Insert(std::string word) {
  if (Contains(word)) return;
  if (2 * (words_.size() + 1) > slots_.size()) {
    slots_.assign(std::max<std::size_t>(16, 2 * slots_.size()), 0);
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::size_t i = HashOf(words_[w], false) & mask;
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = static_cast<std::uint32_t>(w + 1);
    }
  }
  max_length_ = std::max(max_length_, word.size());
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = HashOf(word, false) & mask;
  while (slots_[i] != 0) i = (i + 1) & mask;
  words_.push_back(std::move(word));
  slots_[i] = static_cast<std::uint32_t>(words_.size());
}

Lexicon Lexicon::FromText(std::string_view text) {
  Lexicon lex;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = NormalizeWhitespace(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') {
      lex.Insert(std::move(line));
    }
    pos = end + 1;
  }
  return lex;
}

Lexicon Lexicon::FromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromText(buf.str());
}

const Lexicon& CommonWords() {
  static const Lexicon lex = Lexicon::FromText(CommonWordsText());
  return lex;
}

const Lexicon& Stopwords() {
  static const Lexicon lex = Lexicon::FromText(StopwordsText());
  return lex;
}

}  // namespace tablefew
