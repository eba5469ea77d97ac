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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tablefew/lexicon.h"
#include "tablefew/model.h"

namespace tablefew {

enum class TokenClass { kWord, kNumeral, kProperNoun, kSymbol, kPunctuation, kOther };

std::string_view TokenClassName(TokenClass cls);

// Assigns one coarse part-of-speech class per token. Implementations must be
// total and deterministic.
class TokenClassifier {
 public:
  virtual ~TokenClassifier() = default;
  virtual TokenClass Classify(std::string_view token) const = 0;
};

// Character-class rules, evaluated in order:
//   PUNCTUATION  every character is punctuation
//   SYMBOL       every character is a symbol (currency, math, #, %, @, ...)
//   NUMERAL      ignoring punctuation and symbols, at least one digit and
//                digits make up >= 50% of what remains
//   OTHER        letters make up < 50% of the token
//   PROPER_NOUN  starts uppercase and, lowercased with edge punctuation
//                removed, is not in the common-word lexicon
//   WORD         otherwise
class HeuristicTokenClassifier final : public TokenClassifier {
 public:
  explicit HeuristicTokenClassifier(const Lexicon& common_words = CommonWords())
      : common_words_(&common_words) {}

  // Throws std::invalid_argument for an empty token.
  TokenClass Classify(std::string_view token) const override;

 private:
  const Lexicon* common_words_;
};

// Classifies with the default heuristic classifier and bundled lexicon.
TokenClass ClassifyToken(std::string_view token);

struct TableFilterConfig {
  std::size_t min_unique_columns = 2;
  std::size_t min_unique_rows = 6;
  double max_junk_fraction = 0.20;
  double english_min_charset_fraction = 0.70;
  double english_min_stopword_rate = 0.05;

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

// Stage names charged by FilterTable, in cascade order.
inline constexpr std::string_view kStageMinRows = "min-rows";
inline constexpr std::string_view kStageNonEnglish = "non-english";
inline constexpr std::string_view kStageJunkTokens = "junk-tokens";

// Removes duplicate rows, then duplicate columns (header plus cells), keeping
// first occurrences in order.
RawTable DedupTable(const RawTable& table);
RawTable DedupTable(RawTable&& table);

struct DimCheck {
  bool accepted = true;
  // "min-columns" or "min-rows" on rejection.
  std::string_view reason;
};

DimCheck CheckMinDims(const RawTable& table, const TableFilterConfig& cfg);

// Share of non-WORD tokens over all header and cell tokens. Throws
// std::invalid_argument when the table has no tokens.
double JunkTokenFraction(const RawTable& table,
                         const TokenClassifier& classifier);
double JunkTokenFraction(const RawTable& table);

// Character-set and stopword heuristic. Texts under 20 tokens are judged on
// the character set alone; empty text passes.
bool IsEnglishText(std::string_view text, const TableFilterConfig& cfg,
                   const Lexicon& stopwords = Stopwords());

// Incremental form of IsEnglishText over pieces joined by single spaces,
// without materializing the joined text.
class EnglishCheck {
 public:
  explicit EnglishCheck(const Lexicon& stopwords = Stopwords()) : stopwords_(&stopwords) {}
  void Add(std::string_view piece);
  bool Passes(const TableFilterConfig& cfg) const;

 private:
  const Lexicon* stopwords_;
  std::size_t pieces_ = 0;
  std::size_t chars_ = 0;
  std::size_t english_chars_ = 0;
  std::size_t tokens_ = 0;
  std::size_t hits_ = 0;
};

struct TableVerdict {
  // Deduplicated table when accepted.
  std::optional<RawTable> table;
  // Stage charged on rejection; empty when accepted.
  std::string_view stage;
  // Finer reason, e.g. "min-columns" for a column failure charged to
  // "min-rows".
  std::string_view detail;
};

// dedup -> min dims -> English -> junk tokens; first failure wins.
TableVerdict FilterTable(const RawTable& table, const TableFilterConfig& cfg,
                         const TokenClassifier& classifier);
TableVerdict FilterTable(const RawTable& table, const TableFilterConfig& cfg);
TableVerdict FilterTable(RawTable&& table, const TableFilterConfig& cfg,
                         const TokenClassifier& classifier);
TableVerdict FilterTable(RawTable&& table, const TableFilterConfig& cfg);

}  // namespace tablefew
