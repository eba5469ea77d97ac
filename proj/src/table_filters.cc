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

#include "tablefew/table_filters.h"

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

#include "tablefew/text.h"

namespace tablefew {

std::string_view TokenClassName(TokenClass cls) {
  switch (cls) {
    case TokenClass::kWord:
      return "WORD";
    case TokenClass::kNumeral:
      return "NUMERAL";
    case TokenClass::kProperNoun:
      return "PROPER_NOUN";
    case TokenClass::kSymbol:
      return "SYMBOL";
    case TokenClass::kPunctuation:
      return "PUNCTUATION";
    case TokenClass::kOther:
      return "OTHER";
  }
  return "?";
}

namespace {

enum class CharKind { kLetter, kDigit, kPunct, kSymbol, kOther };

constexpr bool InRange(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

constexpr CharKind KindOf(char32_t c) {
  if (c < 0x80) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharKind::kLetter;
    if (c >= '0' && c <= '9') return CharKind::kDigit;
    switch (c) {
      case '!': case '"': case '\'': case '(': case ')': case ',': case '-':
      case '.': case '/': case ':': case ';': case '?': case '[': case ']':
      case '{': case '}': case '_':
        return CharKind::kPunct;
      case '#': case '$': case '%': case '&': case '*': case '+': case '<':
      case '=': case '>': case '@': case '\\': case '^': case '`': case '|':
      case '~':
        return CharKind::kSymbol;
      default:
        return CharKind::kOther;
    }
  }
  if (InRange(c, 0x80, 0x9F) || c == 0xFFFD) return CharKind::kOther;
  if (c == 0xA1 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB ||
      c == 0xBF || InRange(c, 0x2010, 0x2027) || InRange(c, 0x2030, 0x205E) ||
      InRange(c, 0x3000, 0x3003) || InRange(c, 0x3008, 0x3011) ||
      InRange(c, 0xFF01, 0xFF0F)) {
    return CharKind::kPunct;
  }
  if (InRange(c, 0xA2, 0xA9) || c == 0xAC || InRange(c, 0xAE, 0xB1) ||
      c == 0xB4 || c == 0xD7 || c == 0xF7 || InRange(c, 0x20A0, 0x20CF) ||
      InRange(c, 0x2100, 0x214F) || InRange(c, 0x2190, 0x23FF) ||
      InRange(c, 0x25A0, 0x27BF) || InRange(c, 0x2900, 0x2BFF) ||
      InRange(c, 0x1F300, 0x1FAFF)) {
    return CharKind::kSymbol;
  }
  if (InRange(c, 0x2070, 0x209F) || InRange(c, 0x2150, 0x218F)) {
    return CharKind::kOther;
  }
  return CharKind::kLetter;
}

constexpr auto kAsciiKinds = [] {
  std::array<CharKind, 128> kinds{};
  for (char32_t c = 0; c < 128; ++c) kinds[c] = KindOf(c);
  return kinds;
}();

bool IsUpper(char32_t c) {
  return (c >= 'A' && c <= 'Z') || (InRange(c, 0xC0, 0xDE) && c != 0xD7) ||
         InRange(c, 0x391, 0x3A9) || InRange(c, 0x410, 0x42F);
}

bool IsAsciiPunctOrSymbol(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && u > 0x20 && u != 0x7F &&
         !((u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') ||
           (u >= '0' && u <= '9'));
}

// Token with leading/trailing ASCII punctuation removed; lexicons are
// queried case-folded with this form.
std::string_view LookupForm(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && IsAsciiPunctOrSymbol(token[b])) ++b;
  while (e > b && IsAsciiPunctOrSymbol(token[e - 1])) --e;
  return token.substr(b, e - b);
}

}  // namespace

TokenClass HeuristicTokenClassifier::Classify(std::string_view token) const {
  if (token.empty()) throw std::invalid_argument("empty token");

  std::size_t total = 0;
  std::array<std::size_t, 5> kinds{};
  char32_t first = 0;
  bool ascii = true;
  for (char c : token) ascii = ascii && static_cast<unsigned char>(c) < 0x80;
  if (ascii) {
    first = static_cast<unsigned char>(token.front());
    total = token.size();
    for (char c : token) ++kinds[static_cast<int>(kAsciiKinds[static_cast<unsigned char>(c)])];
  } else {
    for (char32_t c : DecodeUtf8(token)) {
      if (total++ == 0) first = c;
      ++kinds[static_cast<int>(KindOf(c))];
    }
  }
  const std::size_t letters = kinds[static_cast<int>(CharKind::kLetter)];
  const std::size_t digits = kinds[static_cast<int>(CharKind::kDigit)];
  const std::size_t punct = kinds[static_cast<int>(CharKind::kPunct)];
  const std::size_t symbols = kinds[static_cast<int>(CharKind::kSymbol)];

  if (punct == total) return TokenClass::kPunctuation;
  if (symbols == total) return TokenClass::kSymbol;
  const std::size_t remaining = total - punct - symbols;
  if (digits > 0 && 2 * digits >= remaining) return TokenClass::kNumeral;
  if (2 * letters < total) return TokenClass::kOther;
  if (IsUpper(first) && !common_words_->ContainsFolded(LookupForm(token))) {
    return TokenClass::kProperNoun;
  }
  return TokenClass::kWord;
}

TokenClass ClassifyToken(std::string_view token) {
  static const HeuristicTokenClassifier classifier;
  return classifier.Classify(token);
}

void TableFilterConfig::Validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    }
  };
  if (min_unique_columns < 1) {
    throw std::invalid_argument("min_unique_columns must be >= 1");
  }
  if (min_unique_rows < 1) {
    throw std::invalid_argument("min_unique_rows must be >= 1");
  }
  fraction(max_junk_fraction, "max_junk_fraction");
  fraction(english_min_charset_fraction, "english_min_charset_fraction");
  fraction(english_min_stopword_rate, "english_min_stopword_rate");
}

namespace {

struct DedupPlan {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

DedupPlan PlanDedup(const RawTable& table) {
  DedupPlan plan;
  std::vector<std::size_t> order(table.rows.size());
  for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (table.rows[a] != table.rows[b]) return table.rows[a] < table.rows[b];
    return a < b;
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || table.rows[order[k]] != table.rows[order[k - 1]]) plan.rows.push_back(order[k]);
  }
  std::sort(plan.rows.begin(), plan.rows.end());

  // Columns compare as header followed by the surviving cells.
  auto same_column = [&](std::size_t a, std::size_t b) {
    if (table.header[a] != table.header[b]) return false;
    for (std::size_t r : plan.rows) {
      if (table.rows[r][a] != table.rows[r][b]) return false;
    }
    return true;
  };
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    bool duplicate = false;
    for (std::size_t kept : plan.cols) {
      if (same_column(kept, c)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) plan.cols.push_back(c);
  }
  return plan;
}

template <typename Table>
RawTable ApplyDedup(Table&& table, const DedupPlan& plan) {
  constexpr bool kMove = std::is_rvalue_reference_v<Table&&>;
  auto take = [](auto& s) -> decltype(auto) {
    if constexpr (kMove) {
      return std::move(s);
    } else {
      return static_cast<const std::string&>(s);
    }
  };
  RawTable out;
  out.website = take(table.website);
  out.url = take(table.url);
  out.page_title = take(table.page_title);
  out.table_index = table.table_index;
  out.header.reserve(plan.cols.size());
  for (std::size_t c : plan.cols) out.header.push_back(take(table.header[c]));
  out.rows.reserve(plan.rows.size());
  for (std::size_t r : plan.rows) {
    Row row;
    row.reserve(plan.cols.size());
    for (std::size_t c : plan.cols) row.push_back(take(table.rows[r][c]));
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

RawTable DedupTable(const RawTable& table) { return ApplyDedup(table, PlanDedup(table)); }

RawTable DedupTable(RawTable&& table) {
  const DedupPlan plan = PlanDedup(table);
  return ApplyDedup(std::move(table), plan);
}

DimCheck CheckMinDims(const RawTable& table, const TableFilterConfig& cfg) {
  if (table.column_count() < cfg.min_unique_columns) return {false, "min-columns"};
  if (table.row_count() < cfg.min_unique_rows) return {false, "min-rows"};
  return {};
}

double JunkTokenFraction(const RawTable& table,
                         const TokenClassifier& classifier) {
  std::size_t total = 0;
  std::size_t junk = 0;
  auto count = [&](std::string_view text) {
    ForEachToken(text, [&](std::string_view tok) {
      ++total;
      if (classifier.Classify(tok) != TokenClass::kWord) ++junk;
    });
  };
  for (const auto& h : table.header) count(h);
  for (const Row& row : table.rows) {
    for (const auto& cell : row) count(cell);
  }
  if (total == 0) throw std::invalid_argument("table has no tokens");
  return static_cast<double>(junk) / static_cast<double>(total);
}

double JunkTokenFraction(const RawTable& table) {
  static const HeuristicTokenClassifier classifier;
  return JunkTokenFraction(table, classifier);
}

void EnglishCheck::Add(std::string_view piece) {
  if (pieces_++ > 0) {
    ++chars_;
    ++english_chars_;
  }
  std::size_t i = 0;
  // Eight bytes at a time while they are all printable ASCII.
  constexpr std::uint64_t kOnes = 0x0101010101010101ull;
  constexpr std::uint64_t kHigh = 0x8080808080808080ull;
  for (; i + 8 <= piece.size(); i += 8) {
    std::uint64_t w;
    std::memcpy(&w, piece.data() + i, 8);
    const std::uint64_t below_space = (w - kOnes * 0x20) & ~w;
    const std::uint64_t is_del = ((w ^ (kOnes * 0x7F)) - kOnes) & ~(w ^ (kOnes * 0x7F));
    if (((w | below_space | is_del) & kHigh) != 0) break;
    chars_ += 8;
    english_chars_ += 8;
  }
  for (; i < piece.size(); ++i) {
    const auto c = static_cast<unsigned char>(piece[i]);
    if ((c & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
    ++chars_;
    if (c < 0x80 && (c == ' ' || c == '\t' || c == '\n' || c == '\r' || (c > 0x20 && c < 0x7F))) {
      ++english_chars_;
    }
  }
  ForEachToken(piece, [this](std::string_view tok) {
    ++tokens_;
    if (stopwords_->ContainsFolded(LookupForm(tok))) ++hits_;
  });
}

bool EnglishCheck::Passes(const TableFilterConfig& cfg) const {
  if (chars_ == 0) return true;
  if (static_cast<double>(english_chars_) <
      cfg.english_min_charset_fraction * static_cast<double>(chars_)) {
    return false;
  }
  if (tokens_ < 20) return true;
  return static_cast<double>(hits_) >=
         cfg.english_min_stopword_rate * static_cast<double>(tokens_);
}

bool IsEnglishText(std::string_view text, const TableFilterConfig& cfg,
                   const Lexicon& stopwords) {
  EnglishCheck check(stopwords);
  check.Add(text);
  return check.Passes(cfg);
}


TableVerdict FilterTable(const RawTable& table, const TableFilterConfig& cfg,
                         const TokenClassifier& classifier) {
  return FilterTable(RawTable(table), cfg, classifier);
}

TableVerdict FilterTable(RawTable&& table, const TableFilterConfig& cfg,
                         const TokenClassifier& classifier) {
  RawTable deduped = DedupTable(std::move(table));
  if (DimCheck dims = CheckMinDims(deduped, cfg); !dims.accepted) {
    return {std::nullopt, kStageMinRows, dims.reason};
  }
  EnglishCheck english;
  for (const auto& h : deduped.header) english.Add(h);
  for (const Row& row : deduped.rows) {
    for (const auto& cell : row) english.Add(cell);
  }
  if (!english.Passes(cfg)) {
    return {std::nullopt, kStageNonEnglish, kStageNonEnglish};
  }
  double junk = 1.0;
  try {
    junk = JunkTokenFraction(deduped, classifier);
  } catch (const std::invalid_argument&) {
    // No tokens at all: nothing to learn from.
  }
  if (junk >= cfg.max_junk_fraction) {
    return {std::nullopt, kStageJunkTokens, kStageJunkTokens};
  }
  return {std::move(deduped), {}, {}};
}

const HeuristicTokenClassifier& DefaultClassifier() {
  static const HeuristicTokenClassifier classifier;
  return classifier;
}

TableVerdict FilterTable(const RawTable& table, const TableFilterConfig& cfg) {
  return FilterTable(table, cfg, DefaultClassifier());
}

TableVerdict FilterTable(RawTable&& table, const TableFilterConfig& cfg) {
  return FilterTable(std::move(table), cfg, DefaultClassifier());
}

}  // namespace tablefew
