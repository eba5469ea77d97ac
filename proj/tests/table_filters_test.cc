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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "support/synth_corpus.h"
#include "tablefew/table_filters.h"

namespace tablefew {
namespace {

RawTable MakeTable(std::vector<std::string> header, std::vector<Row> rows) {
  RawTable t;
  t.website = "example.com";
  t.url = "https://example.com/t";
  t.header = std::move(header);
  t.rows = std::move(rows);
  return t;
}

RawTable EnglishTable(std::size_t rows, std::size_t cols) {
  static const char* kWords[] = {"the river", "is a", "book of the", "an open door",
                                 "the red house", "with a garden"};
  std::vector<std::string> header;
  for (std::size_t c = 0; c < cols; ++c) header.push_back("name" + std::string(c, 'x'));
  std::vector<Row> data;
  for (std::size_t r = 0; r < rows; ++r) {
    Row row;
    for (std::size_t c = 0; c < cols; ++c) {
      row.push_back(std::string(kWords[(r + c) % 6]) + " " + std::string(r + 1, 'a'));
    }
    data.push_back(std::move(row));
  }
  return MakeTable(std::move(header), std::move(data));
}

TEST(DedupTest, RowsKeepFirstOccurrenceInOrder) {
  std::vector<Row> rows;
  for (int i = 0; i < 8; ++i) rows.push_back({"r" + std::to_string(i), "x"});
  rows[3] = rows[0];
  rows[7] = rows[0];
  const RawTable d = DedupTable(MakeTable({"a", "b"}, rows));
  ASSERT_EQ(d.rows.size(), 6u);
  const std::vector<std::string> firsts = {"r0", "r1", "r2", "r4", "r5", "r6"};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(d.rows[i][0], firsts[i]);
}

TEST(DedupTest, DuplicateColumnsCollapse) {
  const RawTable d = DedupTable(MakeTable({"Price", "Item", "Price"},
                                          {{"1", "a", "1"}, {"2", "b", "2"}}));
  EXPECT_EQ(d.header, (std::vector<std::string>{"Price", "Item"}));
  EXPECT_EQ(d.rows[1], (Row{"2", "b"}));
  const RawTable same_cells = DedupTable(MakeTable({"A", "B"}, {{"1", "1"}}));
  EXPECT_EQ(same_cells.header.size(), 2u);
}

TEST(DedupTest, SameHeaderDifferentCellsKept) {
  const RawTable t = MakeTable({"A", "A"}, {{"1", "1"}, {"2", "3"}, {"1", "1"}});
  EXPECT_EQ(DedupTable(t).header.size(), 2u);
}

TEST(DedupTest, UniqueTableUnchangedAndIdempotent) {
  const RawTable t = EnglishTable(7, 3);
  EXPECT_EQ(DedupTable(t), t);
  testing::Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const RawTable r = testing::RandomTable(rng);
    const RawTable once = DedupTable(r);
    ASSERT_EQ(DedupTable(once), once);
    RawTable moved = r;
    ASSERT_EQ(DedupTable(std::move(moved)), once);
  }
}

TEST(MinDimsTest, Boundaries) {
  const TableFilterConfig cfg;
  EXPECT_TRUE(CheckMinDims(EnglishTable(6, 2), cfg).accepted);
  const DimCheck one_col = CheckMinDims(EnglishTable(100, 1), cfg);
  EXPECT_FALSE(one_col.accepted);
  EXPECT_EQ(one_col.reason, "min-columns");
  const DimCheck few_rows = CheckMinDims(EnglishTable(5, 3), cfg);
  EXPECT_FALSE(few_rows.accepted);
  EXPECT_EQ(few_rows.reason, "min-rows");
}

TEST(ClassifyTest, SpecExamples) {
  EXPECT_EQ(ClassifyToken("12.99"), TokenClass::kNumeral);
  EXPECT_EQ(ClassifyToken("---"), TokenClass::kPunctuation);
  EXPECT_EQ(ClassifyToken("the"), TokenClass::kWord);
  EXPECT_EQ(ClassifyToken("Odor"), TokenClass::kProperNoun);
}

TEST(ClassifyTest, MoreCases) {
  EXPECT_EQ(ClassifyToken("$"), TokenClass::kSymbol);
  EXPECT_EQ(ClassifyToken("#%@"), TokenClass::kSymbol);
  EXPECT_EQ(ClassifyToken("€"), TokenClass::kSymbol);
  EXPECT_EQ(ClassifyToken("$12"), TokenClass::kNumeral);
  EXPECT_EQ(ClassifyToken("3.5kg"), TokenClass::kNumeral);
  EXPECT_EQ(ClassifyToken("a1b2c3"), TokenClass::kNumeral);
  EXPECT_EQ(ClassifyToken("The"), TokenClass::kWord);
  EXPECT_EQ(ClassifyToken("\"The,"), TokenClass::kWord);
  EXPECT_EQ(ClassifyToken("London"), TokenClass::kProperNoun);
  EXPECT_EQ(ClassifyToken("Ünïcode"), TokenClass::kProperNoun);
  EXPECT_EQ(ClassifyToken("水"), TokenClass::kWord);
  EXPECT_EQ(ClassifyToken("a.-.-"), TokenClass::kOther);
  EXPECT_EQ(ClassifyToken("\x01\x02"), TokenClass::kOther);
  EXPECT_THROW(ClassifyToken(""), std::invalid_argument);
}

TEST(ClassifyTest, TotalOverArbitraryBytes) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 20000; ++trial) {
    std::string tok;
    const std::size_t len = rng.Between(1, 12);
    for (std::size_t i = 0; i < len; ++i) {
      char c = static_cast<char>(rng.Below(256));
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') c = 'x';
      tok.push_back(c);
    }
    const TokenClass a = ClassifyToken(tok);
    ASSERT_EQ(a, ClassifyToken(tok));
  }
}

TEST(JunkTest, Fractions) {
  EXPECT_DOUBLE_EQ(JunkTokenFraction(MakeTable({"name"}, {{"the river"}, {"a book"}})), 0.0);
  EXPECT_DOUBLE_EQ(JunkTokenFraction(MakeTable({"1", "2"}, {{"3", "4.5"}, {"6", "7"}})), 1.0);
  // Header tokens count too: nine WORD tokens and two NUMERAL tokens.
  const RawTable mixed =
      MakeTable({"name", "count"}, {{"the river is", "12"}, {"a book of the", "7"}});
  EXPECT_DOUBLE_EQ(JunkTokenFraction(mixed), 2.0 / 11.0);
  EXPECT_THROW(JunkTokenFraction(MakeTable({""}, {{""}})), std::invalid_argument);
}

TEST(JunkTest, Monotonicity) {
  testing::Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    RawTable t = testing::RandomTable(rng);
    double before;
    try {
      before = JunkTokenFraction(t);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ASSERT_GE(before, 0.0);
    ASSERT_LE(before, 1.0);
    RawTable with_word = t;
    with_word.header[0] += " river";
    EXPECT_LE(JunkTokenFraction(with_word), before);
    RawTable with_junk = t;
    with_junk.header[0] += " 42";
    EXPECT_GE(JunkTokenFraction(with_junk), before);
  }
}

TEST(EnglishTest, SpecExamples) {
  const TableFilterConfig cfg;
  EXPECT_TRUE(IsEnglishText("The quick brown fox jumps over the lazy dog", cfg));
  EXPECT_FALSE(IsEnglishText("日本語の文章はここにあります", cfg));
  std::string consonants;
  const char* kTokens[] = {"brt", "ksl", "zgh", "vvn", "plm", "wrx"};
  for (int i = 0; i < 30; ++i) consonants += std::string(kTokens[i % 6]) + " ";
  EXPECT_FALSE(IsEnglishText(consonants, cfg));
  EXPECT_TRUE(IsEnglishText("", cfg));
  // Under 20 tokens the stopword rate is not consulted.
  EXPECT_TRUE(IsEnglishText("brt ksl zgh", cfg));
}

TEST(EnglishTest, IncrementalMatchesJoined) {
  testing::Rng rng(9);
  const TableFilterConfig cfg;
  const std::vector<std::string> pieces = {"the", "brt zgh", "水 水", "of a", "12", "plm",
                                           "ünï", "", "   ", "is"};
  for (int trial = 0; trial < 3000; ++trial) {
    EnglishCheck check;
    std::string joined;
    const std::size_t n = rng.Between(1, 40);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& p = pieces[rng.Below(pieces.size())];
      check.Add(p);
      if (i > 0) joined += ' ';
      joined += p;
    }
    ASSERT_EQ(check.Passes(cfg), IsEnglishText(joined, cfg)) << joined;
  }
}

TEST(FilterTableTest, SpecExamples) {
  const TableFilterConfig cfg;
  const TableVerdict ok = FilterTable(EnglishTable(10, 3), cfg);
  ASSERT_TRUE(ok.table);
  EXPECT_EQ(*ok.table, EnglishTable(10, 3));

  const TableVerdict small = FilterTable(EnglishTable(4, 2), cfg);
  EXPECT_FALSE(small.table);
  EXPECT_EQ(small.stage, kStageMinRows);

  std::vector<Row> numbers;
  for (int r = 0; r < 10; ++r) {
    numbers.push_back({std::to_string(r), std::to_string(r * 7), std::to_string(r) + ".5"});
  }
  // Stopwords in the header keep the table English so the junk stage decides.
  const TableVerdict junk =
      FilterTable(MakeTable({"the id", "of the total", "a score"}, numbers), cfg);
  EXPECT_FALSE(junk.table);
  EXPECT_EQ(junk.stage, kStageJunkTokens);
}

TEST(FilterTableTest, NonEnglishAndColumnDetail) {
  const TableFilterConfig cfg;
  std::vector<Row> cjk;
  for (int r = 0; r < 8; ++r) cjk.push_back({"水" + std::string(r + 1, 'a'), "日本語"});
  const TableVerdict v = FilterTable(MakeTable({"名前", "説明"}, cjk), cfg);
  EXPECT_EQ(v.stage, kStageNonEnglish);

  const TableVerdict one_col = FilterTable(EnglishTable(10, 1), cfg);
  EXPECT_EQ(one_col.stage, kStageMinRows);
  EXPECT_EQ(one_col.detail, "min-columns");
}

TEST(FilterTableTest, DedupCanCauseMinRows) {
  std::vector<Row> rows;
  for (int r = 0; r < 12; ++r) rows.push_back({"the river " + std::to_string(r % 5), "is a book"});
  EXPECT_EQ(FilterTable(MakeTable({"a", "b"}, rows), TableFilterConfig{}).stage, kStageMinRows);
}

TEST(FilterTableTest, AtMostOneStageAndDeterministic) {
  testing::Rng rng(12);
  const TableFilterConfig cfg;
  for (int trial = 0; trial < 3000; ++trial) {
    const RawTable t = testing::RandomTable(rng);
    const TableVerdict a = FilterTable(t, cfg);
    const TableVerdict b = FilterTable(t, cfg);
    ASSERT_EQ(a.table.has_value(), a.stage.empty());
    ASSERT_EQ(a.stage, b.stage);
    if (a.table) {
      EXPECT_GE(a.table->column_count(), cfg.min_unique_columns);
      EXPECT_GE(a.table->row_count(), cfg.min_unique_rows);
      EXPECT_LT(JunkTokenFraction(*a.table), cfg.max_junk_fraction);
    }
  }
}

TEST(ConfigTest, Validate) {
  TableFilterConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.max_junk_fraction = 1.5;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = {};
  cfg.min_unique_rows = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(ClassifierTest, Pluggable) {
  struct AllWords : TokenClassifier {
    TokenClass Classify(std::string_view) const override { return TokenClass::kWord; }
  };
  std::vector<Row> numbers;
  for (int r = 0; r < 10; ++r) numbers.push_back({std::to_string(r), std::to_string(r * 3)});
  const RawTable t = MakeTable({"the a", "of b"}, numbers);
  EXPECT_EQ(FilterTable(t, TableFilterConfig{}).stage, kStageJunkTokens);
  EXPECT_TRUE(FilterTable(t, TableFilterConfig{}, AllWords{}).table);
}

}  // namespace
}  // namespace tablefew
