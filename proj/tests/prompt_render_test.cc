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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "support/synth_corpus.h"
#include "tablefew/codec.h"
#include "tablefew/prompt_render.h"

namespace tablefew {
namespace {

Task Studystack() {
  Task t;
  t.task_id = "studystack.com__0123456789abcdef__col0";
  t.website = "studystack.com";
  t.url = "https://www.studystack.com/flashcard-1";
  t.target_header = "Question";
  t.examples = {
      {"[Answer] hard palte [Question] ", "The roof of the mouth is called the:"},
      {"[Answer] middle ear [Question] ",
       "The malleus, incus, and stapes are located in the:"},
      {"[Answer] mandible [Question] ", "The lower jawbone is the"},
  };
  return t;
}

Task Numbered(std::size_t n) {
  Task t;
  t.task_id = "x.com__00__col1";
  t.website = "x.com";
  t.target_header = "B";
  for (std::size_t i = 0; i < n; ++i) {
    t.examples.push_back({"[A] a" + std::to_string(i) + " [B] ", "b" + std::to_string(i % 3)});
  }
  return t;
}

TEST(RenderTest, OneShotGolden) {
  const RenderedPrompt r = RenderFewShot(Studystack(), 1, 1);
  EXPECT_EQ(r.prompt,
            "[Answer] hard palte [Question] \nThe roof of the mouth is called the:\n\n"
            "[Answer] middle ear [Question] ");
  EXPECT_EQ(r.target, "The malleus, incus, and stapes are located in the:");
  EXPECT_EQ(r.demonstrations, 1u);
}

TEST(RenderTest, ZeroShotIsTheQueryAlone) {
  const RenderedPrompt r = RenderFewShot(Studystack(), 0, 2);
  EXPECT_EQ(r.prompt, "[Answer] mandible [Question] ");
  EXPECT_EQ(r.target, "The lower jawbone is the");
}

TEST(RenderTest, DemonstrationsSkipTheQuery) {
  const RenderedPrompt r = RenderFewShot(Numbered(6), 2, 0);
  EXPECT_EQ(r.prompt, "[A] a1 [B] \nb1\n\n[A] a2 [B] \nb2\n\n[A] a0 [B] ");
  const RenderedPrompt five = RenderFewShot(Numbered(6), 5, 5);
  EXPECT_EQ(five.demonstrations, 5u);
  EXPECT_TRUE(five.prompt.ends_with("\n\n[A] a5 [B] "));
}

TEST(RenderTest, CustomSeparators) {
  RenderOptions opts;
  opts.pair_separator = " => ";
  opts.block_separator = " | ";
  EXPECT_EQ(RenderFewShot(Numbered(3), 1, 2, std::nullopt, opts).prompt,
            "[A] a0 [B]  => b0 | [A] a2 [B] ");
}

TEST(RenderTest, Errors) {
  EXPECT_THROW(RenderFewShot(Numbered(3), 3, 0), std::invalid_argument);
  EXPECT_THROW(RenderFewShot(Numbered(3), 1, 3), std::invalid_argument);
  EXPECT_THROW(RenderFewShot(Numbered(3), 1, 0, 5), BudgetError);
}

TEST(RenderTest, BudgetDropsLeadingBlocks) {
  const Task t = Numbered(6);
  const RenderedPrompt full = RenderFewShot(t, 5, 5);
  const std::size_t len = CharLength(full.prompt);
  EXPECT_EQ(RenderFewShot(t, 5, 5, len).prompt, full.prompt);
  const RenderedPrompt trimmed = RenderFewShot(t, 5, 5, len - 1);
  EXPECT_EQ(trimmed.demonstrations, 4u);
  EXPECT_TRUE(trimmed.prompt.starts_with("[A] a1 [B] "));
  EXPECT_LE(CharLength(trimmed.prompt), len - 1);
  const RenderedPrompt bare = RenderFewShot(t, 5, 5, CharLength("[A] a5 [B] "));
  EXPECT_EQ(bare.demonstrations, 0u);
  EXPECT_EQ(bare.prompt, "[A] a5 [B] ");
}

TEST(RenderTest, BudgetCountsCodePoints) {
  EXPECT_EQ(CharLength("aé水🙂"), 4u);
  Task t = Numbered(2);
  t.examples[0].output = "éé";
  const std::size_t len = CharLength(RenderFewShot(t, 1, 1).prompt);
  EXPECT_EQ(RenderFewShot(t, 1, 1, len).demonstrations, 1u);
}

TEST(PromptPairTest, QueryComesAfterDemonstrations) {
  const auto tasks = testing::SyntheticTasks(200, 10, 3);
  for (const Task& t : tasks) {
    for (std::size_t k : {0u, 1u, 3u}) {
      const std::size_t q = PickQueryIndex(t, k, 5);
      ASSERT_GE(q, k);
      ASSERT_LT(q, t.examples.size());
      ASSERT_EQ(PickQueryIndex(t, k, 5), q);
      const auto pair = MakePromptPair(t, k, 5);
      ASSERT_TRUE(pair);
      ASSERT_EQ(pair->target, t.examples[q].output);
      ASSERT_TRUE(std::is_sorted(pair->options.begin(), pair->options.end()));
    }
  }
}

TEST(PromptPairTest, TooShortIsSkipped) {
  EXPECT_FALSE(MakePromptPair(Numbered(3), 3, 0));
  EXPECT_TRUE(MakePromptPair(Numbered(4), 3, 0));
}

TEST(PromptPairTest, EncodeAndExport) {
  const auto pair = MakePromptPair(Numbered(3), 1, 0);
  ASSERT_TRUE(pair);
  const auto j = nlohmann::json::parse(EncodePromptPair(*pair));
  EXPECT_EQ(j["task_id"], "x.com__00__col1");
  EXPECT_EQ(j["options"], nlohmann::json({"b0", "b1", "b2"}));

  std::stringstream in;
  in << EncodeTask(Numbered(6)) << "\n" << EncodeTask(Numbered(2)) << "\n";
  std::ostringstream out;
  const ExportStats stats = ExportPairs(in, out, 2, 0);
  EXPECT_EQ(stats.exported, 1u);
  EXPECT_EQ(stats.skipped_too_short, 1u);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

}  // namespace
}  // namespace tablefew
