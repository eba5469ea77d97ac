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
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/synth_corpus.h"
#include "tablefew/hash.h"
#include "tablefew/sampler.h"

namespace tablefew {
namespace {

std::vector<std::string> IdsOf(const std::vector<Task>& tasks) {
  std::vector<std::string> ids;
  for (const Task& t : tasks) ids.push_back(t.task_id);
  return ids;
}

TEST(SampleTest, CountsAndCaps) {
  const auto tasks = testing::SyntheticTasks(2000, 40, 1);
  SamplePlan plan;
  plan.seed = 9;
  plan.max_tasks = 300;
  plan.max_examples_per_task = 10;
  const SampleResult r = SampleTasks(tasks, plan);
  ASSERT_EQ(r.tasks.size(), 300u);
  EXPECT_TRUE(r.warnings.empty());
  const auto ids = IdsOf(r.tasks);
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 300u);
  for (const Task& t : r.tasks) EXPECT_LE(t.examples.size(), 10u);
}

TEST(SampleTest, MatchesLowestScoreOracle) {
  const auto tasks = testing::SyntheticTasks(500, 10, 2);
  SamplePlan plan;
  plan.seed = 4;
  plan.max_tasks = 50;
  plan.max_examples_per_task = std::nullopt;
  std::vector<std::pair<std::uint64_t, std::string>> scored;
  for (const Task& t : tasks) scored.emplace_back(SeededHash(4, t.task_id), t.task_id);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> oracle;
  for (std::size_t i = 0; i < 50; ++i) oracle.push_back(scored[i].second);
  std::sort(oracle.begin(), oracle.end());
  const SampleResult r = SampleTasks(tasks, plan);
  EXPECT_EQ(IdsOf(r.tasks), oracle);
  for (const Task& t : r.tasks) {
    EXPECT_EQ(t, *std::find_if(tasks.begin(), tasks.end(),
                               [&](const Task& o) { return o.task_id == t.task_id; }));
  }
}

TEST(SampleTest, InputOrderDoesNotMatter) {
  auto tasks = testing::SyntheticTasks(1000, 25, 3);
  SamplePlan plan;
  plan.seed = 11;
  plan.max_tasks = 100;
  const SampleResult a = SampleTasks(tasks, plan);
  std::reverse(tasks.begin(), tasks.end());
  std::rotate(tasks.begin(), tasks.begin() + 313, tasks.end());
  const SampleResult b = SampleTasks(tasks, plan);
  EXPECT_EQ(a.tasks, b.tasks);
  plan.seed = 12;
  EXPECT_NE(IdsOf(SampleTasks(tasks, plan).tasks), IdsOf(a.tasks));
}

TEST(SampleTest, ShortfallWarns) {
  const auto tasks = testing::SyntheticTasks(20, 3, 4);
  SamplePlan plan;
  plan.max_tasks = 50;
  const SampleResult r = SampleTasks(tasks, plan);
  EXPECT_EQ(r.tasks.size(), 20u);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(CapExamplesTest, KeepsOrderAndIsDeterministic) {
  const auto tasks = testing::SyntheticTasks(50, 5, 5, 40);
  for (const Task& t : tasks) {
    const Task capped = CapExamples(t, 7, 1);
    ASSERT_EQ(capped.examples.size(), std::min<std::size_t>(7, t.examples.size()));
    ASSERT_EQ(CapExamples(t, 7, 1), capped);
    // Kept examples appear in original relative order.
    std::size_t pos = 0;
    for (const Example& e : capped.examples) {
      auto it = std::find(t.examples.begin() + static_cast<std::ptrdiff_t>(pos), t.examples.end(), e);
      ASSERT_NE(it, t.examples.end());
      pos = static_cast<std::size_t>(it - t.examples.begin()) + 1;
    }
  }
}

TEST(UniquePerWebsiteTest, OnePerSite) {
  const auto tasks = testing::SyntheticTasks(600, 17, 6);
  const auto unique = UniquePerWebsite(tasks, 3);
  std::set<std::string> sites;
  for (const Task& t : unique) sites.insert(t.website);
  EXPECT_EQ(unique.size(), 17u);
  EXPECT_EQ(sites.size(), 17u);
  SamplePlan plan;
  plan.seed = 3;
  plan.max_tasks = 10;
  plan.strategy = SampleStrategy::kUniquePerWebsite;
  const SampleResult r = SampleTasks(tasks, plan);
  ASSERT_EQ(r.tasks.size(), 10u);
  std::set<std::string> sampled_sites;
  for (const Task& t : r.tasks) sampled_sites.insert(t.website);
  EXPECT_EQ(sampled_sites.size(), 10u);
}

TEST(SampleTest, InvalidPlans) {
  const auto tasks = testing::SyntheticTasks(10, 2, 7);
  SamplePlan plan;
  plan.max_tasks = 0;
  EXPECT_THROW(SampleTasks(tasks, plan), std::invalid_argument);
  plan = SamplePlan{};
  plan.strategy = SampleStrategy::kStratified;
  plan.stratify_key = StratifyKey::kWebsite;
  EXPECT_THROW(SampleTasks(tasks, plan), std::invalid_argument);
}

TEST(StratifiedTest, ByWebsite) {
  const auto tasks = testing::SyntheticTasks(300, 6, 8);
  const StratifiedResult r = StratifiedSample(tasks, StratifyKey::kWebsite, {}, {}, 5, 1);
  EXPECT_EQ(r.strata.size(), 6u);
  for (const auto& [site, picked] : r.strata) {
    EXPECT_EQ(picked.size(), 5u);
    for (const Task& t : picked) EXPECT_EQ(t.website, site);
  }
}

TEST(StratifiedTest, ByAssignmentsWithUnknownAndMissing) {
  const auto tasks = testing::SyntheticTasks(40, 4, 9);
  Assignments a;
  for (std::size_t i = 0; i < tasks.size(); ++i) a[tasks[i].task_id] = i % 3 == 0 ? "2" : "1";
  a["nowhere.com__0000000000000000__col0"] = "0";
  const StratifiedResult r = StratifiedSample(tasks, StratifyKey::kQuality, a, {"2"}, 100, 1);
  EXPECT_EQ(r.unknown_assignment_ids, 1u);
  ASSERT_EQ(r.strata.size(), 1u);
  EXPECT_EQ(r.strata.at("2").size(), 14u);
  EXPECT_EQ(r.warnings.size(), 2u);
  EXPECT_THROW(StratifiedSample(tasks, StratifyKey::kQuality, a, {"0"}, 5, 1),
               std::invalid_argument);
}

TEST(AssignmentsTest, LoadFormats) {
  std::istringstream in(
      "{\"task_id\":\"a\",\"label\":3}\n"
      "\n"
      "{\"task_id\":\"b\",\"label\":\"x\"}\n"
      "{\"task_id\":\"c\",\"rating\":2,\"annotator\":\"z\",\"timestamp\":1}\n"
      "{\"task_id\":\"a\",\"label\":-1}\n");
  const AssignmentLoad load = LoadAssignments(in);
  EXPECT_EQ(load.labels.at("a"), "-1");
  EXPECT_EQ(load.labels.at("b"), "x");
  EXPECT_EQ(load.labels.at("c"), "2");
  EXPECT_EQ(load.duplicate_count, 1u);
}

TEST(AssignmentsTest, ErrorsCarryLineNumbers) {
  std::istringstream bad_json("{\"task_id\":\"a\",\"label\":1}\n{oops\n");
  try {
    LoadAssignments(bad_json);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream missing("{\"task_id\":\"a\"}\n");
  EXPECT_THROW(LoadAssignments(missing), SchemaError);
  std::istringstream wrong_type("{\"task_id\":\"a\",\"label\":1.5}\n");
  EXPECT_THROW(LoadAssignments(wrong_type), SchemaError);
}

TEST(StratumFileNameTest, Format) {
  EXPECT_EQ(StratumFileName("out/q", "2"), "out/q.2.jsonl");
  EXPECT_EQ(StratumFileName("s", "a/b"), "s.a_b.jsonl");
}

}  // namespace
}  // namespace tablefew
