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

#include "tablefew/prompt_render.h"

#include <algorithm>
#include <deque>
#include <set>

#include "tablefew/codec.h"
#include "tablefew/hash.h"
#include "tablefew/task_file.h"

namespace tablefew {

std::size_t CharLength(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

RenderedPrompt RenderFewShot(const Task& task, std::size_t k,
                             std::size_t query_index,
                             std::optional<std::size_t> budget_chars,
                             const RenderOptions& options) {
  const std::size_t n = task.examples.size();
  if (n < k + 1) {
    throw std::invalid_argument("task " + task.task_id + " has " +
                                std::to_string(n) + " examples, need " +
                                std::to_string(k + 1));
  }
  if (query_index >= n) {
    throw std::invalid_argument("query index out of range");
  }
  std::vector<std::size_t> demos;
  for (std::size_t i = 0; i < n && demos.size() < k; ++i) {
    if (i != query_index) demos.push_back(i);
  }

  const std::string& query = task.examples[query_index].input;
  std::deque<std::string> blocks;
  for (std::size_t i : demos) {
    const Example& e = task.examples[i];
    blocks.push_back(e.input + options.pair_separator + e.output);
  }

  if (budget_chars) {
    const std::size_t query_len = CharLength(query);
    if (query_len > *budget_chars) {
      throw BudgetError("query block of task " + task.task_id + " (" +
                        std::to_string(query_len) + " chars) exceeds budget " +
                        std::to_string(*budget_chars));
    }
    const std::size_t sep_len = CharLength(options.block_separator);
    std::size_t total = query_len;
    for (const auto& b : blocks) total += CharLength(b) + sep_len;
    while (total > *budget_chars && !blocks.empty()) {
      total -= CharLength(blocks.front()) + sep_len;
      blocks.pop_front();
    }
  }

  RenderedPrompt out;
  out.demonstrations = blocks.size();
  for (const auto& b : blocks) {
    out.prompt.append(b);
    out.prompt.append(options.block_separator);
  }
  out.prompt.append(query);
  out.target = task.examples[query_index].output;
  return out;
}

std::size_t PickQueryIndex(const Task& task, std::size_t k, std::uint64_t seed) {
  if (task.examples.size() <= k) {
    throw std::invalid_argument("task has no example beyond the first k");
  }
  std::size_t best = k;
  std::uint64_t best_score = SeededHash(seed, task.task_id, k);
  for (std::size_t i = k + 1; i < task.examples.size(); ++i) {
    const std::uint64_t s = SeededHash(seed, task.task_id, i);
    if (s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

std::optional<PromptPair> MakePromptPair(const Task& task, std::size_t k,
                                         std::uint64_t seed,
                                         std::optional<std::size_t> budget_chars,
                                         const RenderOptions& options) {
  if (task.examples.size() <= k) return std::nullopt;
  const std::size_t q = PickQueryIndex(task, k, seed);
  RenderedPrompt r = RenderFewShot(task, k, q, budget_chars, options);
  std::set<std::string> labels;
  for (const Example& e : task.examples) labels.insert(e.output);
  return PromptPair{task.task_id, std::move(r.prompt), std::move(r.target),
                    std::vector<std::string>(labels.begin(), labels.end())};
}

std::string EncodePromptPair(const PromptPair& pair) {
  OrderedJson j;
  j["task_id"] = pair.task_id;
  j["prompt"] = pair.prompt;
  j["target"] = pair.target;
  j["options"] = pair.options;
  return DumpCompact(j);
}

ExportStats ExportPairs(std::istream& tasks, std::ostream& out, std::size_t k,
                        std::uint64_t seed,
                        std::optional<std::size_t> budget_chars,
                        const RenderOptions& options) {
  ExportStats stats;
  ForEachTask(tasks, [&](Task&& task, std::size_t) {
    auto pair = MakePromptPair(task, k, seed, budget_chars, options);
    if (!pair) {
      ++stats.skipped_too_short;
      return;
    }
    out << EncodePromptPair(*pair) << '\n';
    ++stats.exported;
  }, kMinSampledExamples);
  return stats;
}

}  // namespace tablefew
