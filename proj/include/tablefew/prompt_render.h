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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tablefew/model.h"

namespace tablefew {

// Separator layout of a k-shot sequence.
struct RenderOptions {
  // Between an input and its output inside one demonstration block.
  std::string pair_separator = "\n";
  // Between blocks, and before the query input.
  std::string block_separator = "\n\n";
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RenderedPrompt {
  std::string prompt;
  std::string target;
  // Demonstrations left after budget trimming.
  std::size_t demonstrations = 0;
};

// Demonstrations are the first k examples in task order, skipping
// `query_index`; the query input goes last with no trailing separator.
// With a character budget, whole leading demonstration blocks are dropped
// until the prompt fits. Throws std::invalid_argument for too few examples
// or a bad query index, BudgetError if the query alone exceeds the budget.
RenderedPrompt RenderFewShot(const Task& task, std::size_t k,
                             std::size_t query_index,
                             std::optional<std::size_t> budget_chars = std::nullopt,
                             const RenderOptions& options = {});

// Length in Unicode code points.
std::size_t CharLength(std::string_view text);

struct PromptPair {
  std::string task_id;
  std::string prompt;
  std::string target;
  std::vector<std::string> options;
};

// Query picked by the lowest seeded score among indices >= k.
std::size_t PickQueryIndex(const Task& task, std::size_t k, std::uint64_t seed);

// Returns nullopt if the task has <= k examples.
std::optional<PromptPair> MakePromptPair(const Task& task, std::size_t k,
                                         std::uint64_t seed,
                                         std::optional<std::size_t> budget_chars = std::nullopt,
                                         const RenderOptions& options = {});

// JSONL line with keys task_id, prompt, target, options.
std::string EncodePromptPair(const PromptPair& pair);

struct ExportStats {
  std::size_t exported = 0;
  std::size_t skipped_too_short = 0;
};

// Reads a task JSONL stream and writes prompt pairs, one per usable task.
ExportStats ExportPairs(std::istream& tasks, std::ostream& out, std::size_t k,
                        std::uint64_t seed,
                        std::optional<std::size_t> budget_chars = std::nullopt,
                        const RenderOptions& options = {});

}  // namespace tablefew
