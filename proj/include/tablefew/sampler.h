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
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tablefew/model.h"

namespace tablefew {

// All selections rank items by a seeded FNV-1a score and keep the lowest,
// so results do not depend on input order. Outputs are sorted by task_id.

struct SampleResult {
  std::vector<Task> tasks;
  std::vector<std::string> warnings;
};

// Keeps the `count` lowest-ranked examples of `task`, in original order.
Task CapExamples(const Task& task, std::size_t count, std::uint64_t seed);

// Uniform draw of plan.max_tasks tasks, then at most
// plan.max_examples_per_task examples each. Throws std::invalid_argument for
// an invalid plan. Only the uniform and unique_per_website strategies are
// accepted; the latter first reduces the input to one task per website.
SampleResult SampleTasks(const std::vector<Task>& tasks, const SamplePlan& plan);

// One task per website: the lowest-ranked one.
std::vector<Task> UniquePerWebsite(const std::vector<Task>& tasks,
                                   std::uint64_t seed);

// task_id -> stratum label.
using Assignments = std::unordered_map<std::string, std::string>;

struct AssignmentLoad {
  Assignments labels;
  std::size_t duplicate_count = 0;
};

// JSONL of {task_id, label} (label integer or string). Annotation records
// ({task_id, rating, ...}) are accepted too, with rating as the label.
// Duplicate ids: last wins. Throws ParseError/SchemaError with line numbers.
AssignmentLoad LoadAssignments(std::istream& in);
AssignmentLoad LoadAssignmentFile(const std::string& path);

struct StratifiedResult {
  // Stratum label -> selected tasks (sorted by task_id).
  std::map<std::string, std::vector<Task>> strata;
  std::vector<std::string> warnings;
  std::size_t unknown_assignment_ids = 0;
};

// For key == website, labels come from the tasks and `assignments` is
// ignored. `requested` empty means every stratum present. Throws
// std::invalid_argument listing requested strata absent from the data.
StratifiedResult StratifiedSample(const std::vector<Task>& tasks,
                                  StratifyKey key,
                                  const Assignments& assignments,
                                  const std::vector<std::string>& requested,
                                  std::size_t per_stratum, std::uint64_t seed);

// `<stem>.<stratum>.jsonl`
std::string StratumFileName(const std::string& stem, const std::string& stratum);

}  // namespace tablefew
