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
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tablefew/model.h"

namespace tablefew {

// Calls `fn(task, line_number)` for every non-blank line of a task JSONL
// stream. Decode errors propagate.
void ForEachTask(std::istream& in,
                 const std::function<void(Task&&, std::size_t)>& fn,
                 std::size_t min_examples = kMinTaskExamples);

// Throws std::runtime_error when the file cannot be opened.
std::vector<Task> ReadTaskFile(const std::string& path,
                               std::size_t min_examples = kMinTaskExamples);
std::vector<Task> ReadTasks(std::istream& in,
                            std::size_t min_examples = kMinTaskExamples);

void WriteTasks(std::ostream& out, const std::vector<Task>& tasks);
void WriteTaskFile(const std::string& path, const std::vector<Task>& tasks);

}  // namespace tablefew
