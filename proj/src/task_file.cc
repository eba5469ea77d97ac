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

#include "tablefew/task_file.h"

#include <fstream>
#include <stdexcept>

#include "tablefew/codec.h"
#include "tablefew/text.h"

namespace tablefew {

void ForEachTask(std::istream& in,
                 const std::function<void(Task&&, std::size_t)>& fn,
                 std::size_t min_examples) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    fn(DecodeTask(line, line_number, min_examples), line_number);
  }
}

std::vector<Task> ReadTasks(std::istream& in, std::size_t min_examples) {
  std::vector<Task> tasks;
  ForEachTask(
      in, [&](Task&& t, std::size_t) { tasks.push_back(std::move(t)); },
      min_examples);
  return tasks;
}

std::vector<Task> ReadTaskFile(const std::string& path,
                               std::size_t min_examples) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open task file: " + path);
  return ReadTasks(in, min_examples);
}

void WriteTasks(std::ostream& out, const std::vector<Task>& tasks) {
  for (const Task& t : tasks) out << EncodeTask(t) << '\n';
}

void WriteTaskFile(const std::string& path, const std::vector<Task>& tasks) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write task file: " + path);
  WriteTasks(out, tasks);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tablefew
