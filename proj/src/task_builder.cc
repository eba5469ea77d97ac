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

#include "tablefew/task_builder.h"

#include <stdexcept>

#include "tablefew/text.h"

namespace tablefew {

std::string RenderInput(const Row& row, const std::vector<std::string>& header,
                        std::size_t target_index) {
  if (row.size() != header.size() || target_index >= header.size()) {
    throw std::invalid_argument("row/header width mismatch or bad target");
  }
  std::size_t size = header[target_index].size() + 3;
  for (std::size_t j = 0; j < header.size(); ++j) {
    size += header[j].size() + row[j].size() + 4;
  }
  std::string out;
  out.reserve(size);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == target_index) continue;
    out.push_back('[');
    out.append(header[j]);
    out.append("] ");
    out.append(row[j]);
    out.push_back(' ');
  }
  out.push_back('[');
  out.append(header[target_index]);
  out.append("] ");
  return out;
}

std::vector<CandidateTask> BuildCandidateTasks(const RawTable& table) {
  const std::size_t cols = table.column_count();
  std::vector<CandidateTask> out;
  out.reserve(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    CandidateTask cand;
    cand.target_column_index = j;
    Task& task = cand.task;
    task.task_id = MakeTaskId(table.website, table.url, table.table_index,
                              static_cast<std::int64_t>(j));
    task.website = table.website;
    task.url = table.url;
    task.page_title = table.page_title;
    task.target_header = table.header[j];
    task.examples.reserve(table.row_count());
    for (const Row& row : table.rows) {
      if (IsBlank(row[j])) continue;
      bool any_input = false;
      for (std::size_t k = 0; k < cols && !any_input; ++k) {
        any_input = k != j && !IsBlank(row[k]);
      }
      if (!any_input) continue;
      task.examples.push_back(Example{RenderInput(row, table.header, j), row[j]});
    }
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace tablefew
