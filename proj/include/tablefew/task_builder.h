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
#include <string>
#include <vector>

#include "tablefew/model.h"

namespace tablefew {

// A per-column task before task-level filtering.
struct CandidateTask {
  Task task;
  std::size_t target_column_index = 0;

  bool operator==(const CandidateTask&) const = default;
};

// "[h_0] v_0 [h_1] v_1 ... [h_target] " over every column except the
// target, in table order, with the target header last.
std::string RenderInput(const Row& row, const std::vector<std::string>& header,
                        std::size_t target_index);

// One candidate per column. Rows whose target cell is blank, or whose input
// cells are all blank, are skipped.
std::vector<CandidateTask> BuildCandidateTasks(const RawTable& table);

}  // namespace tablefew
