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

#include "tablefew/model.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tablefew/hash.h"

namespace tablefew {

void ValidateRawTable(const RawTable& table) {
  if (table.header.empty()) {
    throw ValidationError("table header is empty");
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw ValidationError("row " + std::to_string(r) + " has " +
                            std::to_string(table.rows[r].size()) +
                            " cells, header has " +
                            std::to_string(table.header.size()));
    }
  }
}

namespace {

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

void ValidateTask(const Task& task, std::size_t min_examples) {
  if (task.task_id.empty()) throw ValidationError("task_id is empty");
  if (task.examples.size() < min_examples) {
    throw ValidationError("task " + task.task_id + " has " +
                          std::to_string(task.examples.size()) +
                          " examples, minimum is " +
                          std::to_string(min_examples));
  }
  const std::string marker = "[" + task.target_header + "] ";
  for (std::size_t i = 0; i < task.examples.size(); ++i) {
    const Example& ex = task.examples[i];
    if (ex.input.empty()) {
      throw ValidationError("task " + task.task_id + " example " +
                            std::to_string(i) + " has an empty input");
    }
    if (IsBlank(ex.output)) {
      throw ValidationError("task " + task.task_id + " example " +
                            std::to_string(i) + " has an empty output");
    }
    if (!ex.input.ends_with(marker)) {
      throw ValidationError("task " + task.task_id + " example " +
                            std::to_string(i) +
                            " input does not end with the target marker");
    }
  }
}

std::string_view ScopeName(ReportScope scope) {
  return scope == ReportScope::kTables ? "tables" : "tasks";
}

ReportScope ParseScope(std::string_view name) {
  if (name == "tables") return ReportScope::kTables;
  if (name == "tasks") return ReportScope::kTasks;
  throw std::invalid_argument("unknown report scope: " + std::string(name));
}

FilterReport FilterReport::Empty(ReportScope scope,
                                 std::vector<std::string> stage_names) {
  FilterReport r;
  r.scope = scope;
  r.rejected.assign(stage_names.size(), 0);
  r.stage_names = std::move(stage_names);
  return r;
}

void FilterReport::Reject(std::string_view stage, std::uint64_t count) {
  auto it = std::find(stage_names.begin(), stage_names.end(), stage);
  if (it == stage_names.end()) {
    throw std::invalid_argument("unknown stage: " + std::string(stage));
  }
  rejected[static_cast<std::size_t>(it - stage_names.begin())] += count;
}

std::uint64_t FilterReport::RejectedAt(std::string_view stage) const {
  auto it = std::find(stage_names.begin(), stage_names.end(), stage);
  if (it == stage_names.end()) {
    throw std::invalid_argument("unknown stage: " + std::string(stage));
  }
  return rejected[static_cast<std::size_t>(it - stage_names.begin())];
}

std::uint64_t FilterReport::TotalRejected() const {
  return std::accumulate(rejected.begin(), rejected.end(), std::uint64_t{0});
}

bool FilterReport::Balanced() const {
  const std::uint64_t total = TotalRejected();
  return rejected.size() == stage_names.size() && total <= initial_count &&
         remaining_count == initial_count - total;
}

std::string_view StrategyName(SampleStrategy strategy) {
  switch (strategy) {
    case SampleStrategy::kUniform:
      return "uniform";
    case SampleStrategy::kUniquePerWebsite:
      return "unique_per_website";
    case SampleStrategy::kStratified:
      return "stratified";
  }
  return "?";
}

std::string_view StratifyKeyName(StratifyKey key) {
  switch (key) {
    case StratifyKey::kWebsite:
      return "website";
    case StratifyKey::kCluster:
      return "cluster";
    case StratifyKey::kQuality:
      return "quality";
  }
  return "?";
}

StratifyKey ParseStratifyKey(std::string_view name) {
  if (name == "website") return StratifyKey::kWebsite;
  if (name == "cluster") return StratifyKey::kCluster;
  if (name == "quality") return StratifyKey::kQuality;
  throw std::invalid_argument("unknown stratify key: " + std::string(name));
}

void SamplePlan::Validate() const {
  if (max_tasks < 1) throw std::invalid_argument("max_tasks must be >= 1");
  // A few-shot task needs at least one demonstration and one query.
  if (max_examples_per_task && *max_examples_per_task < 2) {
    throw std::invalid_argument("max_examples_per_task must be >= 2");
  }
  if (stratify_key.has_value() != (strategy == SampleStrategy::kStratified)) {
    throw std::invalid_argument(
        "stratify_key must be set iff strategy is stratified");
  }
}

std::string WebsiteFromUrl(std::string_view url) {
  std::string_view rest = url;
  if (auto scheme = rest.find("://"); scheme != std::string_view::npos) {
    rest.remove_prefix(scheme + 3);
  } else if (rest.starts_with("//")) {
    rest.remove_prefix(2);
  }
  rest = rest.substr(0, rest.find_first_of("/?#"));
  if (auto at = rest.rfind('@'); at != std::string_view::npos) {
    rest.remove_prefix(at + 1);
  }
  if (rest.starts_with("[")) {
    // IPv6 literal: keep the brackets, drop any port.
    rest = rest.substr(0, rest.find(']') + 1);
  } else {
    rest = rest.substr(0, rest.find(':'));
  }
  std::string host(rest);
  std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (host.starts_with("www.")) host.erase(0, 4);
  if (host.starts_with("[")) return host;
  const bool valid = !host.empty() && host.front() != '.' && host.back() != '.' &&
                     std::all_of(host.begin(), host.end(), [](unsigned char c) {
                       return std::isalnum(c) || c == '.' || c == '-' || c == '_';
                     });
  return valid ? host : std::string();
}

std::string MakeTaskId(std::string_view website, std::string_view url,
                       std::int64_t table_index,
                       std::int64_t target_column_index) {
  if (website.empty()) {
    throw std::invalid_argument("task id requires a non-empty website");
  }
  const std::string_view sep(&kUnitSeparator, 1);
  Fnv1a64 h;
  h.Update(url)
      .Update(sep)
      .Update(std::to_string(table_index))
      .Update(sep)
      .Update(std::to_string(target_column_index));
  std::string id;
  id.reserve(website.size() + 24);
  id.append(website).append("__").append(Hex16(h.digest()));
  id.append("__col").append(std::to_string(target_column_index));
  return id;
}

}  // namespace tablefew
