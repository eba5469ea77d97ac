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

#include "tablefew/sampler.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "tablefew/codec.h"
#include "tablefew/hash.h"
#include "tablefew/text.h"

namespace tablefew {

namespace {

struct Ranked {
  std::uint64_t score;
  const Task* task;
  std::size_t position;
};

bool RankLess(const Ranked& a, const Ranked& b) {
  return std::tie(a.score, a.task->task_id, a.position) <
         std::tie(b.score, b.task->task_id, b.position);
}

// Lowest `count` tasks by seeded score.
std::vector<const Task*> SelectLowest(const std::vector<const Task*>& pool,
                                      std::size_t count, std::uint64_t seed) {
  std::vector<Ranked> ranked;
  ranked.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    ranked.push_back(Ranked{SeededHash(seed, pool[i]->task_id), pool[i], i});
  }
  count = std::min(count, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count),
                    ranked.end(), RankLess);
  std::vector<const Task*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(ranked[i].task);
  return out;
}

void SortById(std::vector<Task>& tasks) {
  std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    return a.task_id < b.task_id;
  });
}

std::vector<const Task*> Pointers(const std::vector<Task>& tasks) {
  std::vector<const Task*> out;
  out.reserve(tasks.size());
  for (const Task& t : tasks) out.push_back(&t);
  return out;
}

std::vector<const Task*> UniquePointers(const std::vector<const Task*>& pool,
                                        std::uint64_t seed) {
  std::map<std::string_view, Ranked> best;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    Ranked r{SeededHash(seed, pool[i]->task_id), pool[i], i};
    auto [it, inserted] = best.emplace(pool[i]->website, r);
    if (!inserted && RankLess(r, it->second)) it->second = r;
  }
  std::vector<const Task*> out;
  out.reserve(best.size());
  for (const auto& [site, r] : best) out.push_back(r.task);
  return out;
}

}  // namespace

Task CapExamples(const Task& task, std::size_t count, std::uint64_t seed) {
  if (task.examples.size() <= count) return task;
  std::vector<std::pair<std::uint64_t, std::size_t>> ranked;
  ranked.reserve(task.examples.size());
  for (std::size_t i = 0; i < task.examples.size(); ++i) {
    ranked.emplace_back(SeededHash(seed, task.task_id, i), i);
  }
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count),
                    ranked.end());
  std::vector<std::size_t> keep;
  keep.reserve(count);
  for (std::size_t i = 0; i < count; ++i) keep.push_back(ranked[i].second);
  std::sort(keep.begin(), keep.end());
  Task out = task;
  out.examples.clear();
  for (std::size_t i : keep) out.examples.push_back(task.examples[i]);
  return out;
}

SampleResult SampleTasks(const std::vector<Task>& tasks, const SamplePlan& plan) {
  plan.Validate();
  if (plan.strategy == SampleStrategy::kStratified) {
    throw std::invalid_argument("stratified plans go through StratifiedSample");
  }
  SampleResult result;
  std::vector<const Task*> pool = Pointers(tasks);
  if (plan.strategy == SampleStrategy::kUniquePerWebsite) {
    pool = UniquePointers(pool, plan.seed);
  }
  if (plan.max_tasks > pool.size()) {
    result.warnings.push_back("requested " + std::to_string(plan.max_tasks) +
                              " tasks but only " + std::to_string(pool.size()) +
                              " are available; taking all");
  }
  for (const Task* t : SelectLowest(pool, plan.max_tasks, plan.seed)) {
    result.tasks.push_back(plan.max_examples_per_task
                               ? CapExamples(*t, *plan.max_examples_per_task, plan.seed)
                               : *t);
  }
  SortById(result.tasks);
  return result;
}

std::vector<Task> UniquePerWebsite(const std::vector<Task>& tasks,
                                   std::uint64_t seed) {
  std::vector<Task> out;
  for (const Task* t : UniquePointers(Pointers(tasks), seed)) out.push_back(*t);
  SortById(out);
  return out;
}

AssignmentLoad LoadAssignments(std::istream& in) {
  AssignmentLoad load;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    const nlohmann::json j = ParseJsonLine(line, line_number);
    std::string id;
    std::string label;
    try {
      id = RequireString(j, "task_id");
      const nlohmann::json* value = nullptr;
      if (auto it = j.find("label"); it != j.end()) {
        value = &*it;
      } else if (auto r = j.find("rating"); r != j.end()) {
        value = &*r;
      } else {
        throw SchemaError("missing key: label", "label");
      }
      if (value->is_string()) {
        label = value->get<std::string>();
      } else if (value->is_number_integer()) {
        label = std::to_string(value->get<std::int64_t>());
      } else {
        throw SchemaError("label must be a string or integer", "label");
      }
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(line_number) + ": " + e.what(),
                        e.key());
    }
    auto [it, inserted] = load.labels.insert_or_assign(std::move(id), std::move(label));
    if (!inserted) ++load.duplicate_count;
  }
  return load;
}

AssignmentLoad LoadAssignmentFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open assignment file: " + path);
  return LoadAssignments(in);
}

StratifiedResult StratifiedSample(const std::vector<Task>& tasks,
                                  StratifyKey key,
                                  const Assignments& assignments,
                                  const std::vector<std::string>& requested,
                                  std::size_t per_stratum, std::uint64_t seed) {
  if (per_stratum < 1) throw std::invalid_argument("per_stratum must be >= 1");
  StratifiedResult result;
  std::map<std::string, std::vector<const Task*>> groups;
  if (key == StratifyKey::kWebsite) {
    for (const Task& t : tasks) groups[t.website].push_back(&t);
  } else {
    std::set<std::string_view> present;
    for (const Task& t : tasks) {
      present.insert(t.task_id);
      auto it = assignments.find(t.task_id);
      if (it != assignments.end()) groups[it->second].push_back(&t);
    }
    for (const auto& [id, label] : assignments) {
      if (!present.contains(id)) ++result.unknown_assignment_ids;
    }
    if (result.unknown_assignment_ids > 0) {
      result.warnings.push_back(std::to_string(result.unknown_assignment_ids) +
                                " assigned task ids are not in the task file");
    }
  }

  std::vector<std::string> wanted = requested;
  if (wanted.empty()) {
    for (const auto& [label, members] : groups) wanted.push_back(label);
  }
  std::vector<std::string> missing;
  for (const std::string& s : wanted) {
    if (!groups.contains(s)) missing.push_back(s);
  }
  if (!missing.empty()) {
    std::string msg = "strata not present in data:";
    for (const auto& s : missing) msg += " " + s;
    throw std::invalid_argument(msg);
  }

  for (const std::string& s : wanted) {
    const auto& members = groups.at(s);
    if (members.size() < per_stratum) {
      result.warnings.push_back("stratum " + s + " has " +
                                std::to_string(members.size()) + " tasks (< " +
                                std::to_string(per_stratum) + "); taking all");
    }
    std::vector<Task> picked;
    for (const Task* t : SelectLowest(members, per_stratum, seed)) picked.push_back(*t);
    SortById(picked);
    result.strata[s] = std::move(picked);
  }
  return result;
}

std::string StratumFileName(const std::string& stem, const std::string& stratum) {
  std::string safe = stratum;
  std::replace(safe.begin(), safe.end(), '/', '_');
  return stem + "." + safe + ".jsonl";
}

}  // namespace tablefew
