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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tablefew/hash.h"
#include "tablefew/model.h"
#include "tablefew/task_builder.h"

namespace tablefew {

struct TaskFilterConfig {
  std::size_t max_tasks_per_website = 2500;
  std::size_t min_examples = 6;
  std::size_t min_output_classes = 2;
  double min_evenness = 0.7;
  std::uint64_t cap_seed = 0;
  // Thresholds for the English check over task outputs.
  double english_min_charset_fraction = 0.70;
  double english_min_stopword_rate = 0.05;

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

inline constexpr std::string_view kStageMaxDomain = "max-domain";
inline constexpr std::string_view kStageTaskMinRows = "min-rows";
inline constexpr std::string_view kStageOneToMany = "one-to-many";
inline constexpr std::string_view kStageMinClasses = "min-classes";
inline constexpr std::string_view kStageNonEnglishOutput = "non-english-output";
inline constexpr std::string_view kStageClassBalance = "class-balance";

// Task-scope stage names in cascade order.
std::vector<std::string> TaskStageNames();

// Normalized Shannon entropy H / ln(C) of the label distribution; 0 for a
// single class. Throws std::invalid_argument for no classes or a zero count.
double ShannonEvenness(std::span<const std::uint64_t> class_counts);
double ShannonEvenness(const std::map<std::string, std::uint64_t>& class_counts);

// Class-balance decision: scores below the threshold are rejected, a score
// equal to it is kept.
inline bool PassesClassBalance(double evenness, double min_evenness) {
  return !(evenness < min_evenness);
}

// Drops repeated (input, output) pairs, keeping first occurrences in order.
std::vector<Example> CollapseDuplicatePairs(const std::vector<Example>& examples);

// True if some input maps to two or more distinct outputs.
bool HasOneToMany(const std::vector<Example>& examples);

struct OneToManyResult {
  bool accepted = true;
  // Examples after duplicate-pair collapse.
  std::vector<Example> examples;
};

OneToManyResult RejectOneToMany(const CandidateTask& task);

// Score that orders candidates within a website for the cap; lower is kept.
inline std::uint64_t CapScore(std::uint64_t cap_seed, std::string_view task_id) {
  return SeededHash(cap_seed, task_id);
}

struct StageOutcome {
  std::optional<Task> task;
  // Charged stage on rejection.
  std::string_view stage;
};

// Stages after the website cap (min-rows through class-balance).
StageOutcome EvaluateAfterCap(const CandidateTask& candidate,
                              const TaskFilterConfig& cfg);
StageOutcome EvaluateAfterCap(CandidateTask&& candidate, const TaskFilterConfig& cfg);

struct ColumnOutcome {
  // Kept row indices into the table, in table order, when accepted.
  std::vector<std::size_t> rows;
  std::string_view stage;
};

// EvaluateAfterCap for every target column of an accepted table, without
// rendering inputs. Element j agrees with BuildCandidateTasks(table)[j].
std::vector<ColumnOutcome> EvaluateColumns(const RawTable& table, const TaskFilterConfig& cfg);

// Streaming per-website cap. Offer every candidate once with its
// sequence number (below 2^56); Finish() then lists the survivors.
// Memory is O(websites * cap), not O(candidates). Ties on score fall back
// to sequence order.
class WebsiteCap {
 public:
  explicit WebsiteCap(std::size_t cap) : cap_(cap) {}

  // `tag` is opaque caller data reported back by Finish().
  void Offer(std::string_view website, std::uint64_t score, std::uint64_t seq,
             std::uint8_t tag);

  struct Kept {
    std::uint64_t seq;
    std::uint8_t tag;
  };

  // Retained entries sorted by seq, plus the number capped away.
  struct Result {
    std::vector<Kept> kept;
    std::uint64_t capped = 0;
  };
  Result Finish();

 private:
  // seq in the high 56 bits, tag in the low 8; seqs are distinct, so the
  // packed value orders like seq.
  struct Entry {
    std::uint64_t score;
    std::uint64_t seq_tag;
    bool operator<(const Entry& o) const {
      return score != o.score ? score < o.score : seq_tag < o.seq_tag;
    }
  };
  std::size_t cap_;
  std::uint64_t offered_ = 0;
  std::unordered_map<std::string, std::vector<Entry>> heaps_;
};

struct CapResult {
  std::vector<CandidateTask> kept;
  std::uint64_t capped = 0;
};

// Keeps, per website, the max_tasks_per_website candidates with the lowest
// CapScore. Input order is preserved.
CapResult CapPerWebsite(std::vector<CandidateTask> tasks,
                        const TaskFilterConfig& cfg);

struct TaskFilterResult {
  std::vector<Task> tasks;
  FilterReport report;
};

// Full task cascade: max-domain, min-rows, one-to-many, min-classes,
// non-english-output, class-balance. Surviving tasks keep input order.
TaskFilterResult ApplyTaskFilters(const std::vector<CandidateTask>& tasks,
                                  const TaskFilterConfig& cfg);

}  // namespace tablefew
