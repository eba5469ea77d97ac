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

#include "tablefew/task_filters.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tablefew/table_filters.h"
#include "tablefew/text.h"

namespace tablefew {

void TaskFilterConfig::Validate() const {
  if (max_tasks_per_website < 1) {
    throw std::invalid_argument("max_tasks_per_website must be >= 1");
  }
  if (min_examples < 1) throw std::invalid_argument("min_examples must be >= 1");
  if (min_output_classes < 1) {
    throw std::invalid_argument("min_output_classes must be >= 1");
  }
  if (!(min_evenness >= 0.0 && min_evenness <= 1.0)) {
    throw std::invalid_argument("min_evenness must be in [0, 1]");
  }
  if (!(english_min_charset_fraction >= 0.0 &&
        english_min_charset_fraction <= 1.0)) {
    throw std::invalid_argument("english_min_charset_fraction must be in [0, 1]");
  }
  if (!(english_min_stopword_rate >= 0.0 && english_min_stopword_rate <= 1.0)) {
    throw std::invalid_argument("english_min_stopword_rate must be in [0, 1]");
  }
}

std::vector<std::string> TaskStageNames() {
  return {std::string(kStageMaxDomain),    std::string(kStageTaskMinRows),
          std::string(kStageOneToMany),    std::string(kStageMinClasses),
          std::string(kStageNonEnglishOutput), std::string(kStageClassBalance)};
}

double ShannonEvenness(std::span<const std::uint64_t> class_counts) {
  if (class_counts.empty()) {
    throw std::invalid_argument("evenness needs at least one class");
  }
  double total = 0.0;
  for (std::uint64_t c : class_counts) {
    if (c == 0) throw std::invalid_argument("class counts must be positive");
    total += static_cast<double>(c);
  }
  if (class_counts.size() == 1) return 0.0;
  double entropy = 0.0;
  for (std::uint64_t c : class_counts) {
    const double p = static_cast<double>(c) / total;
    entropy -= p * std::log(p);
  }
  const double e =
      entropy / std::log(static_cast<double>(class_counts.size()));
  return std::clamp(e, 0.0, 1.0);
}

double ShannonEvenness(const std::map<std::string, std::uint64_t>& class_counts) {
  std::vector<std::uint64_t> counts;
  counts.reserve(class_counts.size());
  for (const auto& [label, n] : class_counts) counts.push_back(n);
  return ShannonEvenness(counts);
}

namespace {

struct PairHash {
  std::size_t operator()(const Example* e) const {
    return std::hash<std::string>()(e->input) * 31u ^
           std::hash<std::string>()(e->output);
  }
};
struct PairEq {
  bool operator()(const Example* a, const Example* b) const { return *a == *b; }
};

}  // namespace

std::vector<Example> CollapseDuplicatePairs(const std::vector<Example>& examples) {
  std::unordered_set<const Example*, PairHash, PairEq> seen;
  seen.reserve(examples.size());
  std::vector<Example> out;
  out.reserve(examples.size());
  for (const Example& e : examples) {
    if (seen.insert(&e).second) out.push_back(e);
  }
  return out;
}

bool HasOneToMany(const std::vector<Example>& examples) {
  std::unordered_map<std::string_view, std::string_view> first_output;
  first_output.reserve(examples.size());
  for (const Example& e : examples) {
    auto [it, inserted] = first_output.emplace(e.input, e.output);
    if (!inserted && it->second != e.output) return true;
  }
  return false;
}

OneToManyResult RejectOneToMany(const CandidateTask& task) {
  OneToManyResult r;
  r.examples = CollapseDuplicatePairs(task.task.examples);
  r.accepted = !HasOneToMany(r.examples);
  return r;
}

namespace {

struct Evaluation {
  // Indices of the first occurrence of each distinct (input, output) pair.
  std::vector<std::size_t> kept;
  std::string_view stage;
};

// Examples held as rendered strings.
struct ExampleSource {
  const std::vector<Example>& examples;
  std::size_t size() const { return examples.size(); }
  int CompareInput(std::size_t a, std::size_t b) const {
    return examples[a].input.compare(examples[b].input);
  }
  std::string_view Output(std::size_t i) const { return examples[i].output; }
};

// Examples of one target column, compared as if rendered. The rendered input
// of a row is lead + v[0] + joins[0] + v[1] + joins[1] + ... where v are the
// non-target cells in column order.
class ColumnSource {
 public:
  ColumnSource(const RawTable& table, std::size_t target, std::vector<std::size_t> rows)
      : table_(table), target_(target), rows_(std::move(rows)) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      if (c != target) cols_.push_back(c);
    }
    for (std::size_t i = 0; i < cols_.size(); ++i) {
      const std::size_t next = i + 1 < cols_.size() ? cols_[i + 1] : target;
      joins_.push_back(" [" + table.header[next] + "] ");
    }
  }
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::size_t>& rows() const { return rows_; }
  std::string_view Output(std::size_t i) const { return table_.rows[rows_[i]][target_]; }

  int CompareInput(std::size_t a, std::size_t b) const {
    const Row& ra = table_.rows[rows_[a]];
    const Row& rb = table_.rows[rows_[b]];
    std::size_t i = 0;
    while (i < cols_.size() && ra[cols_[i]] == rb[cols_[i]]) ++i;
    if (i == cols_.size()) return 0;
    Cursor x{ra, i, false, ra[cols_[i]]};
    Cursor y{rb, i, false, rb[cols_[i]]};
    while (true) {
      const bool x_more = Fill(x), y_more = Fill(y);
      if (!x_more || !y_more) return x_more ? 1 : (y_more ? -1 : 0);
      const std::size_t n = std::min(x.cur.size(), y.cur.size());
      if (int c = x.cur.substr(0, n).compare(y.cur.substr(0, n)); c != 0) return c;
      x.cur.remove_prefix(n);
      y.cur.remove_prefix(n);
    }
  }

 private:
  struct Cursor {
    const Row& row;
    std::size_t index;
    bool in_join = false;
    std::string_view cur;
  };
  // Moves to the next non-empty segment; false at the end.
  bool Fill(Cursor& c) const {
    while (c.cur.empty()) {
      if (!c.in_join) {
        c.in_join = true;
        c.cur = joins_[c.index];
      } else {
        if (++c.index == cols_.size()) return false;
        c.in_join = false;
        c.cur = c.row[cols_[c.index]];
      }
    }
    return true;
  }

  const RawTable& table_;
  std::size_t target_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::vector<std::string> joins_;
};

template <typename Source>
Evaluation Evaluate(const Source& src, const TaskFilterConfig& cfg) {
  Evaluation ev;
  // Sorting by (input, output, position) groups duplicate pairs and puts
  // each group's first occurrence in front.
  std::vector<std::size_t> order(src.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (int c = src.CompareInput(a, b); c != 0) return c < 0;
    if (int c = src.Output(a).compare(src.Output(b)); c != 0) return c < 0;
    return a < b;
  });
  bool one_to_many = false;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && src.CompareInput(order[k - 1], order[k]) == 0) {
      if (src.Output(order[k - 1]) == src.Output(order[k])) continue;
      one_to_many = true;
    }
    ev.kept.push_back(order[k]);
  }
  std::sort(ev.kept.begin(), ev.kept.end());
  if (ev.kept.size() < cfg.min_examples) {
    ev.stage = kStageTaskMinRows;
    return ev;
  }
  if (one_to_many) {
    ev.stage = kStageOneToMany;
    return ev;
  }
  std::vector<std::string_view> labels;
  labels.reserve(ev.kept.size());
  for (std::size_t i : ev.kept) labels.push_back(src.Output(i));
  std::sort(labels.begin(), labels.end());
  std::vector<std::uint64_t> counts;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k == 0 || labels[k] != labels[k - 1]) {
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }
  if (counts.size() < cfg.min_output_classes) {
    ev.stage = kStageMinClasses;
    return ev;
  }

  EnglishCheck english;
  for (std::size_t i : ev.kept) english.Add(src.Output(i));
  TableFilterConfig thresholds;
  thresholds.english_min_charset_fraction = cfg.english_min_charset_fraction;
  thresholds.english_min_stopword_rate = cfg.english_min_stopword_rate;
  if (!english.Passes(thresholds)) {
    ev.stage = kStageNonEnglishOutput;
    return ev;
  }

  // Entropy summation order must not depend on label order.
  std::sort(counts.begin(), counts.end());
  if (!PassesClassBalance(ShannonEvenness(counts), cfg.min_evenness)) ev.stage = kStageClassBalance;
  return ev;
}

template <typename C>
StageOutcome Finish(C&& candidate, const Evaluation& ev) {
  if (!ev.stage.empty()) return {std::nullopt, ev.stage};
  auto& src = candidate.task;
  auto take = [](auto& v) -> decltype(auto) {
    if constexpr (std::is_rvalue_reference_v<C&&>) {
      return std::move(v);
    } else {
      return std::as_const(v);
    }
  };
  Task task;
  task.task_id = take(src.task_id);
  task.website = take(src.website);
  task.url = take(src.url);
  task.page_title = take(src.page_title);
  task.target_header = take(src.target_header);
  task.examples.reserve(ev.kept.size());
  for (std::size_t i : ev.kept) task.examples.push_back(take(src.examples[i]));
  return {std::move(task), {}};
}

}  // namespace

StageOutcome EvaluateAfterCap(const CandidateTask& candidate, const TaskFilterConfig& cfg) {
  return Finish(candidate, Evaluate(ExampleSource{candidate.task.examples}, cfg));
}

StageOutcome EvaluateAfterCap(CandidateTask&& candidate, const TaskFilterConfig& cfg) {
  const Evaluation ev = Evaluate(ExampleSource{candidate.task.examples}, cfg);
  return Finish(std::move(candidate), ev);
}

std::vector<ColumnOutcome> EvaluateColumns(const RawTable& table, const TaskFilterConfig& cfg) {
  const std::size_t cols = table.column_count();
  std::vector<char> blank(table.row_count() * cols);
  std::vector<std::size_t> filled(table.row_count(), 0);
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      blank[r * cols + c] = IsBlank(table.rows[r][c]);
      filled[r] += !blank[r * cols + c];
    }
  }
  std::vector<ColumnOutcome> out(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<std::size_t> rows;
    rows.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      // The target cell and at least one input cell must be non-blank.
      if (!blank[r * cols + j] && filled[r] >= 2) rows.push_back(r);
    }
    const ColumnSource src(table, j, std::move(rows));
    const Evaluation ev = Evaluate(src, cfg);
    out[j].stage = ev.stage;
    if (ev.stage.empty()) {
      out[j].rows.reserve(ev.kept.size());
      for (std::size_t i : ev.kept) out[j].rows.push_back(src.rows()[i]);
    }
  }
  return out;
}

void WebsiteCap::Offer(std::string_view website, std::uint64_t score,
                       std::uint64_t seq, std::uint8_t tag) {
  if (seq >> 56 != 0) throw std::out_of_range("cap sequence number too large");
  ++offered_;
  auto it = heaps_.find(std::string(website));
  if (it == heaps_.end()) it = heaps_.emplace(std::string(website), std::vector<Entry>{}).first;
  std::vector<Entry>& heap = it->second;
  const Entry entry{score, seq << 8 | tag};
  if (heap.size() < cap_) {
    heap.push_back(entry);
    std::push_heap(heap.begin(), heap.end());
  } else if (entry < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = entry;
    std::push_heap(heap.begin(), heap.end());
  }
}

WebsiteCap::Result WebsiteCap::Finish() {
  Result r;
  for (auto& [site, heap] : heaps_) {
    for (const Entry& e : heap) {
      r.kept.push_back(Kept{e.seq_tag >> 8, static_cast<std::uint8_t>(e.seq_tag & 0xFF)});
    }
    std::vector<Entry>().swap(heap);
  }
  heaps_.clear();
  std::sort(r.kept.begin(), r.kept.end(),
            [](const Kept& a, const Kept& b) { return a.seq < b.seq; });
  r.capped = offered_ - r.kept.size();
  offered_ = 0;
  return r;
}

CapResult CapPerWebsite(std::vector<CandidateTask> tasks,
                        const TaskFilterConfig& cfg) {
  WebsiteCap cap(cfg.max_tasks_per_website);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    cap.Offer(tasks[i].task.website, CapScore(cfg.cap_seed, tasks[i].task.task_id),
              i, 0);
  }
  WebsiteCap::Result kept = cap.Finish();
  CapResult out;
  out.capped = kept.capped;
  out.kept.reserve(kept.kept.size());
  for (const auto& k : kept.kept) out.kept.push_back(std::move(tasks[k.seq]));
  return out;
}

TaskFilterResult ApplyTaskFilters(const std::vector<CandidateTask>& tasks,
                                  const TaskFilterConfig& cfg) {
  TaskFilterResult result;
  result.report = FilterReport::Empty(ReportScope::kTasks, TaskStageNames());
  WebsiteCap cap(cfg.max_tasks_per_website);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    result.report.Admit();
    cap.Offer(tasks[i].task.website, CapScore(cfg.cap_seed, tasks[i].task.task_id),
              i, 0);
  }
  WebsiteCap::Result kept = cap.Finish();
  result.report.Reject(kStageMaxDomain, kept.capped);
  for (const auto& k : kept.kept) {
    StageOutcome outcome = EvaluateAfterCap(tasks[k.seq], cfg);
    if (outcome.task) {
      result.report.Accept();
      result.tasks.push_back(std::move(*outcome.task));
    } else {
      result.report.Reject(outcome.stage);
    }
  }
  return result;
}

}  // namespace tablefew
