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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tablefew {

// Malformed input text. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed JSON that lacks a required key or has a wrongly typed value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::string key)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A decoded value that violates a type invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Row = std::vector<std::string>;

// A normalized row-wise table with provenance.
struct RawTable {
  std::string website;
  std::string url;
  std::string page_title;
  std::vector<std::string> header;
  std::vector<Row> rows;
  std::int64_t table_index = 0;

  std::size_t column_count() const { return header.size(); }
  std::size_t row_count() const { return rows.size(); }

  bool operator==(const RawTable&) const = default;
};

// Throws ValidationError unless every row matches the header width and the
// header is non-empty.
void ValidateRawTable(const RawTable& table);

struct Example {
  std::string input;
  std::string output;

  bool operator==(const Example&) const = default;
};

struct Task {
  std::string task_id;
  std::string website;
  std::string url;
  std::string page_title;
  std::string target_header;
  std::vector<Example> examples;

  bool operator==(const Task&) const = default;
};

inline constexpr std::size_t kMinTaskExamples = 6;
// Floor for derived files (samples capped at N examples): one
// demonstration plus one query.
inline constexpr std::size_t kMinSampledExamples = 2;

// Throws ValidationError if `task` has fewer than `min_examples` examples,
// an empty input or output, or an input not ending with the
// "[target_header] " marker.
void ValidateTask(const Task& task,
                  std::size_t min_examples = kMinTaskExamples);

enum class ReportScope { kTables, kTasks };

std::string_view ScopeName(ReportScope scope);
ReportScope ParseScope(std::string_view name);

// Per-stage reject counters. `rejected[i]` belongs to `stage_names[i]`.
struct FilterReport {
  ReportScope scope = ReportScope::kTables;
  std::vector<std::string> stage_names;
  std::uint64_t initial_count = 0;
  std::vector<std::uint64_t> rejected;
  std::uint64_t remaining_count = 0;

  static FilterReport Empty(ReportScope scope,
                            std::vector<std::string> stage_names);

  // Counts one item entering the cascade.
  void Admit() { ++initial_count; }
  void Reject(std::string_view stage, std::uint64_t count = 1);
  void Accept() { ++remaining_count; }

  std::uint64_t RejectedAt(std::string_view stage) const;
  std::uint64_t TotalRejected() const;
  // remaining == initial - sum(rejected).
  bool Balanced() const;

  bool operator==(const FilterReport&) const = default;
};

enum class SampleStrategy { kUniform, kUniquePerWebsite, kStratified };
enum class StratifyKey { kWebsite, kCluster, kQuality };

std::string_view StrategyName(SampleStrategy strategy);
std::string_view StratifyKeyName(StratifyKey key);
StratifyKey ParseStratifyKey(std::string_view name);

struct SamplePlan {
  std::uint64_t seed = 0;
  std::size_t max_tasks = 5000;
  // nullopt means unlimited.
  std::optional<std::size_t> max_examples_per_task = 10;
  SampleStrategy strategy = SampleStrategy::kUniform;
  std::optional<StratifyKey> stratify_key;

  // Throws std::invalid_argument.
  void Validate() const;
};

struct AnnotationRecord {
  std::string task_id;
  int rating = 0;
  std::string annotator;
  std::int64_t timestamp = 0;
  std::optional<std::string> notes;

  bool operator==(const AnnotationRecord&) const = default;
};

inline bool IsValidRating(long long rating) {
  return rating >= 0 && rating <= 2;
}

struct DatasetManifest {
  std::uint64_t config_digest = 0;
  std::uint64_t seed = 0;
  std::uint64_t task_count = 0;
  std::uint64_t example_count = 0;
  std::vector<FilterReport> reports;
};

// Hostname of `url`, lowercased, one leading "www." removed. Empty if the
// URL has no usable host (empty, or characters outside [a-z0-9._-]).
std::string WebsiteFromUrl(std::string_view url);

// `<website>__<hex16>__col<j>`, where hex16 is FNV-1a/64 over
// `url \x1F table_index \x1F target_column_index`.
// Throws std::invalid_argument for an empty website.
std::string MakeTaskId(std::string_view website, std::string_view url,
                       std::int64_t table_index,
                       std::int64_t target_column_index);

}  // namespace tablefew
