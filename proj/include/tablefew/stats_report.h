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

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tablefew/codec.h"
#include "tablefew/model.h"

namespace tablefew {

// Pointwise sum. Throws std::invalid_argument unless scope and stage names
// match.
FilterReport MergeReports(const FilterReport& a, const FilterReport& b);

struct HistogramBucket {
  std::string label;
  std::size_t lo = 0;
  // Inclusive; SIZE_MAX for the open bucket.
  std::size_t hi = 0;
  std::uint64_t count = 0;
};

struct WebsiteShare {
  std::string website;
  std::uint64_t tasks = 0;
  double fraction = 0.0;
};

struct DatasetStats {
  std::uint64_t task_count = 0;
  std::uint64_t example_count = 0;
  std::uint64_t website_count = 0;
  // "<6" (only populated by capped samples), 6-9, 10-19, 20-49, 50-99, >=100.
  std::vector<HistogramBucket> histogram;
  double median_examples = 0.0;
  // Up to 20, by task count descending then website ascending.
  std::vector<WebsiteShare> top_websites;
};

class StatsAccumulator {
 public:
  StatsAccumulator();
  void Add(const Task& task);
  DatasetStats Finish() const;

 private:
  DatasetStats stats_;
  std::vector<std::size_t> example_counts_;
  std::unordered_map<std::string, std::uint64_t> sites_;
};

DatasetStats ComputeDatasetStats(const std::vector<Task>& tasks);
DatasetStats ComputeDatasetStats(std::istream& task_jsonl);

OrderedJson StatsToJson(const DatasetStats& stats);

}  // namespace tablefew
