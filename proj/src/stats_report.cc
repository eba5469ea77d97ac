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

#include "tablefew/stats_report.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tablefew/task_file.h"

namespace tablefew {

FilterReport MergeReports(const FilterReport& a, const FilterReport& b) {
  if (a.scope != b.scope || a.stage_names != b.stage_names ||
      a.rejected.size() != b.rejected.size()) {
    throw std::invalid_argument("cannot merge reports with different shapes");
  }
  FilterReport out = a;
  out.initial_count += b.initial_count;
  out.remaining_count += b.remaining_count;
  for (std::size_t i = 0; i < out.rejected.size(); ++i) {
    out.rejected[i] += b.rejected[i];
  }
  return out;
}

StatsAccumulator::StatsAccumulator() {
  constexpr std::size_t kOpen = std::numeric_limits<std::size_t>::max();
  stats_.histogram = {{"<6", 0, 5, 0},      {"6-9", 6, 9, 0},
                      {"10-19", 10, 19, 0}, {"20-49", 20, 49, 0},
                      {"50-99", 50, 99, 0}, {">=100", 100, kOpen, 0}};
}

void StatsAccumulator::Add(const Task& task) {
  ++stats_.task_count;
  const std::size_t n = task.examples.size();
  stats_.example_count += n;
  example_counts_.push_back(n);
  for (auto& bucket : stats_.histogram) {
    if (n >= bucket.lo && n <= bucket.hi) {
      ++bucket.count;
      break;
    }
  }
  ++sites_[task.website];
}

DatasetStats StatsAccumulator::Finish() const {
  DatasetStats out = stats_;
  out.website_count = sites_.size();
  if (!example_counts_.empty()) {
    std::vector<std::size_t> counts = example_counts_;
    const std::size_t mid = counts.size() / 2;
    std::nth_element(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(mid),
                     counts.end());
    const double upper = static_cast<double>(counts[mid]);
    if (counts.size() % 2 == 1) {
      out.median_examples = upper;
    } else {
      const double lower = static_cast<double>(
          *std::max_element(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(mid)));
      out.median_examples = (lower + upper) / 2.0;
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> sites(sites_.begin(), sites_.end());
  std::sort(sites.begin(), sites.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (sites.size() > 20) sites.resize(20);
  for (const auto& [site, n] : sites) {
    out.top_websites.push_back(WebsiteShare{
        site, n, static_cast<double>(n) / static_cast<double>(stats_.task_count)});
  }
  return out;
}

DatasetStats ComputeDatasetStats(const std::vector<Task>& tasks) {
  StatsAccumulator acc;
  for (const Task& t : tasks) acc.Add(t);
  return acc.Finish();
}

DatasetStats ComputeDatasetStats(std::istream& task_jsonl) {
  StatsAccumulator acc;
  ForEachTask(task_jsonl, [&](Task&& t, std::size_t) { acc.Add(t); },
              kMinSampledExamples);
  return acc.Finish();
}

OrderedJson StatsToJson(const DatasetStats& stats) {
  OrderedJson histogram = OrderedJson::array();
  for (const auto& b : stats.histogram) {
    // The below-floor bucket only appears for capped samples.
    if (b.lo == 0 && b.count == 0) continue;
    OrderedJson j;
    j["bucket"] = b.label;
    j["tasks"] = b.count;
    histogram.push_back(std::move(j));
  }
  OrderedJson top = OrderedJson::array();
  for (const auto& w : stats.top_websites) {
    OrderedJson j;
    j["website"] = w.website;
    j["tasks"] = w.tasks;
    j["fraction"] = w.fraction;
    top.push_back(std::move(j));
  }
  OrderedJson j;
  j["task_count"] = stats.task_count;
  j["example_count"] = stats.example_count;
  j["website_count"] = stats.website_count;
  j["examples_histogram"] = std::move(histogram);
  j["median_examples"] = stats.median_examples;
  j["top_websites"] = std::move(top);
  return j;
}

}  // namespace tablefew
