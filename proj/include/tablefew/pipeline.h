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
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tablefew/codec.h"
#include "tablefew/ingest.h"
#include "tablefew/model.h"
#include "tablefew/table_filters.h"
#include "tablefew/task_filters.h"

namespace tablefew {

// Invalid build configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string field)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct BuildConfig {
  InputFormat format = InputFormat::kWdc;
  TableFilterConfig tables;
  TaskFilterConfig tasks;
};

// Every effective parameter, in fixed key order.
OrderedJson BuildConfigToJson(const BuildConfig& config);

// Overlays `value` ({"table_filters":{...},"task_filters":{...}}) onto
// `base`. Unknown keys, wrong types and out-of-range values raise
// ConfigError.
BuildConfig BuildConfigFromJson(const nlohmann::json& value, BuildConfig base = {});

// FNV-1a/64 of the compact JSON of BuildConfigToJson.
std::uint64_t ConfigDigest(const BuildConfig& config);

// Table-scope stage names, in cascade order: the ingest rejections
// followed by the table filters.
std::vector<std::string> TableStageNames();

struct BuildOptions {
  // 0 means one worker per hardware thread.
  unsigned jobs = 1;
  // Lines handed to one worker per batch.
  std::size_t chunk_lines = 1024;
  // Directory for the temporary survivor spill file; empty means the
  // system temp directory.
  std::filesystem::path spill_dir;
};

struct BuildResult {
  FilterReport tables;
  FilterReport tasks;
  IngestLog ingest;
  DatasetManifest manifest;
};

// ingest -> table filters -> task builder -> task filters. Tasks are
// written to `tasks_out` as JSONL in corpus order. Output is identical for
// every `jobs` value. Memory is bounded by the batch size plus the
// per-website cap state.
BuildResult RunBuild(std::istream& corpus, std::ostream& tasks_out,
                     const BuildConfig& config, const BuildOptions& options = {});

}  // namespace tablefew
