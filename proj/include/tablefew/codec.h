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
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tablefew/model.h"

namespace tablefew {

using OrderedJson = nlohmann::ordered_json;

// Single-line JSON, UTF-8 passed through unescaped, fixed key order.
std::string DumpCompact(const OrderedJson& value);

// Appends `s` as a JSON string literal, byte-identical to DumpCompact.
void AppendJsonString(std::string& out, std::string_view s);

// One JSONL line (no trailing newline) with keys task_id, website, url,
// page_title, target_header, examples.
std::string EncodeTask(const Task& task);

// EncodeTask of the task for target column `target` of `table` holding the
// given rows, rendered straight into the output.
std::string EncodeColumnTask(const RawTable& table, std::size_t target,
                             std::span<const std::size_t> rows);

// Inverse of EncodeTask. Throws ParseError (malformed JSON, with
// `line_number`), SchemaError (missing or mistyped key) or ValidationError.
Task DecodeTask(std::string_view line, std::size_t line_number = 0,
                std::size_t min_examples = kMinTaskExamples);

// {scope, initial, stages:[{name, rejected}], remaining}
OrderedJson ReportToJson(const FilterReport& report);
FilterReport ReportFromJson(const nlohmann::json& value);

// Stage table in the style "tables initial / rejected <stage> / tables
// remaining" with right-aligned signed counts.
std::string ReportToText(const FilterReport& report);

OrderedJson ManifestToJson(const DatasetManifest& manifest);

std::string EncodeAnnotation(const AnnotationRecord& record);
AnnotationRecord DecodeAnnotation(std::string_view line,
                                  std::size_t line_number = 0);

// Typed accessors that throw SchemaError naming the key.
const nlohmann::json& RequireKey(const nlohmann::json& object,
                                 std::string_view key);
std::string RequireString(const nlohmann::json& object, std::string_view key);
std::int64_t RequireInt(const nlohmann::json& object, std::string_view key);

// Parses one JSON line, converting library errors into ParseError.
nlohmann::json ParseJsonLine(std::string_view line, std::size_t line_number);

}  // namespace tablefew
