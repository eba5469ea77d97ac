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

#include "tablefew/codec.h"

#include "tablefew/hash.h"
#include "tablefew/text.h"

#include <array>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <string>

namespace tablefew {

using nlohmann::json;

std::string DumpCompact(const OrderedJson& value) {
  return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

namespace {

// String literal body for valid UTF-8 `s`, without the quotes.
void AppendEscaped(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  static constexpr auto kNeedsEscape = [] {
    std::array<bool, 256> t{};
    for (int c = 0; c < 0x20; ++c) t[c] = true;
    t['"'] = true;
    t['\\'] = true;
    return t;
  }();
  constexpr std::uint64_t kOnes = 0x0101010101010101ull;
  constexpr std::uint64_t kHigh = 0x8080808080808080ull;
  auto has_zero = [](std::uint64_t v) { return (v - kOnes) & ~v & kHigh; };
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Skip eight bytes at a time while none can need escaping.
    while (i + 8 <= s.size()) {
      std::uint64_t w;
      std::memcpy(&w, s.data() + i, 8);
      const std::uint64_t hits = ((w - kOnes * 0x20) & ~w & kHigh) |
                                 has_zero(w ^ (kOnes * '"')) | has_zero(w ^ (kOnes * '\\'));
      if (hits != 0) break;
      i += 8;
    }
    if (i >= s.size()) break;
    const auto c = static_cast<unsigned char>(s[i]);
    if (!kNeedsEscape[c]) continue;
    out.append(s.substr(run, i - run));
    run = i + 1;
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        out += "\\u00";
        out.push_back(kHex[c >> 4]);
        out.push_back(kHex[c & 0xF]);
    }
  }
  out.append(s.substr(run));
}

}  // namespace

void AppendJsonString(std::string& out, std::string_view s) {
  if (!IsValidUtf8(s)) {
    out += DumpCompact(OrderedJson(std::string(s)));
    return;
  }
  out.push_back('"');
  AppendEscaped(out, s);
  out.push_back('"');
}

std::string EncodeTask(const Task& task) {
  std::size_t size = 128 + task.task_id.size() + task.website.size() + task.url.size() +
                     task.page_title.size() + task.target_header.size();
  for (const Example& ex : task.examples) size += 24 + ex.input.size() + ex.output.size();
  std::string out;
  out.reserve(size);
  auto field = [&out](std::string_view key, std::string_view value) {
    out.push_back('"');
    out.append(key);
    out += "\":";
    AppendJsonString(out, value);
    out.push_back(',');
  };
  out.push_back('{');
  field("task_id", task.task_id);
  field("website", task.website);
  field("url", task.url);
  field("page_title", task.page_title);
  field("target_header", task.target_header);
  out += "\"examples\":[";
  for (std::size_t i = 0; i < task.examples.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += "{\"input\":";
    AppendJsonString(out, task.examples[i].input);
    out += ",\"output\":";
    AppendJsonString(out, task.examples[i].output);
    out.push_back('}');
  }
  out += "]}";
  return out;
}

std::string EncodeColumnTask(const RawTable& table, std::size_t target,
                             std::span<const std::size_t> rows) {
  const std::size_t cols = table.column_count();
  // Rendered input: pieces[0] + v[0] + pieces[1] + v[1] + ... + pieces.back().
  std::vector<std::size_t> inputs;
  for (std::size_t c = 0; c < cols; ++c) {
    if (c != target) inputs.push_back(c);
  }
  std::vector<std::string> pieces;
  bool valid = true;
  for (std::size_t i = 0; i <= inputs.size(); ++i) {
    const std::size_t col = i < inputs.size() ? inputs[i] : target;
    pieces.push_back((i == 0 ? "[" : " [") + table.header[col] + "] ");
    valid = valid && IsValidUtf8(pieces.back());
  }

  Task head;
  head.task_id = MakeTaskId(table.website, table.url, table.table_index,
                            static_cast<std::int64_t>(target));
  head.website = table.website;
  head.url = table.url;
  head.page_title = table.page_title;
  head.target_header = table.header[target];
  std::string out = EncodeTask(head);
  out.resize(out.size() - 2);  // reopen the empty examples array
  std::string rendered;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& row = table.rows[rows[k]];
    bool row_valid = valid;
    for (std::size_t c : inputs) row_valid = row_valid && IsValidUtf8(row[c]);
    if (k > 0) out.push_back(',');
    out += "{\"input\":";
    if (row_valid) {
      out.push_back('"');
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        AppendEscaped(out, pieces[i]);
        AppendEscaped(out, row[inputs[i]]);
      }
      AppendEscaped(out, pieces.back());
      out.push_back('"');
    } else {
      rendered.clear();
      for (std::size_t i = 0; i < inputs.size(); ++i) rendered.append(pieces[i]).append(row[inputs[i]]);
      rendered.append(pieces.back());
      AppendJsonString(out, rendered);
    }
    out += ",\"output\":";
    AppendJsonString(out, row[target]);
    out.push_back('}');
  }
  out += "]}";
  return out;
}

json ParseJsonLine(std::string_view line, std::size_t line_number) {
  try {
    return json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_number) + ": " + e.what(),
                     line_number);
  }
}

const json& RequireKey(const json& object, std::string_view key) {
  if (!object.is_object()) {
    throw SchemaError("expected a JSON object", std::string(key));
  }
  auto it = object.find(key);
  if (it == object.end()) {
    throw SchemaError("missing key: " + std::string(key), std::string(key));
  }
  return *it;
}

std::string RequireString(const json& object, std::string_view key) {
  const json& v = RequireKey(object, key);
  if (!v.is_string()) {
    throw SchemaError("key " + std::string(key) + " must be a string",
                      std::string(key));
  }
  return v.get<std::string>();
}

std::int64_t RequireInt(const json& object, std::string_view key) {
  const json& v = RequireKey(object, key);
  if (!v.is_number_integer()) {
    throw SchemaError("key " + std::string(key) + " must be an integer",
                      std::string(key));
  }
  return v.get<std::int64_t>();
}

Task DecodeTask(std::string_view line, std::size_t line_number,
                std::size_t min_examples) {
  const json j = ParseJsonLine(line, line_number);
  Task task;
  task.task_id = RequireString(j, "task_id");
  task.website = RequireString(j, "website");
  task.url = RequireString(j, "url");
  task.page_title = RequireString(j, "page_title");
  task.target_header = RequireString(j, "target_header");
  const json& examples = RequireKey(j, "examples");
  if (!examples.is_array()) {
    throw SchemaError("key examples must be an array", "examples");
  }
  task.examples.reserve(examples.size());
  for (const json& e : examples) {
    task.examples.push_back(
        Example{RequireString(e, "input"), RequireString(e, "output")});
  }
  ValidateTask(task, min_examples);
  return task;
}

OrderedJson ReportToJson(const FilterReport& report) {
  OrderedJson stages = OrderedJson::array();
  for (std::size_t i = 0; i < report.stage_names.size(); ++i) {
    OrderedJson s;
    s["name"] = report.stage_names[i];
    s["rejected"] = report.rejected[i];
    stages.push_back(std::move(s));
  }
  OrderedJson j;
  j["scope"] = std::string(ScopeName(report.scope));
  j["initial"] = report.initial_count;
  j["stages"] = std::move(stages);
  j["remaining"] = report.remaining_count;
  return j;
}

FilterReport ReportFromJson(const json& value) {
  FilterReport r;
  r.scope = ParseScope(RequireString(value, "scope"));
  r.initial_count = static_cast<std::uint64_t>(RequireInt(value, "initial"));
  for (const json& s : RequireKey(value, "stages")) {
    r.stage_names.push_back(RequireString(s, "name"));
    r.rejected.push_back(static_cast<std::uint64_t>(RequireInt(s, "rejected")));
  }
  r.remaining_count =
      static_cast<std::uint64_t>(RequireInt(value, "remaining"));
  return r;
}

std::string ReportToText(const FilterReport& report) {
  const std::string scope(ScopeName(report.scope));
  std::vector<std::pair<std::string, std::string>> lines;
  lines.emplace_back(scope + " initial", std::to_string(report.initial_count));
  for (std::size_t i = 0; i < report.stage_names.size(); ++i) {
    lines.emplace_back("rejected " + report.stage_names[i],
                       "-" + std::to_string(report.rejected[i]));
  }
  lines.emplace_back(scope + " remaining",
                     std::to_string(report.remaining_count));
  std::size_t label_width = 0;
  std::size_t value_width = 0;
  for (const auto& [label, value] : lines) {
    label_width = std::max(label_width, label.size());
    value_width = std::max(value_width, value.size());
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i + 1 == lines.size()) {
      out << std::string(label_width + 2 + value_width, '-') << '\n';
    }
    out << std::left << std::setw(static_cast<int>(label_width))
        << lines[i].first << "  " << std::right
        << std::setw(static_cast<int>(value_width)) << lines[i].second
        << '\n';
  }
  return out.str();
}

OrderedJson ManifestToJson(const DatasetManifest& manifest) {
  OrderedJson reports = OrderedJson::array();
  for (const FilterReport& r : manifest.reports) {
    reports.push_back(ReportToJson(r));
  }
  OrderedJson j;
  j["format"] = 1;
  j["config_digest"] = Hex16(manifest.config_digest);
  j["seed"] = manifest.seed;
  j["task_count"] = manifest.task_count;
  j["example_count"] = manifest.example_count;
  j["reports"] = std::move(reports);
  return j;
}

std::string EncodeAnnotation(const AnnotationRecord& record) {
  OrderedJson j;
  j["task_id"] = record.task_id;
  j["rating"] = record.rating;
  j["annotator"] = record.annotator;
  j["timestamp"] = record.timestamp;
  if (record.notes) j["notes"] = *record.notes;
  return DumpCompact(j);
}

AnnotationRecord DecodeAnnotation(std::string_view line,
                                  std::size_t line_number) {
  const json j = ParseJsonLine(line, line_number);
  AnnotationRecord r;
  r.task_id = RequireString(j, "task_id");
  const std::int64_t rating = RequireInt(j, "rating");
  if (!IsValidRating(rating)) {
    throw ValidationError("line " + std::to_string(line_number) +
                          ": rating must be 0, 1 or 2");
  }
  r.rating = static_cast<int>(rating);
  if (auto it = j.find("annotator"); it != j.end() && it->is_string()) {
    r.annotator = it->get<std::string>();
  }
  if (auto it = j.find("timestamp"); it != j.end() && it->is_number_integer()) {
    r.timestamp = it->get<std::int64_t>();
  }
  if (auto it = j.find("notes"); it != j.end() && it->is_string()) {
    r.notes = it->get<std::string>();
  }
  return r;
}

}  // namespace tablefew
