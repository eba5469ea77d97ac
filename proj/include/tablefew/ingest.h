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
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tablefew/model.h"

namespace tablefew {

enum class InputFormat { kWdc, kCanonical };

InputFormat ParseInputFormat(std::string_view name);
std::string_view InputFormatName(InputFormat format);

enum class Orientation { kHorizontal, kVertical };

// One corpus table as stored on disk. `relation` is column-major: each
// inner list is one column of a horizontal table (WDC convention).
struct CorpusRecord {
  std::vector<std::vector<std::string>> relation;
  std::string url;
  std::string page_title;
  bool has_header = false;
  std::int64_t header_row_index = 0;
  Orientation orientation = Orientation::kHorizontal;
  std::int64_t table_index = 0;

  bool operator==(const CorpusRecord&) const = default;
};

// Parses one JSONL line. Cell text is whitespace-normalized. Throws
// ParseError, SchemaError, or ValidationError (non-rectangular relation).
CorpusRecord ParseCorpusLine(std::string_view line, InputFormat format,
                             std::size_t line_number = 0);

struct IngestError {
  std::size_t line = 0;
  std::string message;
};

struct IngestLog {
  // Entries beyond kMaxStoredErrors are counted but not stored.
  static constexpr std::size_t kMaxStoredErrors = 1000;

  std::size_t lines_read = 0;
  std::size_t records = 0;
  std::size_t error_count = 0;
  std::vector<IngestError> errors;

  void RecordError(std::size_t line, std::string message);
};

using RecordSink = std::function<void(CorpusRecord&&)>;

// Streams `input` line by line, calling `sink` once per well-formed record
// in input order. Blank lines are skipped. Malformed lines are logged and
// never abort the stream. Throws std::ios_base::failure if the stream is
// not readable.
IngestLog ParseCorpusStream(std::istream& input, InputFormat format,
                            const RecordSink& sink);

// Reject reasons produced by OrientRowwise.
inline constexpr std::string_view kRejectNoHeader = "no-header";
inline constexpr std::string_view kRejectBadHeaderIndex = "bad-header-index";
inline constexpr std::string_view kRejectBadUrl = "bad-url";

struct OrientResult {
  std::optional<RawTable> table;
  // Empty when `table` is set.
  std::string_view reject_reason;
};

// Turns a record into a row-wise table. Vertical relations are transposed
// so that each instance is a row; the header row is removed from the data
// rows.
OrientResult OrientRowwise(const CorpusRecord& record);
OrientResult OrientRowwise(CorpusRecord&& record);

}  // namespace tablefew
