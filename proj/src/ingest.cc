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

#include "tablefew/ingest.h"

#include <charconv>
#include <cstdlib>
#include <ios>
#include <stdexcept>
#include <string>

#include <rapidjson/error/en.h>
#include <rapidjson/memorystream.h>
#include <rapidjson/reader.h>

#include "tablefew/codec.h"
#include "tablefew/text.h"

namespace tablefew {

using nlohmann::json;

InputFormat ParseInputFormat(std::string_view name) {
  if (name == "wdc") return InputFormat::kWdc;
  if (name == "canonical") return InputFormat::kCanonical;
  throw std::invalid_argument("unknown input format: " + std::string(name));
}

std::string_view InputFormatName(InputFormat format) {
  return format == InputFormat::kWdc ? "wdc" : "canonical";
}

namespace {

using Matrix = std::vector<std::vector<std::string>>;

// Streams one record: the matrix key is read straight into cells, every
// other top-level key into `meta` (nested containers are kept as empty
// placeholders, which is enough for type checks). Numbers arrive as their
// source lexemes so numeric cells keep their original spelling.
class RecordSax : public rapidjson::BaseReaderHandler<rapidjson::UTF8<>, RecordSax> {
 public:
  explicit RecordSax(std::string_view matrix_key) : matrix_key_(matrix_key) {}

  json meta = json::object();
  std::optional<Matrix> matrix;

  bool Null() { return Scalar(json(nullptr), {}); }
  bool Bool(bool v) { return Scalar(json(v), v ? "true" : "false"); }
  bool RawNumber(const char* str, rapidjson::SizeType len, bool) {
    const std::string_view lexeme(str, len);
    if (depth_ != 1) return Scalar(json(), lexeme);
    std::int64_t i = 0;
    const auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), i);
    if (ec == std::errc() && ptr == lexeme.data() + lexeme.size()) {
      return Scalar(json(i), lexeme);
    }
    return Scalar(json(std::strtod(std::string(lexeme).c_str(), nullptr)), lexeme);
  }
  bool String(const char* str, rapidjson::SizeType len, bool) {
    const std::string_view v(str, len);
    if (depth_ == 3 && in_matrix_) return Scalar(json(), v);
    return Scalar(json(std::string(v)), {});
  }

  bool Key(const char* str, rapidjson::SizeType len, bool) {
    if (depth_ == 1) {
      key_.assign(str, len);
      in_matrix_ = key_ == matrix_key_;
      if (in_matrix_) matrix.reset();
    }
    return true;
  }

  bool StartObject() { return Open(false); }
  bool StartArray() { return Open(true); }
  bool EndObject(rapidjson::SizeType) { return Close(); }
  bool EndArray(rapidjson::SizeType) { return Close(); }

 private:
  bool Scalar(json value, std::string_view text) {
    if (depth_ == 0) throw SchemaError("record must be a JSON object", "");
    if (depth_ == 1) {
      meta[key_] = std::move(value);
      if (in_matrix_) matrix.reset();
    } else if (in_matrix_ && depth_ == 2) {
      throw SchemaError("key " + key_ + " must hold arrays", key_);
    } else if (in_matrix_ && depth_ == 3) {
      std::string cell(text);
      NormalizeWhitespaceInPlace(cell);
      matrix->back().push_back(std::move(cell));
    }
    return true;
  }

  bool Open(bool array) {
    if (depth_ == 0 && array) throw SchemaError("record must be a JSON object", "");
    if (depth_ == 1) {
      if (in_matrix_ && array) {
        matrix.emplace();
        meta.erase(key_);
      } else {
        meta[key_] = array ? json::array() : json::object();
        if (in_matrix_) matrix.reset();
      }
    } else if (in_matrix_ && depth_ == 2) {
      if (!array) throw SchemaError("key " + key_ + " must hold arrays", key_);
      matrix->emplace_back();
    } else if (in_matrix_ && depth_ == 3) {
      throw SchemaError("cells in " + key_ + " must be scalars", key_);
    }
    ++depth_;
    return true;
  }

  bool Close() {
    --depth_;
    if (depth_ == 1) in_matrix_ = false;
    return true;
  }

  std::string_view matrix_key_;
  std::string key_;
  int depth_ = 0;
  bool in_matrix_ = false;
};

Matrix TakeMatrix(RecordSax& sax, std::string_view key) {
  if (!sax.matrix) {
    if (!sax.meta.contains(key)) {
      throw SchemaError("missing key: " + std::string(key), std::string(key));
    }
    throw SchemaError("key " + std::string(key) + " must be an array", std::string(key));
  }
  Matrix out = std::move(*sax.matrix);
  for (const auto& inner : out) {
    if (inner.size() != out.front().size()) {
      throw ValidationError("relation is not rectangular");
    }
  }
  return out;
}

Matrix Transpose(Matrix m) {
  if (m.empty()) return {};
  Matrix t(m.front().size());
  for (auto& col : t) col.reserve(m.size());
  for (auto& row : m) {
    for (std::size_t c = 0; c < row.size(); ++c) t[c].push_back(std::move(row[c]));
  }
  return t;
}

std::string OptionalString(const json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw SchemaError("key " + std::string(key) + " must be a string",
                      std::string(key));
  }
  return it->get<std::string>();
}

std::int64_t OptionalInt(const json& j, std::string_view key,
                         std::int64_t fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number_integer()) {
    throw SchemaError("key " + std::string(key) + " must be an integer",
                      std::string(key));
  }
  return it->get<std::int64_t>();
}

Orientation ParseOrientation(const json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return Orientation::kHorizontal;
  if (!it->is_string()) {
    throw SchemaError("key " + std::string(key) + " must be a string",
                      std::string(key));
  }
  const std::string v = AsciiLower(it->get<std::string>());
  if (v == "horizontal") return Orientation::kHorizontal;
  if (v == "vertical") return Orientation::kVertical;
  throw SchemaError("unknown orientation: " + it->get<std::string>(),
                    std::string(key));
}

CorpusRecord ParseWdc(const json& j, Matrix relation) {
  CorpusRecord r;
  r.relation = std::move(relation);
  r.url = RequireString(j, "url");
  r.page_title = OptionalString(j, "pageTitle");
  r.orientation = ParseOrientation(j, "tableOrientation");
  r.table_index = OptionalInt(j, "tableNum", 0);

  // headerPosition is a WDC enum string or an explicit row index.
  std::optional<bool> position_says_header;
  if (auto it = j.find("headerPosition"); it != j.end() && !it->is_null()) {
    if (it->is_number_integer()) {
      r.header_row_index = it->get<std::int64_t>();
      position_says_header = true;
    } else if (it->is_string()) {
      const std::string& pos = it->get_ref<const std::string&>();
      if (pos == "FIRST_ROW" || pos == "FIRST_COLUMN") {
        r.header_row_index = 0;
        position_says_header = true;
      } else if (pos == "NONE") {
        position_says_header = false;
      } else {
        r.header_row_index = -1;
        position_says_header = true;
      }
    } else {
      throw SchemaError("key headerPosition must be a string or integer",
                        "headerPosition");
    }
  }
  if (auto it = j.find("hasHeader"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) {
      throw SchemaError("key hasHeader must be a boolean", "hasHeader");
    }
    r.has_header = it->get<bool>();
  } else {
    r.has_header = position_says_header.value_or(false);
  }
  return r;
}

CorpusRecord ParseCanonical(const json& j, Matrix rows) {
  CorpusRecord r;
  // Canonical files are row-major; the record stores columns.
  r.relation = Transpose(std::move(rows));
  r.url = RequireString(j, "url");
  r.page_title = OptionalString(j, "page_title");
  r.orientation = ParseOrientation(j, "orientation");
  r.table_index = OptionalInt(j, "table_index", 0);
  auto it = j.find("header_row_index");
  if (it == j.end() || it->is_null()) {
    r.has_header = false;
  } else {
    r.header_row_index = OptionalInt(j, "header_row_index", 0);
    r.has_header = r.header_row_index >= 0;
  }
  return r;
}

}  // namespace

CorpusRecord ParseCorpusLine(std::string_view line, InputFormat format,
                             std::size_t line_number) {
  const std::string_view key = format == InputFormat::kWdc ? "relation" : "rows";
  RecordSax sax(key);
  rapidjson::Reader reader;
  rapidjson::MemoryStream stream(line.data(), line.size());
  if (!IsValidUtf8(line)) {
    throw ParseError("line " + std::to_string(line_number) + ": invalid UTF-8", line_number);
  }
  constexpr unsigned kFlags = rapidjson::kParseNumbersAsStringsFlag;
  if (const rapidjson::ParseResult ok = reader.Parse<kFlags>(stream, sax); !ok) {
    throw ParseError("line " + std::to_string(line_number) + ": " +
                         rapidjson::GetParseError_En(ok.Code()) + " at offset " +
                         std::to_string(ok.Offset()),
                     line_number);
  }
  Matrix matrix = TakeMatrix(sax, key);
  return format == InputFormat::kWdc ? ParseWdc(sax.meta, std::move(matrix))
                                     : ParseCanonical(sax.meta, std::move(matrix));
}

void IngestLog::RecordError(std::size_t line, std::string message) {
  ++error_count;
  if (errors.size() < kMaxStoredErrors) {
    errors.push_back(IngestError{line, std::move(message)});
  }
}

IngestLog ParseCorpusStream(std::istream& input, InputFormat format,
                            const RecordSink& sink) {
  if (!input.good() && !input.eof()) {
    throw std::ios_base::failure("corpus stream is not readable");
  }
  IngestLog log;
  std::string line;
  while (std::getline(input, line)) {
    ++log.lines_read;
    if (IsBlank(line)) continue;
    try {
      CorpusRecord record = ParseCorpusLine(line, format, log.lines_read);
      ++log.records;
      sink(std::move(record));
    } catch (const std::exception& e) {
      log.RecordError(log.lines_read, e.what());
    }
  }
  if (input.bad()) {
    throw std::ios_base::failure("read error in corpus stream");
  }
  return log;
}

OrientResult OrientRowwise(const CorpusRecord& record) {
  return OrientRowwise(CorpusRecord(record));
}

OrientResult OrientRowwise(CorpusRecord&& record) {
  if (!record.has_header) return {std::nullopt, kRejectNoHeader};

  Matrix rows = record.orientation == Orientation::kVertical
                    ? std::move(record.relation)
                    : Transpose(std::move(record.relation));
  if (record.header_row_index < 0 ||
      static_cast<std::size_t>(record.header_row_index) >= rows.size() ||
      rows[static_cast<std::size_t>(record.header_row_index)].empty()) {
    return {std::nullopt, kRejectBadHeaderIndex};
  }
  RawTable table;
  table.website = WebsiteFromUrl(record.url);
  if (table.website.empty()) return {std::nullopt, kRejectBadUrl};
  table.url = std::move(record.url);
  table.page_title = NormalizeWhitespace(record.page_title);
  table.table_index = record.table_index;
  const auto header_at = static_cast<std::size_t>(record.header_row_index);
  table.header = std::move(rows[header_at]);
  rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(header_at));
  table.rows = std::move(rows);
  return {std::move(table), {}};
}

}  // namespace tablefew
