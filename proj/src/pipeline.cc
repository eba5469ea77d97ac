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

#include "tablefew/pipeline.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <random>
#include <thread>

#include "tablefew/hash.h"
#include "tablefew/stats_report.h"
#include "tablefew/task_builder.h"
#include "tablefew/text.h"

namespace tablefew {

using nlohmann::json;

OrderedJson BuildConfigToJson(const BuildConfig& config) {
  OrderedJson tables;
  tables["min_unique_columns"] = config.tables.min_unique_columns;
  tables["min_unique_rows"] = config.tables.min_unique_rows;
  tables["max_junk_fraction"] = config.tables.max_junk_fraction;
  tables["english_min_charset_fraction"] = config.tables.english_min_charset_fraction;
  tables["english_min_stopword_rate"] = config.tables.english_min_stopword_rate;
  OrderedJson tasks;
  tasks["max_tasks_per_website"] = config.tasks.max_tasks_per_website;
  tasks["min_examples"] = config.tasks.min_examples;
  tasks["min_output_classes"] = config.tasks.min_output_classes;
  tasks["min_evenness"] = config.tasks.min_evenness;
  tasks["cap_seed"] = config.tasks.cap_seed;
  tasks["english_min_charset_fraction"] = config.tasks.english_min_charset_fraction;
  tasks["english_min_stopword_rate"] = config.tasks.english_min_stopword_rate;
  OrderedJson j;
  j["format"] = std::string(InputFormatName(config.format));
  j["table_filters"] = std::move(tables);
  j["task_filters"] = std::move(tasks);
  return j;
}

namespace {

void ReadSize(const json& obj, const std::string& section, const char* key,
              std::size_t& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_unsigned()) {
    throw ConfigError(section + "." + key + " must be a non-negative integer",
                      section + "." + key);
  }
  out = it->get<std::size_t>();
}

void ReadU64(const json& obj, const std::string& section, const char* key,
             std::uint64_t& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_unsigned()) {
    throw ConfigError(section + "." + key + " must be a non-negative integer",
                      section + "." + key);
  }
  out = it->get<std::uint64_t>();
}

void ReadFraction(const json& obj, const std::string& section, const char* key,
                  double& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) {
    throw ConfigError(section + "." + key + " must be a number", section + "." + key);
  }
  out = it->get<double>();
  if (!(out >= 0.0 && out <= 1.0)) {
    throw ConfigError(section + "." + key + " must be in [0, 1]", section + "." + key);
  }
}

void RejectUnknown(const json& obj, const std::string& section,
                   std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return key == k; })) {
      const std::string field = section.empty() ? key : section + "." + key;
      throw ConfigError("unknown config key: " + field, field);
    }
  }
}

void RequirePositive(std::size_t v, const std::string& field) {
  if (v < 1) throw ConfigError(field + " must be >= 1", field);
}

}  // namespace

BuildConfig BuildConfigFromJson(const json& value, BuildConfig base) {
  if (!value.is_object()) throw ConfigError("config must be a JSON object", "");
  RejectUnknown(value, "", {"format", "table_filters", "task_filters"});
  if (auto it = value.find("format"); it != value.end()) {
    if (!it->is_string()) throw ConfigError("format must be a string", "format");
    try {
      base.format = ParseInputFormat(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), "format");
    }
  }
  if (auto it = value.find("table_filters"); it != value.end()) {
    const std::string s = "table_filters";
    if (!it->is_object()) throw ConfigError(s + " must be an object", s);
    RejectUnknown(*it, s,
                  {"min_unique_columns", "min_unique_rows", "max_junk_fraction",
                   "english_min_charset_fraction", "english_min_stopword_rate"});
    auto& t = base.tables;
    ReadSize(*it, s, "min_unique_columns", t.min_unique_columns);
    ReadSize(*it, s, "min_unique_rows", t.min_unique_rows);
    ReadFraction(*it, s, "max_junk_fraction", t.max_junk_fraction);
    ReadFraction(*it, s, "english_min_charset_fraction", t.english_min_charset_fraction);
    ReadFraction(*it, s, "english_min_stopword_rate", t.english_min_stopword_rate);
    RequirePositive(t.min_unique_columns, s + ".min_unique_columns");
    RequirePositive(t.min_unique_rows, s + ".min_unique_rows");
  }
  if (auto it = value.find("task_filters"); it != value.end()) {
    const std::string s = "task_filters";
    if (!it->is_object()) throw ConfigError(s + " must be an object", s);
    RejectUnknown(*it, s,
                  {"max_tasks_per_website", "min_examples", "min_output_classes",
                   "min_evenness", "cap_seed", "english_min_charset_fraction",
                   "english_min_stopword_rate"});
    auto& t = base.tasks;
    ReadSize(*it, s, "max_tasks_per_website", t.max_tasks_per_website);
    ReadSize(*it, s, "min_examples", t.min_examples);
    ReadSize(*it, s, "min_output_classes", t.min_output_classes);
    ReadFraction(*it, s, "min_evenness", t.min_evenness);
    ReadU64(*it, s, "cap_seed", t.cap_seed);
    ReadFraction(*it, s, "english_min_charset_fraction", t.english_min_charset_fraction);
    ReadFraction(*it, s, "english_min_stopword_rate", t.english_min_stopword_rate);
    RequirePositive(t.max_tasks_per_website, s + ".max_tasks_per_website");
    RequirePositive(t.min_examples, s + ".min_examples");
    RequirePositive(t.min_output_classes, s + ".min_output_classes");
  }
  return base;
}

std::uint64_t ConfigDigest(const BuildConfig& config) {
  return Fnv1a(DumpCompact(BuildConfigToJson(config)));
}

std::vector<std::string> TableStageNames() {
  return {std::string(kRejectNoHeader), std::string(kRejectBadHeaderIndex),
          std::string(kRejectBadUrl),   std::string(kStageMinRows),
          std::string(kStageNonEnglish), std::string(kStageJunkTokens)};
}

namespace {

// Tag 0 marks a survivor of the post-cap stages; 1.. index TaskStageNames().
constexpr std::uint8_t kSurvivorTag = 0;

std::uint8_t StageTag(std::string_view stage) {
  static const std::vector<std::string> names = TaskStageNames();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == stage) return static_cast<std::uint8_t>(i);
  }
  throw std::logic_error("unknown task stage");
}

struct CandidateOutcome {
  std::string website;
  std::uint64_t score = 0;
  std::uint8_t tag = kSurvivorTag;
  std::size_t example_count = 0;
  // Encoded task; set only for survivors.
  std::string encoded;
};

struct ChunkOutput {
  FilterReport tables;
  std::vector<IngestError> errors;
  std::vector<CandidateOutcome> candidates;
};

ChunkOutput ProcessChunk(const std::vector<std::string>& lines, std::size_t begin,
                         std::size_t end, std::size_t first_line_number,
                         const BuildConfig& config) {
  ChunkOutput out;
  out.tables = FilterReport::Empty(ReportScope::kTables, TableStageNames());
  for (std::size_t i = begin; i < end; ++i) {
    const std::string& line = lines[i];
    if (IsBlank(line)) continue;
    const std::size_t line_number = first_line_number + i;
    CorpusRecord record;
    try {
      record = ParseCorpusLine(line, config.format, line_number);
    } catch (const std::exception& e) {
      out.errors.push_back(IngestError{line_number, e.what()});
      continue;
    }
    out.tables.Admit();
    OrientResult oriented = OrientRowwise(std::move(record));
    if (!oriented.table) {
      out.tables.Reject(oriented.reject_reason);
      continue;
    }
    TableVerdict verdict = FilterTable(std::move(*oriented.table), config.tables);
    if (!verdict.table) {
      out.tables.Reject(verdict.stage);
      continue;
    }
    out.tables.Accept();
    const RawTable& table = *verdict.table;
    const std::vector<ColumnOutcome> columns = EvaluateColumns(table, config.tasks);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      CandidateOutcome c;
      c.website = table.website;
      c.score = CapScore(config.tasks.cap_seed,
                         MakeTaskId(table.website, table.url, table.table_index,
                                    static_cast<std::int64_t>(j)));
      if (columns[j].stage.empty()) {
        c.example_count = columns[j].rows.size();
        c.encoded = EncodeColumnTask(table, j, columns[j].rows);
      } else {
        c.tag = StageTag(columns[j].stage);
      }
      out.candidates.push_back(std::move(c));
    }
  }
  return out;
}

// Temporary file removed on destruction.
class SpillFile {
 public:
  explicit SpillFile(std::filesystem::path dir) {
    if (dir.empty()) dir = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 16; ++attempt) {
      path_ = dir / ("tablefew-spill-" + Hex16((std::uint64_t{rd()} << 32) ^ rd()) + ".tmp");
      if (!std::filesystem::exists(path_)) break;
    }
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot create spill file " + path_.string());
  }
  ~SpillFile() {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  SpillFile(const SpillFile&) = delete;
  SpillFile& operator=(const SpillFile&) = delete;

  std::ofstream& out() { return out_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

BuildResult RunBuild(std::istream& corpus, std::ostream& tasks_out,
                     const BuildConfig& config, const BuildOptions& options) {
  config.tables.Validate();
  config.tasks.Validate();
  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                    : options.jobs;
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_lines);

  BuildResult result;
  result.tables = FilterReport::Empty(ReportScope::kTables, TableStageNames());
  WebsiteCap cap(config.tasks.max_tasks_per_website);
  SpillFile spill(options.spill_dir);
  std::uint64_t seq = 0;

  std::vector<std::string> batch;
  batch.reserve(chunk * jobs);
  std::size_t lines_before_batch = 0;
  bool eof = false;
  while (!eof) {
    batch.clear();
    std::string line;
    while (batch.size() < chunk * jobs) {
      if (!std::getline(corpus, line)) {
        eof = true;
        break;
      }
      batch.push_back(std::move(line));
    }
    if (corpus.bad()) throw std::ios_base::failure("read error in corpus stream");
    if (batch.empty()) break;

    const std::size_t parts = std::min<std::size_t>(jobs, (batch.size() + chunk - 1) / chunk);
    std::vector<ChunkOutput> outputs(parts);
    const std::size_t per = (batch.size() + parts - 1) / parts;
    auto run = [&](std::size_t p) {
      const std::size_t b = p * per;
      const std::size_t e = std::min(batch.size(), b + per);
      outputs[p] = ProcessChunk(batch, b, e, lines_before_batch + 1, config);
    };
    if (parts == 1) {
      run(0);
    } else {
      std::vector<std::jthread> workers;
      workers.reserve(parts - 1);
      for (std::size_t p = 1; p < parts; ++p) workers.emplace_back(run, p);
      run(0);
    }

    for (ChunkOutput& o : outputs) {
      result.tables = MergeReports(result.tables, o.tables);
      for (IngestError& err : o.errors) {
        result.ingest.RecordError(err.line, std::move(err.message));
      }
      for (CandidateOutcome& c : o.candidates) {
        cap.Offer(c.website, c.score, seq, c.tag);
        if (c.tag == kSurvivorTag) {
          spill.out() << seq << '\t' << c.example_count << '\t' << c.encoded << '\n';
        }
        ++seq;
      }
    }
    lines_before_batch += batch.size();
  }
  result.ingest.lines_read = lines_before_batch;
  result.ingest.records = result.tables.initial_count;
  spill.out().flush();
  if (!spill.out()) throw std::runtime_error("write failed on spill file");

  result.tasks = FilterReport::Empty(ReportScope::kTasks, TaskStageNames());
  result.tasks.initial_count = seq;
  WebsiteCap::Result kept = cap.Finish();
  result.tasks.Reject(kStageMaxDomain, kept.capped);
  const std::vector<std::string> stage_names = TaskStageNames();
  std::vector<WebsiteCap::Kept>& survivors = kept.kept;
  std::erase_if(survivors, [&](const WebsiteCap::Kept& k) {
    if (k.tag == kSurvivorTag) return false;
    result.tasks.Reject(stage_names[k.tag]);
    return true;
  });

  std::uint64_t example_count = 0;
  {
    std::ifstream in(spill.path(), std::ios::binary);
    std::string line;
    std::size_t next = 0;
    while (next < survivors.size() && std::getline(in, line)) {
      const std::size_t tab1 = line.find('\t');
      const std::size_t tab2 = line.find('\t', tab1 + 1);
      std::uint64_t line_seq = 0;
      std::from_chars(line.data(), line.data() + tab1, line_seq);
      if (line_seq != survivors[next].seq) continue;
      std::uint64_t n = 0;
      std::from_chars(line.data() + tab1 + 1, line.data() + tab2, n);
      tasks_out.write(line.data() + tab2 + 1,
                      static_cast<std::streamsize>(line.size() - tab2 - 1));
      tasks_out.put('\n');
      example_count += n;
      ++next;
    }
    if (next != survivors.size()) throw std::runtime_error("spill file is incomplete");
  }
  result.tasks.remaining_count = survivors.size();

  result.manifest.config_digest = ConfigDigest(config);
  result.manifest.seed = config.tasks.cap_seed;
  result.manifest.task_count = survivors.size();
  result.manifest.example_count = example_count;
  result.manifest.reports = {result.tables, result.tasks};
  return result;
}

}  // namespace tablefew
