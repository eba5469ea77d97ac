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

// tablefew: web tables -> few-shot tasks.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tablefew/annotate_server.h"
#include "tablefew/codec.h"
#include "tablefew/embed_slice.h"
#include "tablefew/hash.h"
#include "tablefew/pipeline.h"
#include "tablefew/prompt_render.h"
#include "tablefew/sampler.h"
#include "tablefew/stats_report.h"
#include "tablefew/task_file.h"

namespace {

using tablefew::OrderedJson;

constexpr int kExitError = 1;
constexpr int kExitUnreadableInput = 2;
constexpr int kExitInvalidConfig = 3;
constexpr int kExitPortBusy = 4;
constexpr int kExitAnnotationsUnwritable = 5;

void PrintDigest(const OrderedJson& effective) {
  std::cerr << "config digest: "
            << tablefew::Hex16(tablefew::Fnv1a(tablefew::DumpCompact(effective))) << '\n';
}

bool Readable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return static_cast<bool>(in);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

// --- build ---------------------------------------------------------------

struct BuildArgs {
  std::string input;
  std::string format = "wdc";
  std::string output;
  std::string config;
  std::string report;
  std::string manifest;
  std::string errors;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

int RunBuildCommand(const BuildArgs& args) {
  tablefew::BuildConfig config;
  try {
    config.format = tablefew::ParseInputFormat(args.format);
    if (!args.config.empty()) {
      std::ifstream in(args.config, std::ios::binary);
      if (!in) throw tablefew::ConfigError("cannot read config file " + args.config, "config");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw tablefew::ConfigError(std::string("config is not valid JSON: ") + e.what(),
                                    "config");
      }
      config = tablefew::BuildConfigFromJson(j, config);
    }
    if (args.seed) config.tasks.cap_seed = *args.seed;
  } catch (const tablefew::ConfigError& e) {
    std::cerr << "invalid config (field " << e.field() << "): " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config (field format): " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  PrintDigest(tablefew::BuildConfigToJson(config));

  std::ifstream in(args.input, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read input " << args.input << '\n';
    return kExitUnreadableInput;
  }
  std::ofstream out(args.output, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "cannot write output " << args.output << '\n';
    return kExitError;
  }
  tablefew::BuildOptions options;
  options.jobs = args.jobs;
  std::filesystem::path out_dir = std::filesystem::path(args.output).parent_path();
  options.spill_dir = out_dir.empty() ? std::filesystem::current_path() : out_dir;

  tablefew::BuildResult result = tablefew::RunBuild(in, out, config, options);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + args.output);

  const std::string report_path = args.report.empty() ? args.output + ".report.json" : args.report;
  const std::string manifest_path =
      args.manifest.empty() ? args.output + ".manifest.json" : args.manifest;
  OrderedJson reports = OrderedJson::array();
  reports.push_back(tablefew::ReportToJson(result.tables));
  reports.push_back(tablefew::ReportToJson(result.tasks));
  WriteText(report_path, reports.dump(2) + "\n");
  // Text twin of the report: "x.json" -> "x.txt", anything else gains ".txt".
  std::filesystem::path text_path(report_path);
  text_path = text_path.extension() == ".json" ? text_path.replace_extension(".txt")
                                               : std::filesystem::path(report_path + ".txt");
  WriteText(text_path.string(), tablefew::ReportToText(result.tables) + "\n" +
                                      tablefew::ReportToText(result.tasks));
  WriteText(manifest_path, tablefew::ManifestToJson(result.manifest).dump(2) + "\n");
  if (!args.errors.empty()) {
    std::ostringstream log;
    for (const auto& e : result.ingest.errors) log << e.line << '\t' << e.message << '\n';
    WriteText(args.errors, log.str());
  }

  std::cerr << tablefew::ReportToText(result.tables) << '\n'
            << tablefew::ReportToText(result.tasks);
  if (result.ingest.error_count > 0) {
    std::cerr << result.ingest.error_count << " malformed line(s) skipped\n";
  }
  std::cout << result.manifest.task_count << " tasks, " << result.manifest.example_count
            << " examples -> " << args.output << '\n';
  return 0;
}

// --- sample / slice ------------------------------------------------------

struct SampleArgs {
  std::string input;
  std::string output;
  std::size_t m = 5000;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  std::string strategy = "uniform";
};

int RunSampleCommand(const SampleArgs& args) {
  tablefew::SamplePlan plan;
  plan.seed = args.seed;
  plan.max_tasks = args.m;
  plan.max_examples_per_task =
      args.n == 0 ? std::nullopt : std::optional<std::size_t>(args.n);
  if (args.strategy == "uniform") {
    plan.strategy = tablefew::SampleStrategy::kUniform;
  } else if (args.strategy == "unique_per_website") {
    plan.strategy = tablefew::SampleStrategy::kUniquePerWebsite;
  } else {
    std::cerr << "unknown strategy " << args.strategy << '\n';
    return kExitInvalidConfig;
  }
  try {
    plan.Validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid plan: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  OrderedJson eff;
  eff["command"] = "sample";
  eff["seed"] = plan.seed;
  eff["m"] = plan.max_tasks;
  eff["n"] = args.n;
  eff["strategy"] = std::string(tablefew::StrategyName(plan.strategy));
  PrintDigest(eff);
  if (!Readable(args.input)) {
    std::cerr << "cannot read input " << args.input << '\n';
    return kExitUnreadableInput;
  }
  auto tasks = tablefew::ReadTaskFile(args.input, tablefew::kMinSampledExamples);
  auto result = tablefew::SampleTasks(tasks, plan);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  tablefew::WriteTaskFile(args.output, result.tasks);
  std::cout << result.tasks.size() << " tasks -> " << args.output << '\n';
  return 0;
}

struct SliceArgs {
  std::string input;
  std::string key = "website";
  std::string key_file;
  std::vector<std::string> strata;
  std::size_t per_stratum = 200;
  std::uint64_t seed = 0;
  std::string stem;
};

int RunSliceCommand(const SliceArgs& args) {
  tablefew::StratifyKey key;
  try {
    key = tablefew::ParseStratifyKey(args.key);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalidConfig;
  }
  if (key != tablefew::StratifyKey::kWebsite && args.key_file.empty()) {
    std::cerr << "--key-file is required for key " << args.key << '\n';
    return kExitInvalidConfig;
  }
  OrderedJson eff;
  eff["command"] = "slice";
  eff["seed"] = args.seed;
  eff["key"] = args.key;
  eff["strata"] = args.strata;
  eff["per_stratum"] = args.per_stratum;
  PrintDigest(eff);
  if (!Readable(args.input) || (!args.key_file.empty() && !Readable(args.key_file))) {
    std::cerr << "cannot read input\n";
    return kExitUnreadableInput;
  }
  auto tasks = tablefew::ReadTaskFile(args.input, tablefew::kMinSampledExamples);
  tablefew::Assignments labels;
  if (!args.key_file.empty()) {
    auto load = tablefew::LoadAssignmentFile(args.key_file);
    if (load.duplicate_count > 0) {
      std::cerr << "warning: " << load.duplicate_count << " duplicate assignment(s), last wins\n";
    }
    labels = std::move(load.labels);
  }
  tablefew::StratifiedResult result;
  try {
    result = tablefew::StratifiedSample(tasks, key, labels, args.strata, args.per_stratum,
                                        args.seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalidConfig;
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  const std::string stem =
      args.stem.empty() ? std::filesystem::path(args.input).replace_extension().string() : args.stem;
  for (const auto& [label, picked] : result.strata) {
    const std::string path = tablefew::StratumFileName(stem, label);
    tablefew::WriteTaskFile(path, picked);
    std::cout << picked.size() << " tasks -> " << path << '\n';
  }
  return 0;
}

// --- render / stats / pca ------------------------------------------------

struct RenderArgs {
  std::string input;
  std::string output;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
};

int RunRenderCommand(const RenderArgs& args) {
  OrderedJson eff;
  eff["command"] = "render";
  eff["seed"] = args.seed;
  eff["k"] = args.k;
  eff["budget_chars"] = args.budget;
  PrintDigest(eff);
  std::ifstream in(args.input, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read input " << args.input << '\n';
    return kExitUnreadableInput;
  }
  std::ofstream out(args.output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + args.output);
  const auto stats = tablefew::ExportPairs(
      in, out, args.k, args.seed,
      args.budget == 0 ? std::nullopt : std::optional<std::size_t>(args.budget));
  if (stats.skipped_too_short > 0) {
    std::cerr << "warning: skipped " << stats.skipped_too_short << " task(s) with <= "
              << args.k << " examples\n";
  }
  std::cout << stats.exported << " prompt pairs -> " << args.output << '\n';
  return 0;
}

int RunStatsCommand(const std::string& input, const std::string& output) {
  OrderedJson eff;
  eff["command"] = "stats";
  PrintDigest(eff);
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read input " << input << '\n';
    return kExitUnreadableInput;
  }
  const std::string text = tablefew::StatsToJson(tablefew::ComputeDatasetStats(in)).dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    WriteText(output, text);
  }
  return 0;
}

struct PcaArgs {
  std::string embeddings;
  std::string output;
  std::string model;
  std::size_t out_dim = 128;
  std::uint64_t seed = 0;
};

int RunPcaCommand(const PcaArgs& args) {
  OrderedJson eff;
  eff["command"] = "pca";
  eff["seed"] = args.seed;
  eff["out_dim"] = args.out_dim;
  PrintDigest(eff);
  std::ifstream in(args.embeddings, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read embeddings " << args.embeddings << '\n';
    return kExitUnreadableInput;
  }
  auto pooled = tablefew::PoolTaskEmbeddings(tablefew::ReadEmbeddings(in));
  auto normalized = tablefew::L2Normalize(pooled);
  if (normalized.zero_rows > 0) {
    std::cerr << "warning: " << normalized.zero_rows << " zero task embedding(s)\n";
  }
  tablefew::PcaModel model;
  try {
    model = tablefew::PcaFit(normalized.matrix, args.out_dim);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalidConfig;
  }
  std::ofstream out(args.output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + args.output);
  tablefew::WriteMatrixJsonl(out, tablefew::PcaProject(model, normalized.matrix));
  if (!args.model.empty()) {
    OrderedJson m;
    m["dim"] = model.dim;
    m["out_dim"] = model.out_dim;
    m["mean"] = model.mean;
    m["eigenvalues"] = model.eigenvalues;
    m["components"] = model.components;
    WriteText(args.model, tablefew::DumpCompact(m) + "\n");
  }
  std::cout << normalized.matrix.rows() << " task embeddings -> " << args.output << '\n';
  return 0;
}

// --- annotate-serve ------------------------------------------------------

struct ServeArgs {
  std::string tasks;
  std::string annotations;
  std::string host = "127.0.0.1";
  int port = 8765;
  std::string annotator = "anonymous";
};

tablefew::AnnotationServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

int RunServeCommand(ServeArgs args) {
  if (const char* env = std::getenv("TABLEFEW_PORT"); env != nullptr && *env != '\0') {
    try {
      args.port = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "invalid TABLEFEW_PORT " << env << '\n';
      return kExitInvalidConfig;
    }
  }
  OrderedJson eff;
  eff["command"] = "annotate-serve";
  eff["port"] = args.port;
  eff["annotator"] = args.annotator;
  PrintDigest(eff);
  if (!Readable(args.tasks)) {
    std::cerr << "cannot read tasks " << args.tasks << '\n';
    return kExitUnreadableInput;
  }
  auto tasks = tablefew::ReadTaskFile(args.tasks, tablefew::kMinSampledExamples);
  std::unique_ptr<tablefew::AnnotationStore> store;
  try {
    store = std::make_unique<tablefew::AnnotationStore>(std::move(tasks), args.annotations,
                                                        args.annotator);
  } catch (const tablefew::AnnotationFileError& e) {
    std::cerr << e.what() << '\n';
    return kExitAnnotationsUnwritable;
  }
  tablefew::AnnotationServer server(*store);
  if (!server.Bind(args.host, args.port)) {
    std::cerr << "cannot bind " << args.host << ":" << args.port << " (port busy?)\n";
    return kExitPortBusy;
  }
  g_server = &server;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cout << "serving " << store->total() << " tasks (" << store->annotated_count()
            << " annotated) on http://" << args.host << ":" << args.port << "/" << std::endl;
  server.Listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tablefew: turn web tables into few-shot learning tasks"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Convert a table corpus into a task file");
  build_cmd->add_option("--input", build.input, "Corpus JSONL")->required();
  build_cmd->add_option("--format", build.format, "wdc | canonical")
      ->check(CLI::IsMember({"wdc", "canonical"}));
  build_cmd->add_option("--output", build.output, "Task JSONL to write")->required();
  build_cmd->add_option("--config", build.config, "JSON filter configuration");
  build_cmd->add_option("--report", build.report, "Report JSON (default <output>.report.json)");
  build_cmd->add_option("--manifest", build.manifest,
                        "Manifest JSON (default <output>.manifest.json)");
  build_cmd->add_option("--errors", build.errors, "Write malformed-line log here");
  build_cmd->add_option("--jobs", build.jobs, "Worker threads (0 = all cores)");
  build_cmd->add_option("--seed", build.seed, "Overrides task_filters.cap_seed");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw M tasks with at most N examples each");
  sample_cmd->add_option("--input", sample.input)->required();
  sample_cmd->add_option("--output", sample.output)->required();
  sample_cmd->add_option("--m", sample.m, "Number of tasks");
  sample_cmd->add_option("--n", sample.n, "Examples per task (0 = unlimited)");
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--strategy", sample.strategy, "uniform | unique_per_website");

  SliceArgs slice;
  auto* slice_cmd = app.add_subcommand("slice", "Write one dataset per stratum");
  slice_cmd->add_option("--input", slice.input)->required();
  slice_cmd->add_option("--key", slice.key, "website | cluster | quality");
  slice_cmd->add_option("--key-file", slice.key_file, "JSONL of {task_id, label}");
  slice_cmd->add_option("--strata", slice.strata, "Strata to emit (default: all)")
      ->delimiter(',');
  slice_cmd->add_option("--per-stratum", slice.per_stratum);
  slice_cmd->add_option("--seed", slice.seed);
  slice_cmd->add_option("--output-stem", slice.stem, "Output files are <stem>.<stratum>.jsonl");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Export k-shot prompt/target pairs");
  render_cmd->add_option("--input", render.input)->required();
  render_cmd->add_option("--output", render.output)->required();
  render_cmd->add_option("--k", render.k, "Demonstrations per prompt");
  render_cmd->add_option("--seed", render.seed);
  render_cmd->add_option("--budget", render.budget, "Prompt character budget (0 = none)");

  std::string stats_input, stats_output;
  std::uint64_t stats_seed = 0;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset summary statistics");
  stats_cmd->add_option("--input", stats_input)->required();
  stats_cmd->add_option("--output", stats_output);
  stats_cmd->add_option("--seed", stats_seed, "Accepted for uniformity; unused");

  PcaArgs pca;
  auto* pca_cmd = app.add_subcommand("pca", "Pool, normalize and PCA-reduce task embeddings");
  pca_cmd->add_option("--embeddings", pca.embeddings, "Example embeddings (JSONL or binary)")
      ->required();
  pca_cmd->add_option("--output", pca.output, "Task embeddings JSONL")->required();
  pca_cmd->add_option("--model", pca.model, "Write the fitted model as JSON");
  pca_cmd->add_option("--out-dim", pca.out_dim);
  pca_cmd->add_option("--seed", pca.seed);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("annotate-serve", "Serve the task quality annotation API");
  serve_cmd->add_option("--tasks", serve.tasks)->required();
  serve_cmd->add_option("--annotations", serve.annotations)->required();
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port);
  serve_cmd->add_option("--annotator", serve.annotator);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_cmd) return RunBuildCommand(build);
    if (*sample_cmd) return RunSampleCommand(sample);
    if (*slice_cmd) return RunSliceCommand(slice);
    if (*render_cmd) return RunRenderCommand(render);
    if (*stats_cmd) return RunStatsCommand(stats_input, stats_output);
    if (*pca_cmd) return RunPcaCommand(pca);
    if (*serve_cmd) return RunServeCommand(serve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
