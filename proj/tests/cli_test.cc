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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support/subprocess.h"
#include "support/synth_corpus.h"
#include "tablefew/annotate_server.h"
#include "tablefew/codec.h"
#include "tablefew/task_file.h"

namespace tablefew {
namespace {

namespace fs = std::filesystem;
using testing::RunProcess;

const fs::path kData = TABLEFEW_TEST_DATA_DIR;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tablefew_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  testing::ProcessResult Cli(std::vector<std::string> args,
                             const std::vector<std::string>& env = {}) {
    args.insert(args.begin(), TABLEFEW_CLI_PATH);
    return RunProcess(args, env);
  }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  // A small task file written through the library.
  std::string TaskFile() {
    WriteTaskFile(P("tasks.jsonl"), testing::SyntheticTasks(60, 6, 2, 20));
    return P("tasks.jsonl");
  }

  fs::path dir_;
};

TEST_F(CliTest, BuildMatchesGoldenFiles) {
  const auto r = Cli({"build", "--input", (kData / "fixtures/corpus200.jsonl").string(),
                      "--config", (kData / "fixtures/golden_config.json").string(), "--output",
                      P("out.jsonl"), "--report", P("out.report.json"), "--manifest",
                      P("out.manifest.json"), "--errors", P("out.errors.tsv"), "--jobs", "4"});
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_NE(r.stderr_text.find("config digest: 93e82873dbaf4ff7"), std::string::npos);
  const fs::path g = kData / "golden";
  EXPECT_EQ(ReadFile(P("out.jsonl")), ReadFile(g / "corpus200.tasks.jsonl"));
  EXPECT_EQ(ReadFile(P("out.report.json")), ReadFile(g / "corpus200.report.json"));
  EXPECT_EQ(ReadFile(P("out.report.txt")), ReadFile(g / "corpus200.report.txt"));
  EXPECT_EQ(ReadFile(P("out.manifest.json")), ReadFile(g / "corpus200.manifest.json"));
  EXPECT_EQ(ReadFile(P("out.errors.tsv")), ReadFile(g / "corpus200.errors.tsv"));
}

TEST_F(CliTest, BuildEmptyInput) {
  WriteFile(P("empty.jsonl"), "");
  const auto r = Cli({"build", "--input", P("empty.jsonl"), "--output", P("out.jsonl")});
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_EQ(ReadFile(P("out.jsonl")), "");
  const auto reports = nlohmann::json::parse(ReadFile(P("out.jsonl.report.json")));
  EXPECT_EQ(reports[0]["initial"], 0);
  EXPECT_EQ(reports[1]["remaining"], 0);
}

TEST_F(CliTest, UnreadableInputExitsTwo) {
  EXPECT_EQ(Cli({"build", "--input", P("missing.jsonl"), "--output", P("o.jsonl")}).exit_code, 2);
  EXPECT_EQ(Cli({"sample", "--input", P("missing.jsonl"), "--output", P("o.jsonl")}).exit_code, 2);
  EXPECT_EQ(Cli({"stats", "--input", P("missing.jsonl")}).exit_code, 2);
}

TEST_F(CliTest, InvalidConfigExitsThreeNamingTheField) {
  WriteFile(P("in.jsonl"), "");
  WriteFile(P("cfg.json"), R"({"task_filters":{"min_evenness":1.5}})");
  const auto r = Cli({"build", "--input", P("in.jsonl"), "--output", P("o.jsonl"), "--config",
                      P("cfg.json")});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.stderr_text.find("task_filters.min_evenness"), std::string::npos) << r.stderr_text;
  EXPECT_EQ(Cli({"sample", "--input", TaskFile(), "--output", P("o.jsonl"), "--strategy", "best"})
                .exit_code,
            3);
}

TEST_F(CliTest, SubcommandsPrintDigestAndSucceed) {
  const std::string tasks = TaskFile();
  const std::vector<std::vector<std::string>> runs = {
      {"sample", "--input", tasks, "--output", P("s.jsonl"), "--m", "10", "--n", "5"},
      {"slice", "--input", tasks, "--key", "website", "--per-stratum", "3", "--output-stem",
       P("slice")},
      {"render", "--input", tasks, "--output", P("r.jsonl"), "--k", "2"},
      {"stats", "--input", tasks, "--output", P("stats.json")},
  };
  for (const auto& args : runs) {
    const auto r = Cli(args);
    EXPECT_EQ(r.exit_code, 0) << args[0] << ": " << r.stderr_text;
    EXPECT_NE(r.stderr_text.find("config digest: "), std::string::npos) << args[0];
  }
  EXPECT_EQ(ReadTaskFile(P("s.jsonl"), kMinSampledExamples).size(), 10u);
  EXPECT_EQ(nlohmann::json::parse(ReadFile(P("stats.json")))["task_count"], 60);
  int slices = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    if (e.path().filename().string().starts_with("slice.")) ++slices;
  }
  EXPECT_EQ(slices, 6);
}

TEST_F(CliTest, SampleIsDeterministic) {
  const std::string tasks = TaskFile();
  ASSERT_EQ(Cli({"sample", "--input", tasks, "--output", P("a.jsonl"), "--m", "7", "--seed", "5"})
                .exit_code,
            0);
  ASSERT_EQ(Cli({"sample", "--input", tasks, "--output", P("b.jsonl"), "--m", "7", "--seed", "5"})
                .exit_code,
            0);
  EXPECT_EQ(ReadFile(P("a.jsonl")), ReadFile(P("b.jsonl")));
}

TEST_F(CliTest, PcaCommand) {
  std::string jsonl;
  testing::Rng rng(3);
  for (int t = 0; t < 12; ++t) {
    for (int e = 0; e < 3; ++e) {
      jsonl += R"({"task_id":"t)" + std::to_string(t) + R"(","example_index":)" +
               std::to_string(e) + R"(,"vector":[)";
      for (int d = 0; d < 5; ++d) jsonl += (d ? "," : "") + std::to_string(rng.Unit());
      jsonl += "]}\n";
    }
  }
  WriteFile(P("emb.jsonl"), jsonl);
  const auto r = Cli({"pca", "--embeddings", P("emb.jsonl"), "--output", P("pca.jsonl"),
                      "--out-dim", "3", "--model", P("model.json")});
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  std::istringstream lines(ReadFile(P("pca.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(nlohmann::json::parse(line)["vector"].size(), 3u);
    ++n;
  }
  EXPECT_EQ(n, 12);
  EXPECT_EQ(Cli({"pca", "--embeddings", P("emb.jsonl"), "--output", P("pca.jsonl"), "--out-dim",
                 "9"})
                .exit_code,
            3);
}

TEST_F(CliTest, ServeExitCodes) {
  const std::string tasks = TaskFile();
  // Hold a port with an in-process server; the CLI must not share it.
  AnnotationStore store({}, P("held.jsonl"), "x");
  AnnotationServer holder(store);
  const int port = holder.BindAnyPort("127.0.0.1");
  ASSERT_GT(port, 0);
  const auto busy = Cli({"annotate-serve", "--tasks", tasks, "--annotations", P("a.jsonl"),
                         "--port", "1"},
                        {"TABLEFEW_PORT=" + std::to_string(port)});
  EXPECT_EQ(busy.exit_code, 4) << busy.stderr_text;
  EXPECT_EQ(Cli({"annotate-serve", "--tasks", tasks, "--annotations", P("no/such/dir/a.jsonl"),
                 "--port", std::to_string(port)})
                .exit_code,
            5);
  EXPECT_EQ(Cli({"annotate-serve", "--tasks", P("missing.jsonl"), "--annotations",
                 P("a.jsonl")})
                .exit_code,
            2);
  EXPECT_EQ(Cli({"annotate-serve", "--tasks", tasks, "--annotations", P("a.jsonl")},
                {"TABLEFEW_PORT=abc"})
                .exit_code,
            3);
}

TEST_F(CliTest, UnknownSubcommandFails) {
  EXPECT_NE(Cli({"frobnicate"}).exit_code, 0);
}

}  // namespace
}  // namespace tablefew
