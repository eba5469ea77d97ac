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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tablefew/codec.h"
#include "tablefew/model.h"

namespace httplib {
class Server;
}

namespace tablefew {

// The annotations file could not be opened for appending.
class AnnotationFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tasks plus their latest ratings. Reads may run concurrently; submissions
// are serialized and appended to the annotations file, flushed per record.
class AnnotationStore {
 public:
  using Clock = std::function<std::int64_t()>;

  static constexpr std::size_t kDisplayExamples = 10;

  // Replays `annotations_path` (last record per task wins) and opens it for
  // appending. Throws AnnotationFileError.
  AnnotationStore(std::vector<Task> tasks, std::filesystem::path annotations_path,
                  std::string annotator, Clock clock = SystemClock);

  enum class SubmitStatus { kOk, kUnknownTask, kInvalidRating };

  SubmitStatus Submit(const std::string& task_id, long long rating,
                      std::optional<std::string> notes);

  // {tasks:[...], total, annotated_count}
  OrderedJson Page(std::size_t offset, std::size_t limit, bool only_unannotated) const;
  // {total, annotated_count, by_rating:{"0","1","2"}}
  OrderedJson Progress() const;

  std::size_t total() const { return tasks_.size(); }
  std::size_t annotated_count() const;

  static std::int64_t SystemClock();

 private:
  std::vector<Task> tasks_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string annotator_;
  Clock clock_;

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, int> latest_;
  std::ofstream log_;
};

// HTTP front end: the JSON API plus the embedded UI bundle.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationStore& store);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // False if the port cannot be bound (e.g. already in use).
  bool Bind(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int BindAnyPort(const std::string& host);
  // Blocks until Stop().
  bool Listen();
  void Stop();
  bool WaitUntilReady() const;

 private:
  void Routes();

  AnnotationStore& store_;
  std::unique_ptr<httplib::Server> server_;
};

// Path -> content of the UI assets compiled into the binary.
const std::map<std::string, std::string_view>& EmbeddedUiAssets();

std::string ContentTypeFor(std::string_view path);

}  // namespace tablefew
