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

#include "tablefew/annotate_server.h"

#include <charconv>

#include "httplib.h"
#include "tablefew/text.h"

namespace tablefew {

using nlohmann::json;

std::int64_t AnnotationStore::SystemClock() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

AnnotationStore::AnnotationStore(std::vector<Task> tasks,
                                 std::filesystem::path annotations_path,
                                 std::string annotator, Clock clock)
    : tasks_(std::move(tasks)), annotator_(std::move(annotator)), clock_(std::move(clock)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) index_.emplace(tasks_[i].task_id, i);

  if (std::filesystem::exists(annotations_path)) {
    std::ifstream in(annotations_path, std::ios::binary);
    if (!in) {
      throw AnnotationFileError("cannot read annotations file " + annotations_path.string());
    }
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (IsBlank(line)) continue;
      AnnotationRecord r = DecodeAnnotation(line, line_number);
      latest_[r.task_id] = r.rating;
    }
  }
  log_.open(annotations_path, std::ios::binary | std::ios::app);
  if (!log_) {
    throw AnnotationFileError("cannot append to annotations file " +
                              annotations_path.string());
  }
}

AnnotationStore::SubmitStatus AnnotationStore::Submit(const std::string& task_id,
                                                      long long rating,
                                                      std::optional<std::string> notes) {
  if (!IsValidRating(rating)) return SubmitStatus::kInvalidRating;
  if (!index_.contains(task_id)) return SubmitStatus::kUnknownTask;
  AnnotationRecord record{task_id, static_cast<int>(rating), annotator_, clock_(),
                          std::move(notes)};
  std::unique_lock lock(mu_);
  log_ << EncodeAnnotation(record) << '\n';
  log_.flush();
  if (!log_) throw AnnotationFileError("write to annotations file failed");
  latest_[task_id] = record.rating;
  return SubmitStatus::kOk;
}

std::size_t AnnotationStore::annotated_count() const {
  std::shared_lock lock(mu_);
  return latest_.size();
}

OrderedJson AnnotationStore::Page(std::size_t offset, std::size_t limit,
                                  bool only_unannotated) const {
  std::shared_lock lock(mu_);
  OrderedJson tasks = OrderedJson::array();
  std::size_t skipped = 0;
  for (const Task& t : tasks_) {
    if (tasks.size() >= limit) break;
    const bool annotated = latest_.contains(t.task_id);
    if (only_unannotated && annotated) continue;
    if (skipped < offset) {
      ++skipped;
      continue;
    }
    OrderedJson examples = OrderedJson::array();
    for (std::size_t i = 0; i < t.examples.size() && i < kDisplayExamples; ++i) {
      OrderedJson e;
      e["input"] = t.examples[i].input;
      e["output"] = t.examples[i].output;
      examples.push_back(std::move(e));
    }
    OrderedJson j;
    j["task_id"] = t.task_id;
    j["website"] = t.website;
    j["target_header"] = t.target_header;
    j["examples"] = std::move(examples);
    j["example_count"] = t.examples.size();
    j["annotated"] = annotated;
    tasks.push_back(std::move(j));
  }
  OrderedJson out;
  out["tasks"] = std::move(tasks);
  out["total"] = tasks_.size();
  out["annotated_count"] = latest_.size();
  return out;
}

OrderedJson AnnotationStore::Progress() const {
  std::shared_lock lock(mu_);
  std::array<std::uint64_t, 3> by_rating{};
  for (const auto& [id, rating] : latest_) ++by_rating[static_cast<std::size_t>(rating)];
  OrderedJson by;
  by["0"] = by_rating[0];
  by["1"] = by_rating[1];
  by["2"] = by_rating[2];
  OrderedJson out;
  out["total"] = tasks_.size();
  out["annotated_count"] = latest_.size();
  out["by_rating"] = std::move(by);
  return out;
}

std::string ContentTypeFor(std::string_view path) {
  if (path.ends_with(".html")) return "text/html; charset=utf-8";
  if (path.ends_with(".js") || path.ends_with(".mjs")) return "text/javascript";
  if (path.ends_with(".css")) return "text/css";
  if (path.ends_with(".json")) return "application/json";
  if (path.ends_with(".svg")) return "image/svg+xml";
  if (path.ends_with(".png")) return "image/png";
  if (path.ends_with(".ico")) return "image/x-icon";
  return "application/octet-stream";
}

namespace {

void SendJson(httplib::Response& res, int status, const OrderedJson& body) {
  res.status = status;
  res.set_content(DumpCompact(body), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& message) {
  OrderedJson j;
  j["ok"] = false;
  j["error"] = message;
  SendJson(res, status, j);
}

std::optional<std::size_t> ParseSize(const std::string& text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

AnnotationServer::AnnotationServer(AnnotationStore& store)
    : store_(store), server_(std::make_unique<httplib::Server>()) {
  // No SO_REUSEPORT: a second server on a busy port must fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
               sizeof(yes));
  });
  Routes();
}

AnnotationServer::~AnnotationServer() = default;

void AnnotationServer::Routes() {
  server_->Get("/api/tasks", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t offset = 0;
    std::size_t limit = 20;
    bool only_unannotated = true;
    if (req.has_param("offset")) {
      auto v = ParseSize(req.get_param_value("offset"));
      if (!v) return SendError(res, 400, "offset must be a non-negative integer");
      offset = *v;
    }
    if (req.has_param("limit")) {
      auto v = ParseSize(req.get_param_value("limit"));
      if (!v) return SendError(res, 400, "limit must be a non-negative integer");
      limit = std::min<std::size_t>(*v, 1000);
    }
    if (req.has_param("only_unannotated")) {
      const std::string v = req.get_param_value("only_unannotated");
      if (v != "true" && v != "false") {
        return SendError(res, 400, "only_unannotated must be true or false");
      }
      only_unannotated = v == "true";
    }
    SendJson(res, 200, store_.Page(offset, limit, only_unannotated));
  });

  server_->Post("/api/annotations", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error&) {
      return SendError(res, 400, "body is not valid JSON");
    }
    if (!body.is_object() || !body.contains("task_id") || !body["task_id"].is_string()) {
      return SendError(res, 422, "task_id must be a string");
    }
    if (!body.contains("rating") || !body["rating"].is_number_integer()) {
      return SendError(res, 422, "rating must be 0, 1 or 2");
    }
    std::optional<std::string> notes;
    if (auto it = body.find("notes"); it != body.end() && !it->is_null()) {
      if (!it->is_string()) return SendError(res, 422, "notes must be a string");
      notes = it->get<std::string>();
    }
    switch (store_.Submit(body["task_id"].get<std::string>(),
                          body["rating"].get<long long>(), std::move(notes))) {
      case AnnotationStore::SubmitStatus::kInvalidRating:
        return SendError(res, 422, "rating must be 0, 1 or 2");
      case AnnotationStore::SubmitStatus::kUnknownTask:
        return SendError(res, 404, "unknown task_id");
      case AnnotationStore::SubmitStatus::kOk:
        break;
    }
    OrderedJson ok;
    ok["ok"] = true;
    SendJson(res, 200, ok);
  });

  server_->Get("/api/progress", [this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, store_.Progress());
  });

  server_->Get(R"(/(.*))", [](const httplib::Request& req, httplib::Response& res) {
    std::string path = req.path;
    if (path.empty() || path == "/") path = "/index.html";
    const auto& assets = EmbeddedUiAssets();
    auto it = assets.find(path);
    if (it == assets.end()) {
      res.status = 404;
      res.set_content("not found", "text/plain");
      return;
    }
    res.set_content(std::string(it->second), ContentTypeFor(path));
  });

  server_->set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        SendError(res, 500, message);
      });
}

bool AnnotationServer::Bind(const std::string& host, int port) {
  return server_->bind_to_port(host, port);
}

int AnnotationServer::BindAnyPort(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool AnnotationServer::Listen() { return server_->listen_after_bind(); }

void AnnotationServer::Stop() { server_->stop(); }

bool AnnotationServer::WaitUntilReady() const {
  server_->wait_until_ready();
  return server_->is_running();
}

}  // namespace tablefew
