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

#include "tablefew/embed_slice.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "tablefew/codec.h"
#include "tablefew/text.h"

namespace tablefew {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim,
                                 std::vector<double> values)
    : ids_(std::move(ids)), dim_(dim), values_(std::move(values)) {
  if (values_.size() != ids_.size() * dim_) {
    throw std::invalid_argument("embedding matrix shape mismatch");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("embedding matrix has a non-finite value");
    }
  }
}

EmbeddingMatrix PoolTaskEmbeddings(const std::vector<ExampleEmbedding>& examples) {
  std::map<std::string, std::vector<const ExampleEmbedding*>> by_task;
  for (const auto& e : examples) by_task[e.task_id].push_back(&e);
  if (by_task.empty()) return {};

  const std::size_t dim = examples.front().vector.size();
  std::vector<std::string> ids;
  std::vector<double> values;
  ids.reserve(by_task.size());
  values.reserve(by_task.size() * dim);
  for (auto& [task_id, rows] : by_task) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
      return a->example_index < b->example_index;
    });
    std::vector<double> sum(dim, 0.0);
    for (const ExampleEmbedding* r : rows) {
      if (r->vector.size() != dim) {
        throw std::invalid_argument("task " + task_id + ": example " +
                                    std::to_string(r->example_index) + " has dim " +
                                    std::to_string(r->vector.size()) + ", expected " +
                                    std::to_string(dim));
      }
      for (std::size_t d = 0; d < dim; ++d) sum[d] += r->vector[d];
    }
    const double n = static_cast<double>(rows.size());
    for (double s : sum) values.push_back(s / n);
    ids.push_back(task_id);
  }
  return EmbeddingMatrix(std::move(ids), dim, std::move(values));
}

NormalizeResult L2Normalize(const EmbeddingMatrix& m) {
  std::vector<double> values = m.values();
  std::size_t zero_rows = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double* row = values.data() + i * m.dim();
    double sq = 0.0;
    for (std::size_t d = 0; d < m.dim(); ++d) sq += row[d] * row[d];
    if (sq == 0.0) {
      ++zero_rows;
      continue;
    }
    const double norm = std::sqrt(sq);
    for (std::size_t d = 0; d < m.dim(); ++d) row[d] /= norm;
  }
  return {EmbeddingMatrix(m.ids(), m.dim(), std::move(values)), zero_rows};
}

SymmetricEigen JacobiEigen(std::vector<double> a, std::size_t n,
                           double tolerance, int max_sweeps) {
  if (a.size() != n * n) throw std::invalid_argument("matrix is not n x n");
  auto at = [&a, n](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  SymmetricEigen out;
  for (; out.sweeps < max_sweeps; ++out.sweeps) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(at(p, q)));
    }
    if (off < tolerance) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < tolerance * 1e-3) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        // Rotation angle that zeroes a[p][q].
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          at(r, p) = at(p, r) = new_rp;
          at(r, q) = at(q, r) = new_rq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          double& vrp = v[r * n + p];
          double& vrq = v[r * n + q];
          const double old_p = vrp;
          const double old_q = vrq;
          vrp = old_p - s * (old_q + tau * old_p);
          vrq = old_q + s * (old_p - tau * old_q);
        }
      }
    }
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = at(i, i);
  out.vectors = std::move(v);
  return out;
}

PcaModel PcaFit(const EmbeddingMatrix& m, std::size_t out_dim) {
  const std::size_t n = m.rows();
  const std::size_t dim = m.dim();
  if (n < 2) throw std::invalid_argument("PCA needs at least two rows");
  if (out_dim < 1 || out_dim > std::min(dim, n - 1)) {
    throw std::invalid_argument("out_dim " + std::to_string(out_dim) +
                                " must be in [1, min(dim, rows - 1)] = [1, " +
                                std::to_string(std::min(dim, n - 1)) + "]");
  }
  for (double v : m.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input to PCA");
  }

  PcaModel model;
  model.dim = dim;
  model.out_dim = out_dim;
  model.mean.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = m.row(i);
    for (std::size_t d = 0; d < dim; ++d) model.mean[d] += row[d];
  }
  for (double& x : model.mean) x /= static_cast<double>(n);

  std::vector<double> cov(dim * dim, 0.0);
  std::vector<double> centered(dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = m.row(i);
    for (std::size_t d = 0; d < dim; ++d) centered[d] = row[d] - model.mean[d];
    for (std::size_t a = 0; a < dim; ++a) {
      const double ca = centered[a];
      double* out = cov.data() + a * dim;
      for (std::size_t b = a; b < dim; ++b) out[b] += ca * centered[b];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a; b < dim; ++b) {
      cov[a * dim + b] /= denom;
      cov[b * dim + a] = cov[a * dim + b];
    }
  }

  SymmetricEigen eig = JacobiEigen(std::move(cov), dim);
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return eig.values[x] > eig.values[y];
  });

  model.components.resize(out_dim * dim);
  model.eigenvalues.resize(out_dim);
  for (std::size_t k = 0; k < out_dim; ++k) {
    const std::size_t col = order[k];
    model.eigenvalues[k] = eig.values[col];
    double* comp = model.components.data() + k * dim;
    std::size_t argmax = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      comp[d] = eig.vectors[d * dim + col];
      if (std::abs(comp[d]) > std::abs(comp[argmax])) argmax = d;
    }
    if (comp[argmax] < 0.0) {
      for (std::size_t d = 0; d < dim; ++d) comp[d] = -comp[d];
    }
  }
  return model;
}

EmbeddingMatrix PcaProject(const PcaModel& model, const EmbeddingMatrix& m) {
  if (m.dim() != model.dim) {
    throw std::invalid_argument("projection input has dim " + std::to_string(m.dim()) +
                                ", model expects " + std::to_string(model.dim));
  }
  std::vector<double> values(m.rows() * model.out_dim, 0.0);
  std::vector<double> centered(model.dim);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    for (std::size_t d = 0; d < model.dim; ++d) centered[d] = row[d] - model.mean[d];
    for (std::size_t k = 0; k < model.out_dim; ++k) {
      auto comp = model.component(k);
      double dot = 0.0;
      for (std::size_t d = 0; d < model.dim; ++d) dot += centered[d] * comp[d];
      values[i * model.out_dim + k] = dot;
    }
  }
  return EmbeddingMatrix(m.ids(), model.out_dim, std::move(values));
}

ClusterLoad LoadClusterAssignments(std::istream& in) {
  ClusterLoad load;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    const nlohmann::json j = ParseJsonLine(line, line_number);
    try {
      std::string id = RequireString(j, "task_id");
      const std::int64_t label = RequireInt(j, "label");
      if (label < -1) throw SchemaError("label must be >= -1", "label");
      auto [it, inserted] = load.labels.insert_or_assign(std::move(id), label);
      if (!inserted) ++load.duplicate_count;
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(line_number) + ": " + e.what(),
                        e.key());
    }
  }
  return load;
}

namespace {

ExampleEmbedding EmbeddingFromJson(const nlohmann::json& j, std::size_t line_number) {
  try {
    ExampleEmbedding e;
    e.task_id = RequireString(j, "task_id");
    e.example_index = RequireInt(j, "example_index");
    const auto& vec = RequireKey(j, "vector");
    if (!vec.is_array()) throw SchemaError("vector must be an array", "vector");
    e.vector.reserve(vec.size());
    for (const auto& x : vec) {
      if (!x.is_number()) throw SchemaError("vector must hold numbers", "vector");
      const double d = x.get<double>();
      if (!std::isfinite(d)) throw SchemaError("vector has a non-finite value", "vector");
      e.vector.push_back(d);
    }
    return e;
  } catch (const SchemaError& e) {
    throw SchemaError("line " + std::to_string(line_number) + ": " + e.what(), e.key());
  }
}

std::uint32_t ReadU32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError("truncated binary embedding row", 0);
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void WriteU32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                     static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

std::vector<ExampleEmbedding> ReadBinaryBody(std::istream& in, std::size_t dim,
                                             std::size_t count) {
  std::vector<ExampleEmbedding> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ExampleEmbedding e;
    e.task_id.resize(ReadU32(in));
    if (!in.read(e.task_id.data(), static_cast<std::streamsize>(e.task_id.size()))) {
      throw ParseError("truncated binary embedding row", 0);
    }
    e.example_index = ReadU32(in);
    e.vector.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      unsigned char b[8];
      if (!in.read(reinterpret_cast<char*>(b), 8)) {
        throw ParseError("truncated binary embedding row", 0);
      }
      std::uint64_t bits = 0;
      for (int k = 7; k >= 0; --k) bits = (bits << 8) | b[k];
      e.vector[d] = std::bit_cast<double>(bits);
      if (!std::isfinite(e.vector[d])) {
        throw ParseError("non-finite value in binary embedding row", 0);
      }
    }
    rows.push_back(std::move(e));
  }
  return rows;
}

bool IsBinaryHeader(const nlohmann::json& j) {
  return j.is_object() && j.contains("dim") && j.contains("count") &&
         !j.contains("vector");
}

}  // namespace

namespace {

std::vector<ExampleEmbedding> ReadJsonlFrom(std::istream& in, std::size_t line_number) {
  std::vector<ExampleEmbedding> rows;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    rows.push_back(EmbeddingFromJson(ParseJsonLine(line, line_number), line_number));
  }
  return rows;
}

}  // namespace

std::vector<ExampleEmbedding> ReadEmbeddingsJsonl(std::istream& in) {
  return ReadJsonlFrom(in, 0);
}

std::vector<ExampleEmbedding> ReadEmbeddingsBinary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing binary header line", 1);
  const nlohmann::json header = ParseJsonLine(line, 1);
  if (!IsBinaryHeader(header)) throw SchemaError("binary header needs dim and count", "dim");
  return ReadBinaryBody(in, static_cast<std::size_t>(RequireInt(header, "dim")),
                        static_cast<std::size_t>(RequireInt(header, "count")));
}

void WriteEmbeddingsBinary(std::ostream& out, const std::vector<ExampleEmbedding>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().vector.size();
  OrderedJson header;
  header["dim"] = dim;
  header["count"] = rows.size();
  out << DumpCompact(header) << '\n';
  for (const auto& e : rows) {
    if (e.vector.size() != dim) throw std::invalid_argument("ragged embedding rows");
    WriteU32(out, static_cast<std::uint32_t>(e.task_id.size()));
    out.write(e.task_id.data(), static_cast<std::streamsize>(e.task_id.size()));
    WriteU32(out, static_cast<std::uint32_t>(e.example_index));
    for (double d : e.vector) {
      const auto bits = std::bit_cast<std::uint64_t>(d);
      char b[8];
      for (int k = 0; k < 8; ++k) b[k] = static_cast<char>(bits >> (8 * k));
      out.write(b, 8);
    }
  }
}

std::vector<ExampleEmbedding> ReadEmbeddings(std::istream& in) {
  std::string first;
  std::size_t line_number = 0;
  while (std::getline(in, first)) {
    ++line_number;
    if (!IsBlank(first)) break;
  }
  if (IsBlank(first)) return {};
  const nlohmann::json j = ParseJsonLine(first, line_number);
  if (IsBinaryHeader(j)) {
    return ReadBinaryBody(in, static_cast<std::size_t>(RequireInt(j, "dim")),
                          static_cast<std::size_t>(RequireInt(j, "count")));
  }
  std::vector<ExampleEmbedding> rows;
  rows.push_back(EmbeddingFromJson(j, line_number));
  for (auto& e : ReadJsonlFrom(in, line_number)) rows.push_back(std::move(e));
  return rows;
}

void WriteMatrixJsonl(std::ostream& out, const EmbeddingMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    OrderedJson j;
    j["task_id"] = m.ids()[i];
    auto row = m.row(i);
    j["vector"] = std::vector<double>(row.begin(), row.end());
    out << DumpCompact(j) << '\n';
  }
}

}  // namespace tablefew
