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
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace tablefew {

// One vector per id, stored row-major.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Throws std::invalid_argument on a shape mismatch or non-finite value.
  EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim,
                  std::vector<double> values);

  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return ids_.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<std::string> ids_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct ExampleEmbedding {
  std::string task_id;
  std::int64_t example_index = 0;
  std::vector<double> vector;
};

// Mean over each task's example rows. Rows within a task are summed in
// example_index order; output rows are sorted by task_id. Throws
// std::invalid_argument naming the task on a dimension mismatch.
EmbeddingMatrix PoolTaskEmbeddings(const std::vector<ExampleEmbedding>& examples);

struct NormalizeResult {
  EmbeddingMatrix matrix;
  std::size_t zero_rows = 0;
};

// Divides each row by its Euclidean norm; zero rows stay zero and are
// counted.
NormalizeResult L2Normalize(const EmbeddingMatrix& m);

struct PcaModel {
  std::size_t dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> mean;
  // out_dim x dim, row-major, orthonormal rows.
  std::vector<double> components;
  // Non-increasing.
  std::vector<double> eigenvalues;

  std::span<const double> component(std::size_t i) const {
    return {components.data() + i * dim, dim};
  }
};

struct SymmetricEigen {
  std::vector<double> values;   // unsorted, as produced by the sweeps
  std::vector<double> vectors;  // column j is the eigenvector of values[j]
  int sweeps = 0;
};

// Cyclic Jacobi rotations on a dense symmetric n x n matrix (row-major).
// Stops when every off-diagonal magnitude is below `tolerance` or after
// `max_sweeps`.
SymmetricEigen JacobiEigen(std::vector<double> a, std::size_t n,
                           double tolerance = 1e-10, int max_sweeps = 100);

// Sample covariance (divisor n - 1) eigendecomposition, top out_dim pairs.
// Each component's largest-magnitude coordinate is made positive (lowest
// index wins ties). Throws std::invalid_argument if out_dim >
// min(dim, rows - 1) or rows < 2.
PcaModel PcaFit(const EmbeddingMatrix& m, std::size_t out_dim);

// (row - mean) * components^T. Throws std::invalid_argument on a dimension
// mismatch.
EmbeddingMatrix PcaProject(const PcaModel& model, const EmbeddingMatrix& m);

struct ClusterLoad {
  std::unordered_map<std::string, std::int64_t> labels;
  std::size_t duplicate_count = 0;
};

// JSONL of {task_id, label}; label is an integer, -1 marks noise.
// Duplicate ids: last wins and are counted. Throws ParseError or
// SchemaError with the line number.
ClusterLoad LoadClusterAssignments(std::istream& in);

// JSONL of {task_id, example_index, vector:[...]}.
std::vector<ExampleEmbedding> ReadEmbeddingsJsonl(std::istream& in);

// A JSON header line {"dim":D,"count":N} followed by N binary rows:
// u32 id length, id bytes, u32 example_index, D little-endian f64.
std::vector<ExampleEmbedding> ReadEmbeddingsBinary(std::istream& in);
void WriteEmbeddingsBinary(std::ostream& out,
                           const std::vector<ExampleEmbedding>& rows);

// Picks the reader from the first line: a header object with "dim" and
// "count" and no "vector" selects the binary layout.
std::vector<ExampleEmbedding> ReadEmbeddings(std::istream& in);

// JSONL of {task_id, vector}.
void WriteMatrixJsonl(std::ostream& out, const EmbeddingMatrix& m);

}  // namespace tablefew
