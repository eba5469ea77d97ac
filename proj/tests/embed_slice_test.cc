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

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "support/synth_corpus.h"
#include "tablefew/codec.h"
#include "tablefew/embed_slice.h"

namespace tablefew {
namespace {

EmbeddingMatrix RandomMatrix(testing::Rng& rng, std::size_t rows, std::size_t dim) {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows; ++r) {
    ids.push_back("t" + std::to_string(r));
    for (std::size_t c = 0; c < dim; ++c) values.push_back(rng.Unit() * 2.0 - 1.0 + 0.1 * c);
  }
  return EmbeddingMatrix(std::move(ids), dim, std::move(values));
}

// Eigen-based oracle for the top `k` principal axes, sign-fixed the same way
// as PcaFit.
struct OraclePca {
  Eigen::VectorXd mean;
  Eigen::MatrixXd axes;  // k x dim
  Eigen::VectorXd values;
};

OraclePca Oracle(const EmbeddingMatrix& m, std::size_t k) {
  const Eigen::Index n = static_cast<Eigen::Index>(m.rows());
  const Eigen::Index d = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) x(r, c) = m.row(static_cast<std::size_t>(r))[c];
  }
  OraclePca o;
  o.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - o.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  o.axes.resize(static_cast<Eigen::Index>(k), d);
  o.values.resize(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - i);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < d; ++j) {
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    }
    if (v(arg) < 0) v = -v;
    o.axes.row(i) = v.transpose();
    o.values(i) = solver.eigenvalues()(d - 1 - i);
  }
  return o;
}

TEST(PoolTest, MeansPerTaskSortedById) {
  const std::vector<ExampleEmbedding> rows = {
      {"b", 1, {3.0, 0.0}}, {"a", 0, {1.0, 1.0}}, {"b", 0, {1.0, 2.0}}, {"a", 1, {3.0, 3.0}}};
  const EmbeddingMatrix m = PoolTaskEmbeddings(rows);
  ASSERT_EQ(m.ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(m.values(), (std::vector<double>{2.0, 2.0, 2.0, 1.0}));
  EXPECT_THROW(PoolTaskEmbeddings({{"a", 0, {1.0}}, {"a", 1, {1.0, 2.0}}}), std::invalid_argument);
}

TEST(NormalizeTest, UnitRowsAndZeroRows) {
  const EmbeddingMatrix m({"a", "b"}, 2, {3.0, 4.0, 0.0, 0.0});
  const NormalizeResult r = L2Normalize(m);
  EXPECT_EQ(r.zero_rows, 1u);
  EXPECT_NEAR(r.matrix.row(0)[0], 0.6, 1e-15);
  EXPECT_NEAR(r.matrix.row(0)[1], 0.8, 1e-15);
  EXPECT_EQ(r.matrix.row(1)[0], 0.0);
  EXPECT_THROW(EmbeddingMatrix({"a"}, 2, {1.0}), std::invalid_argument);
  EXPECT_THROW(EmbeddingMatrix({"a"}, 1, {NAN}), std::invalid_argument);
}

TEST(PcaTest, AxisAlignedData) {
  // Spread 10 along x, 1 along y.
  const EmbeddingMatrix m({"a", "b", "c", "d"}, 2, {-10, 0, 10, 0, 0, -1, 0, 1});
  const PcaModel model = PcaFit(m, 2);
  EXPECT_NEAR(model.component(0)[0], 1.0, 1e-12);
  EXPECT_NEAR(model.component(0)[1], 0.0, 1e-12);
  EXPECT_NEAR(model.component(1)[1], 1.0, 1e-12);
  EXPECT_NEAR(model.eigenvalues[0], 200.0 / 3.0, 1e-9);
  EXPECT_NEAR(model.eigenvalues[1], 2.0 / 3.0, 1e-9);
  const EmbeddingMatrix p = PcaProject(model, m);
  EXPECT_NEAR(p.row(0)[0], -10.0, 1e-12);
  EXPECT_NEAR(p.row(3)[1], 1.0, 1e-12);
}

TEST(PcaTest, MatchesEigenOracle) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = rng.Between(2, 16);
    const std::size_t rows = rng.Between(dim + 1, 64);
    const std::size_t k = rng.Between(1, dim);
    const EmbeddingMatrix m = RandomMatrix(rng, rows, dim);
    const PcaModel model = PcaFit(m, k);
    const OraclePca oracle = Oracle(m, k);
    for (std::size_t c = 0; c < dim; ++c) {
      ASSERT_NEAR(model.mean[c], oracle.mean(static_cast<Eigen::Index>(c)), 1e-9);
    }
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_NEAR(model.eigenvalues[i], oracle.values(static_cast<Eigen::Index>(i)), 1e-6);
      if (i > 0) ASSERT_LE(model.eigenvalues[i], model.eigenvalues[i - 1]);
      for (std::size_t c = 0; c < dim; ++c) {
        ASSERT_NEAR(model.component(i)[c],
                    oracle.axes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)), 1e-6);
      }
      for (std::size_t j = 0; j < k; ++j) {
        double dot = 0;
        for (std::size_t c = 0; c < dim; ++c) dot += model.component(i)[c] * model.component(j)[c];
        ASSERT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-8);
      }
    }
  }
}

TEST(PcaTest, FullRankProjectionIsIsometry) {
  testing::Rng rng(13);
  const EmbeddingMatrix m = RandomMatrix(rng, 30, 6);
  const PcaModel model = PcaFit(m, 6);
  const EmbeddingMatrix p = PcaProject(model, m);
  for (std::size_t a = 0; a < 30; a += 7) {
    for (std::size_t b = 1; b < 30; b += 5) {
      double d_in = 0, d_out = 0;
      for (std::size_t c = 0; c < 6; ++c) {
        d_in += std::pow(m.row(a)[c] - m.row(b)[c], 2);
        d_out += std::pow(p.row(a)[c] - p.row(b)[c], 2);
      }
      ASSERT_NEAR(d_in, d_out, 1e-9);
    }
  }
}

TEST(PcaTest, RankDeficientData) {
  // Every row lies on the line y = 2x.
  std::vector<double> values;
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) {
    ids.push_back("r" + std::to_string(i));
    values.push_back(i);
    values.push_back(2.0 * i);
  }
  const PcaModel model = PcaFit(EmbeddingMatrix(ids, 2, values), 2);
  EXPECT_NEAR(model.eigenvalues[1], 0.0, 1e-9);
  EXPECT_NEAR(model.component(0)[1], 2.0 / std::sqrt(5.0), 1e-9);
  double dot = model.component(0)[0] * model.component(1)[0] +
               model.component(0)[1] * model.component(1)[1];
  EXPECT_NEAR(dot, 0.0, 1e-9);
}

TEST(PcaTest, ArgumentChecks) {
  testing::Rng rng(14);
  const EmbeddingMatrix m = RandomMatrix(rng, 4, 6);
  EXPECT_THROW(PcaFit(m, 4), std::invalid_argument);
  EXPECT_NO_THROW(PcaFit(m, 3));
  EXPECT_THROW(PcaFit(RandomMatrix(rng, 1, 3), 1), std::invalid_argument);
  const PcaModel model = PcaFit(m, 2);
  EXPECT_THROW(PcaProject(model, RandomMatrix(rng, 3, 5)), std::invalid_argument);
}

TEST(JacobiTest, DiagonalizesSymmetricMatrix) {
  const SymmetricEigen e = JacobiEigen({2, 1, 1, 2}, 2);
  std::vector<double> v = e.values;
  std::sort(v.begin(), v.end());
  EXPECT_NEAR(v[0], 1.0, 1e-12);
  EXPECT_NEAR(v[1], 3.0, 1e-12);
  EXPECT_THROW(JacobiEigen({1, 2, 3}, 2), std::invalid_argument);
}

TEST(LoaderTest, ClusterAssignments) {
  std::istringstream in("{\"task_id\":\"a\",\"label\":3}\n{\"task_id\":\"b\",\"label\":-1}\n"
                        "{\"task_id\":\"a\",\"label\":4}\n");
  const ClusterLoad load = LoadClusterAssignments(in);
  EXPECT_EQ(load.labels.at("a"), 4);
  EXPECT_EQ(load.labels.at("b"), -1);
  EXPECT_EQ(load.duplicate_count, 1u);
  std::istringstream bad("{\"task_id\":\"a\",\"label\":-2}\n");
  EXPECT_THROW(LoadClusterAssignments(bad), SchemaError);
}

TEST(LoaderTest, JsonlAndBinaryAgree) {
  const std::vector<ExampleEmbedding> rows = {
      {"a", 0, {0.1, -2.5, 1e-300}}, {"b", 3, {1.0 / 3.0, 4.0, -0.0}}};
  std::stringstream bin;
  WriteEmbeddingsBinary(bin, rows);
  const auto from_bin = ReadEmbeddings(bin);
  ASSERT_EQ(from_bin.size(), 2u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(from_bin[i].task_id, rows[i].task_id);
    EXPECT_EQ(from_bin[i].example_index, rows[i].example_index);
    EXPECT_EQ(from_bin[i].vector, rows[i].vector);
  }
  std::istringstream jsonl("{\"task_id\":\"a\",\"example_index\":0,\"vector\":[0.1,-2.5,1e-300]}\n"
                           "{\"task_id\":\"b\",\"example_index\":3,\"vector\":[1,4,0]}\n");
  const auto from_json = ReadEmbeddings(jsonl);
  ASSERT_EQ(from_json.size(), 2u);
  EXPECT_EQ(from_json[0].vector, rows[0].vector);

  std::stringstream truncated;
  WriteEmbeddingsBinary(truncated, rows);
  std::string bytes = truncated.str();
  bytes.resize(bytes.size() - 3);
  std::istringstream cut(bytes);
  EXPECT_THROW(ReadEmbeddings(cut), ParseError);
}

TEST(LoaderTest, MatrixJsonl) {
  std::ostringstream out;
  WriteMatrixJsonl(out, EmbeddingMatrix({"a"}, 2, {0.5, -1.0}));
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["task_id"], "a");
  EXPECT_EQ(j["vector"], nlohmann::json({0.5, -1.0}));
}

}  // namespace
}  // namespace tablefew
