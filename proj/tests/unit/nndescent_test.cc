// Copyright 2026-present the graphann project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "../common/oracles.h"
#include "graphann/datasets.h"
#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/graph.h"
#include "graphann/nndescent.h"

using namespace graphann;
using graphann::testing::random_set;

namespace {

AdjacencyGraph tiny_graph() {
  AdjacencyGraph g(2);
  g.mutable_neighbors(0) = {{1, 1.0f}};
  return g;
}

void expect_knn_invariants(const KnnGraph& g, const VectorSet& data, size_t K) {
  GraphAuditOptions opts;
  opts.max_degree = K;
  opts.data = &data;
  const AuditReport r = audit_graph(g.adjacency, opts);
  EXPECT_TRUE(r.ok()) << (r.messages().empty() ? "" : r.messages()[0]);
}

}  // namespace

TEST(GraphFormatTest, GoldenBytes) {
  std::ostringstream out;
  write_graph(tiny_graph(), out);
  const std::string want("KNNG\x01\x02\x00\x00\x00"
                         "\x01\x00\x00\x00\x01\x00\x00\x00\x00\x00\x80\x3f"
                         "\x00\x00\x00\x00",
                         25);
  EXPECT_EQ(out.str(), want);
  std::istringstream in(want);
  EXPECT_EQ(read_graph(in), tiny_graph());
}

TEST(GraphFormatTest, RejectsMalformed) {
  std::ostringstream out;
  write_graph(tiny_graph(), out);
  const std::string bytes = out.str();
  for (size_t cut : {3ul, 8ul, 12ul, bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, cut));
    EXPECT_THROW(read_graph(in), FormatError) << cut;
  }
  std::istringstream trailing(bytes + "x");
  EXPECT_THROW(read_graph(trailing), FormatError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream v(bad_version);
  EXPECT_THROW(read_graph(v), FormatError);
}

TEST(GraphFormatTest, RoundTripRandomGraph) {
  const VectorSet data = random_set(300, 5, 2);
  const KnnGraph g = build_knn_graph(data, 12, {});
  std::ostringstream out;
  write_graph(g.adjacency, out);
  std::istringstream in(out.str());
  const AdjacencyGraph back = read_graph(in);
  EXPECT_EQ(back, g.adjacency);
  std::ostringstream again;
  write_graph(back, again);
  EXPECT_EQ(again.str(), out.str());
  EXPECT_EQ(graph_digest(back), graph_digest(g.adjacency));
}

TEST(GraphAuditTest, DetectsEachViolation) {
  const VectorSet data(3, 1, std::vector<float>{0, 1, 3});
  AdjacencyGraph g(3);
  g.mutable_neighbors(0) = {{1, 1}, {2, 3}};
  GraphAuditOptions opts;
  opts.data = &data;
  EXPECT_TRUE(audit_graph(g, opts).ok());

  AdjacencyGraph self = g;
  self.mutable_neighbors(1) = {{1, 0}};
  EXPECT_FALSE(audit_graph(self).ok());

  AdjacencyGraph dup = g;
  dup.mutable_neighbors(0).push_back({2, 3});
  EXPECT_FALSE(audit_graph(dup).ok());

  AdjacencyGraph unsorted = g;
  std::swap(unsorted.mutable_neighbors(0)[0], unsorted.mutable_neighbors(0)[1]);
  EXPECT_FALSE(audit_graph(unsorted).ok());

  AdjacencyGraph out_of_range = g;
  out_of_range.mutable_neighbors(2) = {{7, 1}};
  EXPECT_FALSE(audit_graph(out_of_range).ok());

  AdjacencyGraph wrong = g;
  wrong.mutable_neighbors(0)[1].distance = 2.5f;
  EXPECT_FALSE(audit_graph(wrong, opts).ok());

  opts.max_degree = 1;
  EXPECT_FALSE(audit_graph(g, opts).ok());

  EXPECT_FALSE(audit_symmetry(g).ok());
  AdjacencyGraph sym(2);
  sym.mutable_neighbors(0) = {{1, 1}};
  sym.mutable_neighbors(1) = {{0, 1}};
  EXPECT_TRUE(audit_symmetry(sym).ok());
}

TEST(NnDescentTest, TwoVertices) {
  const VectorSet data(2, 1, std::vector<float>{0, 5});
  const KnnGraph g = build_knn_graph(data, 1, {});
  ASSERT_EQ(g.adjacency.neighbors(0).size(), 1u);
  EXPECT_EQ(g.adjacency.neighbors(0)[0].id, 1u);
  EXPECT_EQ(g.adjacency.neighbors(1)[0].id, 0u);
  EXPECT_FLOAT_EQ(g.adjacency.neighbors(1)[0].distance, 5.0f);
}

TEST(NnDescentTest, Preconditions) {
  const VectorSet data = random_set(10, 2, 1);
  EXPECT_THROW(build_knn_graph(data, 10, {}), UsageError);
  EXPECT_THROW(build_knn_graph(data, 0, {}), UsageError);
  NnDescentParams bad;
  bad.rho = 0;
  EXPECT_THROW(build_knn_graph(data, 3, bad), UsageError);
  EXPECT_THROW(graph_recall(AdjacencyGraph(3), AdjacencyGraph(4), 1), UsageError);
}

TEST(NnDescentTest, SmallGraphNearlyExact) {
  const VectorSet data = random_set(50, 4, 8);
  const KnnGraph g = build_knn_graph(data, 10, {});
  expect_knn_invariants(g, data, 10);
  const KnnGraph exact = exact_knn_graph(data, 10);
  EXPECT_GE(graph_recall(g.adjacency, exact.adjacency, 10), 0.99);
  EXPECT_DOUBLE_EQ(graph_recall(exact.adjacency, exact.adjacency, 10), 1.0);
}

TEST(NnDescentTest, ExactGraphMatchesOracle) {
  const VectorSet data = random_set(120, 3, 4);
  const KnnGraph exact = exact_knn_graph(data, 7);
  for (size_t v = 0; v < data.size(); ++v) {
    const auto want =
        graphann::testing::naive_knn(data, data.row_ptr(v), 7, static_cast<long>(v));
    EXPECT_TRUE(graphann::testing::same_ranking(
        graphann::testing::ids_of(exact.adjacency.neighbors(v)), want));
  }
}

TEST(NnDescentTest, RandomInitializationHasLowRecall) {
  const VectorSet data = generate_uniform(10000, 8, 3);
  NnDescentParams p;
  p.max_iterations = 0;
  const KnnGraph g = build_knn_graph(data, 10, p);
  EXPECT_EQ(g.stats.iterations, 0u);
  expect_knn_invariants(g, data, 10);
  const KnnGraph exact = exact_knn_graph(data, 10);
  EXPECT_LT(graph_recall(g.adjacency, exact.adjacency, 10), 0.05);
}

TEST(NnDescentTest, MeanDistanceNonIncreasingAndDeterministic) {
  const VectorSet data = random_set(2000, 8, 6);
  NnDescentParams p;
  p.seed = 77;
  const KnnGraph a = build_knn_graph(data, 15, p);
  const KnnGraph b = build_knn_graph(data, 15, p);
  EXPECT_EQ(a.adjacency, b.adjacency);
  EXPECT_EQ(a.stats.distance_evaluations, b.stats.distance_evaluations);
  ASSERT_EQ(a.stats.mean_distance.size(), a.stats.iterations + 1u);
  for (size_t i = 1; i < a.stats.mean_distance.size(); ++i) {
    EXPECT_LE(a.stats.mean_distance[i], a.stats.mean_distance[i - 1]);
  }
  p.seed = 78;
  EXPECT_NE(build_knn_graph(data, 15, p).adjacency, a.adjacency);
}

TEST(NnDescentTest, DuplicatePointsAreLegalNeighbors) {
  std::vector<float> values;
  for (int i = 0; i < 30; ++i) {
    values.push_back(static_cast<float>(i % 10));
    values.push_back(0);
  }
  const VectorSet data(30, 2, values);
  const KnnGraph g = build_knn_graph(data, 4, {});
  expect_knn_invariants(g, data, 4);
  for (size_t v = 0; v < 30; ++v) {
    EXPECT_EQ(g.adjacency.neighbors(v)[0].distance, 0.0f) << v;
  }
}

TEST(NnDescentTest, MultiThreadedStaysValid) {
  const VectorSet data = random_set(3000, 6, 12);
  NnDescentParams p;
  p.threads = 4;
  const KnnGraph g = build_knn_graph(data, 10, p);
  expect_knn_invariants(g, data, 10);
  const KnnGraph exact = exact_knn_graph(data, 10, 4);
  EXPECT_GE(graph_recall(g.adjacency, exact.adjacency, 10), 0.95);
}
