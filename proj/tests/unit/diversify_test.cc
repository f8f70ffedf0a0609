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

#include "../common/oracles.h"
#include "graphann/distance.h"
#include "graphann/diversify.h"
#include "graphann/errors.h"
#include "graphann/nndescent.h"

using namespace graphann;
using graphann::testing::ids_of;
using graphann::testing::random_set;

namespace {

// Vertex 0 at `base` with every other point as its sorted source list.
struct Star {
  VectorSet data;
  AdjacencyGraph graph;
};

Star star(std::vector<float> coords) {
  Star s;
  const size_t n = coords.size() / 2;
  s.data = VectorSet(n, 2, std::move(coords));
  s.graph = AdjacencyGraph(n);
  for (uint32_t i = 1; i < n; ++i) {
    s.graph.mutable_neighbors(0).push_back({i, row_distance(s.data, 0, i)});
  }
  std::sort(s.graph.mutable_neighbors(0).begin(), s.graph.mutable_neighbors(0).end(), closer);
  return s;
}

}  // namespace

TEST(GdTest, CollinearOcclusion) {
  const Star s = star({0, 0, 1, 0, 1.5, 0});
  const auto kept = ids_of(gd_prune(s.graph, s.data).adjacency.neighbors(0));
  EXPECT_EQ(kept, (std::vector<uint32_t>{1}));
}

TEST(GdTest, OrthogonalKept) {
  // Three entries so the cap of two does not interfere.
  const Star s = star({0, 0, 1, 0, 0, 2, 1.2f, 0});
  const auto kept = ids_of(gd_prune(s.graph, s.data).adjacency.neighbors(0));
  EXPECT_EQ(kept, (std::vector<uint32_t>{1, 2}));
}

TEST(GdTest, CapIsHalfRoundedUp) {
  EXPECT_EQ(gd_degree_cap(20), 10u);
  EXPECT_EQ(gd_degree_cap(5), 3u);
  EXPECT_EQ(gd_degree_cap(1), 1u);
  // Five directions at 72 degrees: none occludes another.
  std::vector<float> c{0, 0};
  for (int i = 0; i < 5; ++i) {
    c.push_back(std::cos(i * 1.2566371f) * (1 + 0.01f * i));
    c.push_back(std::sin(i * 1.2566371f) * (1 + 0.01f * i));
  }
  const Star s = star(c);
  EXPECT_EQ(gd_prune(s.graph, s.data).adjacency.neighbors(0).size(), 3u);
}

TEST(GdTest, EqualDistanceOccludes) {
  // dist(e, a) = 2 = dist(e, b).
  const Star s = star({0, 0, 1, 1.7320508f, 2, 0, 0, -3});
  const auto kept = ids_of(gd_prune(s.graph, s.data).adjacency.neighbors(0));
  const float de = row_distance(s.data, 2, 0), dbe = row_distance(s.data, 2, 1);
  if (de == dbe) {
    EXPECT_EQ(kept, (std::vector<uint32_t>{1, 3}));
  } else {
    GTEST_SKIP() << "float rounding broke the tie";
  }
}

TEST(GdTest, UnsortedSourceRejected) {
  Star s = star({0, 0, 1, 0, 0, 2});
  std::reverse(s.graph.mutable_neighbors(0).begin(), s.graph.mutable_neighbors(0).end());
  EXPECT_THROW(gd_prune(s.graph, s.data), UsageError);
  EXPECT_THROW(dpg_prune(s.graph, s.data), UsageError);
}

TEST(GdTest, MatchesDirectImplementation) {
  const VectorSet data = random_set(500, 2, 31);
  const KnnGraph knn = build_knn_graph(data, 20, {});
  const DiversifiedGraph gd = gd_prune(knn.adjacency, data);
  EXPECT_EQ(gd.provenance, Provenance::kGd);
  EXPECT_EQ(gd.source_digest, graph_digest(knn.adjacency));
  for (uint32_t v = 0; v < data.size(); ++v) {
    const auto want = graphann::testing::naive_gd_list(data, v, ids_of(knn.adjacency.neighbors(v)));
    EXPECT_EQ(ids_of(gd.adjacency.neighbors(v)), want) << "vertex " << v;
  }
  EXPECT_TRUE(audit_gd(gd.adjacency, data, &knn.adjacency).ok());
  EXPECT_EQ(gd_prune(knn.adjacency, data, 3).adjacency, gd.adjacency);
}

TEST(GdTest, AuditCatchesOcclusionAndCap) {
  const Star s = star({0, 0, 1, 0, 1.5, 0, 0, 2, -1, -1});
  AdjacencyGraph bad(5);
  bad.mutable_neighbors(0) = {{1, 1}, {2, 1.5}};
  EXPECT_FALSE(audit_gd(bad, s.data).ok());
  AdjacencyGraph too_many(5);
  too_many.mutable_neighbors(0) = {{1, 1}, {4, 1.4142135f}, {3, 2}};
  EXPECT_TRUE(audit_gd(too_many, s.data).ok());
  // Source length 4 allows at most 2 kept entries.
  EXPECT_FALSE(audit_gd(too_many, s.data, &s.graph).ok());
}

TEST(DpgTest, HandCases) {
  const Star pair = star({0, 0, 1, 0, 1.1f, 0});
  const auto kept = ids_of(dpg_prune(pair.graph, pair.data).adjacency.neighbors(0));
  // Both removed by the rule; the nearest is retained.
  EXPECT_EQ(kept, (std::vector<uint32_t>{1}));

  const Star ortho = star({0, 0, 1, 0, 0, 1});
  EXPECT_EQ(dpg_prune(ortho.graph, ortho.data).adjacency.neighbors(0).size(), 2u);
}

TEST(DpgTest, MatchesDirectImplementation) {
  const VectorSet data = random_set(500, 2, 41);
  const KnnGraph knn = build_knn_graph(data, 20, {});
  const DiversifiedGraph dpg = dpg_prune(knn.adjacency, data);
  EXPECT_EQ(dpg.provenance, Provenance::kDpg);
  for (uint32_t v = 0; v < data.size(); ++v) {
    const auto want = graphann::testing::naive_dpg_list(data, v, ids_of(knn.adjacency.neighbors(v)));
    EXPECT_EQ(ids_of(dpg.adjacency.neighbors(v)), want) << "vertex " << v;
    EXPECT_GE(dpg.adjacency.neighbors(v).size(), 1u);
  }
}

TEST(ReverseEdgesTest, Properties) {
  DiversifiedGraph one;
  one.adjacency = AdjacencyGraph(2);
  one.adjacency.mutable_neighbors(0) = {{1, 2}};
  const DiversifiedGraph both = add_reverse_edges(one);
  EXPECT_EQ(both.provenance, Provenance::kGdReverse);
  ASSERT_EQ(both.adjacency.neighbors(1).size(), 1u);
  EXPECT_EQ(both.adjacency.neighbors(1)[0].id, 0u);
  EXPECT_EQ(add_reverse_edges(both).adjacency, both.adjacency);

  const VectorSet data = random_set(800, 3, 5);
  const KnnGraph knn = build_knn_graph(data, 16, {});
  for (const DiversifiedGraph& g : {gd_prune(knn.adjacency, data), dpg_prune(knn.adjacency, data)}) {
    const DiversifiedGraph u = add_reverse_edges(g);
    EXPECT_TRUE(has_reverse_edges(u.provenance));
    EXPECT_TRUE(audit_symmetry(u.adjacency).ok());
    GraphAuditOptions opts;
    opts.data = &data;
    EXPECT_TRUE(audit_graph(u.adjacency, opts).ok());
    // Every forward edge survives.
    for (uint32_t v = 0; v < data.size(); ++v) {
      for (const Neighbor& nb : g.adjacency.neighbors(v)) {
        const auto list = u.adjacency.neighbors(v);
        EXPECT_TRUE(std::any_of(list.begin(), list.end(),
                                [&](const Neighbor& x) { return x.id == nb.id; }));
      }
    }
  }
}

TEST(ProvenanceTest, SidecarRoundTrip) {
  graphann::testing::TempDir dir("prov");
  const VectorSet data = random_set(100, 2, 1);
  const KnnGraph knn = build_knn_graph(data, 8, {});
  const DiversifiedGraph g = add_reverse_edges(dpg_prune(knn.adjacency, data));
  write_provenance(g, dir / "g.prov");
  const ProvenanceRecord r = read_provenance(dir / "g.prov");
  EXPECT_EQ(r.provenance, Provenance::kDpgReverse);
  EXPECT_EQ(r.source_digest, g.source_digest);
  EXPECT_EQ(r.max_degree, g.max_degree());
  EXPECT_EQ(provenance_path("x/g.knng"), std::filesystem::path("x/g.knng.prov"));
  EXPECT_THROW(parse_provenance("NSG"), FormatError);
}
