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

#include <fstream>
#include <map>
#include <sstream>

#include "../common/oracles.h"
#include "graphann/bench.h"
#include "graphann/config.h"
#include "graphann/errors.h"

using namespace graphann;
using graphann::testing::TempDir;

namespace {

ExperimentConfig small_config(const std::filesystem::path& out) {
  ExperimentConfig cfg;
  cfg.dataset.name = "tiny";
  cfg.dataset.n = 3000;
  cfg.dataset.d = 6;
  cfg.dataset.query_count = 200;
  cfg.algorithms = {Algorithm::kHnsw, Algorithm::kFlatHnsw, Algorithm::kKGraph,
                    Algorithm::kKGraphGd, Algorithm::kDpg, Algorithm::kBrute};
  cfg.hnsw.M = 8;
  cfg.hnsw.ef_construction = 64;
  cfg.kgraph_k = 16;
  cfg.ef_sweep = {4, 8, 16, 32, 64};
  cfg.trajectory.ef = 32;
  cfg.trajectory.queries = 20;
  cfg.output_dir = out;
  return cfg;
}

GroundTruth truth_of(std::vector<uint32_t> ids, std::vector<float> dists) {
  GroundTruth gt;
  gt.queries = ids.size();
  gt.k = 1;
  gt.ids = std::move(ids);
  gt.distances = std::move(dists);
  return gt;
}

std::string without_wall_columns(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    cells[7] = cells[9] = "";
    for (const auto& c : cells) out += c + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(RecallTest, Cases) {
  const GroundTruth gt = truth_of({1, 2, 3}, {0.5f, 1.0f, 2.0f});
  const std::vector<Neighbor> same{{1, 0.5f}, {2, 1.0f}, {3, 2.0f}};
  EXPECT_DOUBLE_EQ(compute_recall_at_1(same, gt), 1.0);
  const std::vector<Neighbor> wrong{{7, 0.9f}, {8, 1.5f}, {9, 2.5f}};
  EXPECT_DOUBLE_EQ(compute_recall_at_1(wrong, gt), 0.0);
  const std::vector<Neighbor> tie{{5, 0.5f}, {8, 1.5f}, {3, 2.0f}};
  EXPECT_NEAR(compute_recall_at_1(tie, gt), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(compute_recall_at_1(std::span(same).first(2), gt), UsageError);
}

TEST(ResultsCsvTest, RoundTripsExactly) {
  TempDir dir("csv");
  BenchRecord a{"rand", Algorithm::kKGraphGd, 64, 1, 0.123456789012345, 1234.5678901234,
                162.00000000001, 3.3333333333333335, 1000, 12.75};
  BenchRecord b{"rand", Algorithm::kBrute, 0, 1, 1.0, 200000, 1.0, 0.98, 1000, 0};
  const std::vector<BenchRecord> records{a, b};
  write_results_csv(records, dir / "r.csv");
  EXPECT_EQ(read_results_csv(dir / "r.csv"), records);
  std::ifstream in(dir / "r.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "dataset,algo,ef,k,recall_at_1,mean_evals,eval_speedup,wall_speedup,query_count,"
            "build_seconds");
  std::ofstream(dir / "bad.csv") << "nope\n";
  EXPECT_THROW(read_results_csv(dir / "bad.csv"), FormatError);
}

TEST(ConfigTest, ParsesDocumentedSchema) {
  const ExperimentConfig cfg = parse_config(R"(
dataset:
  name: rand4d
  metric: l2
  synthetic: {n: 2000, d: 4, seed: 9}
  queries: 50
  query_seed: 3
  ground_truth: cache/gt
algorithms: [HNSW, flat-HNSW, KGraph, KGraph+GD, DPG, brute]
hnsw: {M: 12, ef_construction: 100}
kgraph: {K: 24, rho: 0.8, delta: 0.002, max_iterations: 10}
ef: [4, 8, 16]
k: 1
seed: 5
seed_count: 3
threads: 2
output_dir: out
trajectory: {ef: 64, queries: 10, buckets: 6}
)",
                                            "/base");
  EXPECT_EQ(cfg.dataset.name, "rand4d");
  EXPECT_EQ(cfg.dataset.n, 2000u);
  EXPECT_EQ(cfg.dataset.seed, 9u);
  EXPECT_EQ(cfg.dataset.query_count, 50u);
  EXPECT_EQ(cfg.dataset.ground_truth, std::filesystem::path("/base/cache/gt"));
  EXPECT_EQ(cfg.algorithms.size(), 6u);
  EXPECT_EQ(cfg.algorithms[3], Algorithm::kKGraphGd);
  EXPECT_EQ(cfg.hnsw.M, 12u);
  EXPECT_EQ(cfg.kgraph_k, 24u);
  EXPECT_DOUBLE_EQ(cfg.kgraph.rho, 0.8);
  EXPECT_EQ(cfg.kgraph.threads, 2u);
  EXPECT_EQ(cfg.ef_sweep, (std::vector<size_t>{4, 8, 16}));
  EXPECT_EQ(cfg.seed_count, 3u);
  EXPECT_EQ(cfg.output_dir, std::filesystem::path("/base/out"));
  EXPECT_EQ(cfg.trajectory.buckets, 6u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(ConfigTest, RejectsInvalid) {
  const std::string head = "dataset: {synthetic: {n: 100, d: 2}}\nalgorithms: [HNSW]\n";
  EXPECT_THROW(parse_config(head + "bogus: 1\n"), UsageError);
  EXPECT_THROW(parse_config(head + "hnsw: {m: 3}\n"), UsageError);
  EXPECT_THROW(parse_config("dataset: {synthetic: {n: 1, d: 1}}\nalgorithms: [NSG]\n"),
               UsageError);
  EXPECT_THROW(parse_config(head + "ef: [8, 4]\n").validate(), UsageError);
  EXPECT_THROW(parse_config(head + "ef: [0, 4]\n").validate(), UsageError);
  EXPECT_THROW(parse_config("algorithms: [HNSW]\n"), UsageError);
  EXPECT_THROW(parse_config("dataset: [\n"), UsageError);
  EXPECT_THROW(parse_config("dataset: {base: nope.fvecs, queries: q.fvecs}\nalgorithms: [HNSW]\n",
                            "/nonexistent")
                   .validate(),
               IoError);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), IoError);
}

TEST(ExperimentTest, SweepProducesConsistentRecords) {
  TempDir dir("bench");
  Experiment e(small_config(dir.path()));
  const SweepOutcome out = e.run_sweep();
  EXPECT_TRUE(out.failures.empty());
  ASSERT_EQ(out.records.size(), 5u * 5u + 1u);
  std::map<Algorithm, double> last;
  for (const auto& r : out.records) {
    EXPECT_GE(r.recall_at_1, 0.0);
    EXPECT_LE(r.recall_at_1, 1.0);
    EXPECT_GT(r.eval_speedup, 0.0);
    EXPECT_GT(r.wall_speedup, 0.0);
    EXPECT_LE(r.mean_evaluations, 3000.0);
    EXPECT_EQ(r.query_count, 200u);
    if (r.algorithm == Algorithm::kBrute) {
      EXPECT_EQ(r.recall_at_1, 1.0);
      EXPECT_EQ(r.ef, 0u);
      EXPECT_DOUBLE_EQ(r.eval_speedup, 1.0);
      continue;
    }
    if (last.count(r.algorithm)) EXPECT_GE(r.recall_at_1, last[r.algorithm] - 0.005);
    last[r.algorithm] = r.recall_at_1;
  }
  EXPECT_EQ(read_results_csv(dir / "results.csv"), out.records);
  EXPECT_TRUE(std::filesystem::exists(dir / "plot_results.py"));
}

TEST(ExperimentTest, BruteWallSpeedupNearOne) {
  TempDir dir("brute");
  ExperimentConfig cfg = small_config(dir.path());
  cfg.dataset.n = 60000;
  cfg.dataset.d = 16;
  cfg.algorithms = {Algorithm::kBrute};
  Experiment e(cfg);
  const BenchRecord r = e.measure(Algorithm::kBrute, 0);
  EXPECT_NEAR(r.wall_speedup, 1.0, 0.2);
}

TEST(ExperimentTest, RerunIsIdenticalExceptWallClock) {
  TempDir a("rerun_a"), b("rerun_b");
  ExperimentConfig cfg = small_config(a.path());
  cfg.dataset.n = 1500;
  run_sweep(cfg);
  cfg.output_dir = b.path();
  run_sweep(cfg);
  EXPECT_EQ(without_wall_columns(a / "results.csv"), without_wall_columns(b / "results.csv"));
}

TEST(ExperimentTest, BuildFailureIsRecordedAndOthersContinue) {
  TempDir dir("fail");
  ExperimentConfig cfg = small_config(dir.path());
  cfg.dataset.n = 10;
  cfg.kgraph_k = 20;
  cfg.ef_sweep = {4, 8};
  cfg.algorithms = {Algorithm::kKGraph, Algorithm::kHnsw};
  const SweepOutcome out = run_sweep(cfg);
  ASSERT_EQ(out.failures.size(), 1u);
  EXPECT_EQ(out.failures[0].rfind("KGraph:", 0), 0u);
  ASSERT_EQ(out.records.size(), 2u);
  EXPECT_EQ(out.records[0].algorithm, Algorithm::kHnsw);
}

TEST(ExperimentTest, TrajectoryConservesEvaluations) {
  TempDir dir("traj");
  Experiment e(small_config(dir.path()));
  const auto results = e.run_trajectory_study();
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) {
    EXPECT_EQ(r.histogram.total(), r.total_evaluations);
    EXPECT_EQ(r.histogram.queries, 20u);
    EXPECT_EQ(r.histogram.buckets(), 10u);
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectory_tiny_HNSW.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectory_tiny_flat_HNSW.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectory_tiny_KGraph_GD.csv"));
  const RangeHistogram back = read_histogram_csv(dir / "trajectory_tiny_HNSW.csv");
  EXPECT_EQ(back.evaluations, results[0].histogram.evaluations);
}

TEST(ExperimentTest, GroundTruthCacheIsReused) {
  TempDir dir("cache");
  ExperimentConfig cfg = small_config(dir.path());
  cfg.dataset.ground_truth = dir / "gt";
  cfg.algorithms = {Algorithm::kHnsw};
  GroundTruth first;
  {
    Experiment e(cfg);
    first = e.truth();
  }
  ASSERT_TRUE(std::filesystem::exists(dir / "gt.ivecs"));
  Experiment again(cfg);
  EXPECT_EQ(again.truth().ids, first.ids);
  EXPECT_EQ(again.truth().distances, first.distances);
}
