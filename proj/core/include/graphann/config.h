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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphann/hnsw.h"
#include "graphann/nndescent.h"
#include "graphann/vector_set.h"

namespace graphann {

enum class Algorithm : uint8_t { kHnsw, kFlatHnsw, kKGraph, kKGraphGd, kDpg, kBrute };

std::string_view algorithm_name(Algorithm a);
/// Accepts the CSV names: HNSW, flat-HNSW, KGraph, KGraph+GD, DPG, brute.
Algorithm parse_algorithm(std::string_view name);

struct DatasetSpec {
  std::string name = "dataset";
  Metric metric = Metric::kL2;
  // Synthetic uniform data, used when `base` is empty.
  size_t n = 0;
  size_t d = 0;
  uint64_t seed = 1;
  size_t query_count = 1000;
  uint64_t query_seed = 2;
  // File-backed data.
  std::filesystem::path base;
  std::filesystem::path queries;
  /// Prefix of a cached ground-truth pair; computed and written if absent.
  std::filesystem::path ground_truth;
};

struct TrajectorySpec {
  size_t ef = 128;
  size_t queries = 50;
  size_t buckets = 10;
  /// Explicit descending edges; empty selects the geometric default.
  std::vector<double> edges;
};

/// One config fully determines a run. Loaded from YAML:
///
///   dataset:
///     name: rand4d
///     metric: l2
///     synthetic: {n: 200000, d: 4, seed: 1}   # or base:/queries: paths
///     queries: 1000
///     query_seed: 2
///     ground_truth: cache/rand4d_gt          # optional
///   algorithms: [HNSW, flat-HNSW, KGraph, KGraph+GD, DPG, brute]
///   hnsw: {M: 16, ef_construction: 200}
///   kgraph: {K: 20, rho: 0.5, delta: 0.001, max_iterations: 30}
///   ef: [8, 16, 32, 64, 128, 256, 512]
///   k: 1
///   seed: 42
///   seed_count: 0            # flat-search random seeds, 0 = ef
///   threads: 1               # build workers
///   output_dir: results/rand4d
///   trajectory: {ef: 128, queries: 50, buckets: 10}
struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<Algorithm> algorithms;
  HnswParams hnsw;
  size_t kgraph_k = 20;
  NnDescentParams kgraph;
  std::vector<size_t> ef_sweep = {8, 16, 32, 64, 128, 256, 512};
  size_t k = 1;
  uint64_t seed = 42;
  size_t seed_count = 0;
  unsigned threads = 1;
  std::filesystem::path output_dir = "results";
  TrajectorySpec trajectory;

  /// Throws UsageError on inconsistent values, IoError on missing files.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace graphann
