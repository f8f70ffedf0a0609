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
#include <vector>

#include "graphann/graph.h"
#include "graphann/vector_set.h"

namespace graphann {

struct NnDescentParams {
  /// Fraction of each list sampled per iteration, in (0, 1].
  double rho = 0.5;
  /// Stop once an iteration updates fewer than delta * n * K list slots.
  double delta = 0.001;
  uint32_t max_iterations = 30;
  uint64_t seed = 0;
  /// 1 is the deterministic mode. More workers parallelize the local join
  /// with per-list locking; the result then depends on scheduling.
  unsigned threads = 1;
};

struct NnDescentStats {
  uint32_t iterations = 0;
  uint64_t distance_evaluations = 0;
  /// Mean stored distance over all list slots, after initialization
  /// (index 0) and after each iteration.
  std::vector<double> mean_distance;
  /// List updates made in each iteration.
  std::vector<uint64_t> updates;
};

/// Approximate k-NN graph: every list holds up to `capacity` neighbors,
/// ascending by distance (ties by id), without self-loops or duplicates.
struct KnnGraph {
  uint32_t capacity = 0;
  AdjacencyGraph adjacency;
  NnDescentStats stats;
};

/// NN-Descent: random initial lists refined by local joins over sampled
/// neighbors and reverse neighbors. Requires 2 <= n and K < n.
KnnGraph build_knn_graph(const VectorSet& data, size_t K,
                         const NnDescentParams& params = {});

/// Brute-force k-NN graph (self excluded); the construction oracle.
KnnGraph exact_knn_graph(const VectorSet& data, size_t K, unsigned threads = 1);

/// Mean over vertices of |approx top-at_k  ∩  exact top-at_k| / at_k. An
/// approximate neighbor whose distance ties the exact at_k-th distance
/// counts as a hit.
double graph_recall(const AdjacencyGraph& approx, const AdjacencyGraph& exact,
                    size_t at_k);

}  // namespace graphann
