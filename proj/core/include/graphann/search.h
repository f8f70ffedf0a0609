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
#include <limits>
#include <vector>

#include "graphann/graph.h"
#include "graphann/random.h"
#include "graphann/vector_set.h"

namespace graphann {

/// Best distance seen so far after each distance evaluation of one query.
/// best_so_far[i] belongs to evaluation index i + 1.
struct SearchTrace {
  std::vector<float> best_so_far;

  uint64_t total_evaluations() const { return best_so_far.size(); }
  float terminal_best() const {
    return best_so_far.empty() ? std::numeric_limits<float>::infinity()
                               : best_so_far.back();
  }
};

struct SearchResult {
  /// Up to k nearest found, ascending (ties by id).
  std::vector<Neighbor> neighbors;
  uint64_t evaluations = 0;
};

/// Per-query visited marks, reusable across queries without clearing.
class VisitedTable {
 public:
  explicit VisitedTable(size_t n = 0) : marks_(n, 0) {}

  void reset(size_t n) {
    if (marks_.size() != n) {
      marks_.assign(n, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {
      std::fill(marks_.begin(), marks_.end(), 0);
      epoch_ = 1;
    }
  }
  bool visited(uint32_t v) const { return marks_[v] == epoch_; }
  /// Marks v; returns true if it was already marked.
  bool test_and_set(uint32_t v) {
    if (marks_[v] == epoch_) return true;
    marks_[v] = epoch_;
    return false;
  }

 private:
  std::vector<uint16_t> marks_;
  uint16_t epoch_ = 0;
};

/// Reusable per-thread query state.
struct SearchScratch {
  VisitedTable visited;
  /// Distances already computed on HNSW upper layers for this query.
  VisitedTable cached;
  std::vector<float> cached_distance;
};

struct FlatSearchParams {
  /// Pool size.
  size_t ef = 64;
  size_t k = 1;
  /// Random starting vertices; 0 means ef.
  size_t seed_count = 0;
  /// Explicit starting vertices. When non-empty, replaces random seeding.
  std::vector<uint32_t> seed_ids;
};

/// Best-first (hill-climbing) search over a flat graph from random seeds.
///
/// Seeds are seed_count distinct random vertices. The pool keeps the ef
/// best evaluated vertices; the nearest unexpanded pool member is expanded
/// until it is farther than the pool's worst. Every vertex is evaluated at
/// most once. `scratch` and `trace` are optional.
SearchResult best_first_search(const AdjacencyGraph& graph,
                               const VectorSet& data, VectorView query,
                               const FlatSearchParams& params, Rng& rng,
                               SearchScratch* scratch = nullptr,
                               SearchTrace* trace = nullptr);

/// Per-query generator derived from (global seed, query index).
inline Rng query_rng(uint64_t global_seed, uint64_t query_index) {
  return Rng(derive_seed(global_seed, query_index));
}

}  // namespace graphann
