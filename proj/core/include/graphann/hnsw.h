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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "graphann/audit.h"
#include "graphann/graph.h"
#include "graphann/random.h"
#include "graphann/search.h"
#include "graphann/vector_set.h"

namespace graphann {

struct HnswParams {
  /// Neighbors selected per insertion layer; also the cap on layers >= 1.
  uint32_t M = 16;
  uint32_t ef_construction = 200;
  uint64_t seed = 0;
  /// Level distribution constant; 0 selects 1 / ln(M).
  double level_decay = 0.0;
};

/// floor(-ln(u) * level_decay). u must lie in the open interval (0, 1).
uint32_t assign_level(double u, double level_decay);

struct HnswBuildStats {
  uint64_t distance_evaluations = 0;
  double seconds = 0.0;
};

/// Hierarchical navigable small world index over an external VectorSet.
///
/// Vertex v with level L owns adjacency lists on layers 0..L. Layer 0 is
/// capped at 2M neighbors, upper layers at M. Lists that overflow while
/// linking are re-selected with the occlusion rule rather than truncated.
/// The index does not own the vectors; every call that needs distances
/// takes the same VectorSet the index was built over.
class HnswIndex {
 public:
  HnswIndex() = default;
  /// Empty index able to hold ids [0, capacity) of dimension dim.
  HnswIndex(size_t capacity, size_t dim, const HnswParams& params);

  /// Inserts `id` at a level drawn from the index's generator.
  void insert(uint32_t id, const VectorSet& data);
  /// Inserts `id` at a fixed level (used to force a layout in tests).
  void insert_at_level(uint32_t id, uint32_t level, const VectorSet& data);

  /// Greedy descent through the upper layers, then ef-bounded best-first
  /// search on layer 0. Upper-layer evaluations are counted and traced.
  SearchResult search(const VectorSet& data, VectorView query, size_t ef,
                      size_t k, SearchScratch* scratch = nullptr,
                      SearchTrace* trace = nullptr) const;

  /// Layer 0 as a flat graph with recomputed distances, lists ascending.
  AdjacencyGraph bottom_layer(const VectorSet& data) const;

  /// Layer nesting, degree caps, enter-point maximality, id validity, and
  /// no self-loops or duplicates.
  AuditReport audit() const;

  /// Vertices on each level: result[l] = #vertices with level >= l.
  std::vector<size_t> level_tail_counts() const;

  size_t capacity() const { return levels_.size(); }
  size_t dim() const { return dim_; }
  size_t inserted() const { return inserted_; }
  bool empty() const { return inserted_ == 0; }
  uint32_t M() const { return M_; }
  uint32_t max_degree_upper() const { return max_degree_upper_; }
  uint32_t max_degree_bottom() const { return max_degree_bottom_; }
  uint32_t ef_construction() const { return ef_construction_; }
  double level_decay() const { return level_decay_; }
  uint32_t enter_point() const { return enter_point_; }
  int32_t max_level() const { return max_level_; }
  /// -1 when the vertex has not been inserted.
  int32_t level(uint32_t v) const { return levels_[v]; }
  std::span<const uint32_t> links(uint32_t v, uint32_t layer) const {
    return links_[v][layer];
  }
  const HnswBuildStats& build_stats() const { return stats_; }
  HnswBuildStats& mutable_build_stats() { return stats_; }

  // "HNSW" magic, version byte, n, d, M, upper cap, bottom cap (uint32),
  // level decay (float64), efConstruction, enter point (uint32), max level
  // (int32); then per vertex its level (int32) and, per layer 0..level, a
  // uint32 count followed by the neighbor ids. Little-endian.
  void write(std::ostream& out) const;
  static HnswIndex read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static HnswIndex load(const std::filesystem::path& path);

  bool operator==(const HnswIndex& other) const;

 private:
  uint32_t layer_cap(uint32_t layer) const {
    return layer == 0 ? max_degree_bottom_ : max_degree_upper_;
  }
  void shrink_links(uint32_t v, uint32_t layer, const VectorSet& data);

  size_t dim_ = 0;
  uint32_t M_ = 16;
  uint32_t max_degree_upper_ = 16;
  uint32_t max_degree_bottom_ = 32;
  uint32_t ef_construction_ = 200;
  double level_decay_ = 0.0;
  uint32_t enter_point_ = 0;
  int32_t max_level_ = -1;
  size_t inserted_ = 0;
  std::vector<int32_t> levels_;
  std::vector<std::vector<std::vector<uint32_t>>> links_;
  Rng rng_;
  VisitedTable build_visited_;
  HnswBuildStats stats_;
};

/// Inserts vertices 0..n-1 in order.
HnswIndex hnsw_build(const VectorSet& data, const HnswParams& params);

}  // namespace graphann
