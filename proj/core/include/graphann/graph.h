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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "graphann/audit.h"
#include "graphann/vector_set.h"

namespace graphann {

struct Neighbor {
  uint32_t id = 0;
  float distance = 0.0f;

  bool operator==(const Neighbor&) const = default;
};

/// Ascending distance, ties by ascending id.
inline bool closer(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

/// Directed graph with per-vertex neighbor lists carrying edge distances.
/// This is the in-memory form of every flat graph in the library (k-NN
/// graphs, diversified graphs, the exported HNSW bottom layer).
class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;
  explicit AdjacencyGraph(size_t n) : lists_(n) {}

  size_t size() const { return lists_.size(); }
  std::span<const Neighbor> neighbors(size_t v) const { return lists_[v]; }
  std::vector<Neighbor>& mutable_neighbors(size_t v) { return lists_[v]; }

  size_t edge_count() const;
  size_t max_degree() const;

  bool operator==(const AdjacencyGraph&) const = default;

 private:
  std::vector<std::vector<Neighbor>> lists_;
};

// "KNNG" graph file: magic "KNNG", version byte, n (uint32), then per
// vertex count (uint32) followed by count x [id uint32, distance float32].
// Little-endian throughout.
inline constexpr uint8_t kGraphFormatVersion = 1;

void write_graph(const AdjacencyGraph& graph, std::ostream& out);
AdjacencyGraph read_graph(std::istream& in);
void save_graph(const AdjacencyGraph& graph, const std::filesystem::path& path);
AdjacencyGraph load_graph(const std::filesystem::path& path);

/// FNV-1a digest of the serialized bytes.
uint64_t graph_digest(const AdjacencyGraph& graph);

struct GraphAuditOptions {
  /// Maximum list length, if bounded.
  std::optional<size_t> max_degree;
  bool require_sorted = true;
  /// When set, every stored distance is recomputed and compared.
  const VectorSet* data = nullptr;
  double distance_rel_tolerance = 1e-5;
};

/// No self-loops, no duplicate ids, ids in range, sorted lists, degree cap,
/// and (optionally) stored distances matching the data.
AuditReport audit_graph(const AdjacencyGraph& graph,
                        const GraphAuditOptions& options = {});

/// Every edge a->b has a matching b->a.
AuditReport audit_symmetry(const AdjacencyGraph& graph);

}  // namespace graphann
