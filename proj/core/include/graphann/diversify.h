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
#include <span>
#include <string_view>
#include <vector>

#include "graphann/audit.h"
#include "graphann/graph.h"
#include "graphann/vector_set.h"

namespace graphann {

enum class Provenance : uint8_t { kGd, kDpg, kGdReverse, kDpgReverse };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);
bool has_reverse_edges(Provenance p);

struct DiversifiedGraph {
  AdjacencyGraph adjacency;
  Provenance provenance = Provenance::kGd;
  /// graph_digest() of the k-NN graph this was derived from.
  uint64_t source_digest = 0;

  size_t max_degree() const { return adjacency.max_degree(); }
};

/// Upper bound on kept neighbors for a source list of length L (half of
/// L, rounded up).
constexpr size_t gd_degree_cap(size_t source_length) {
  return (source_length + 1) / 2;
}

/// Occlusion selection. Scans `candidates` (ascending by distance to the
/// base vertex) and keeps a candidate e iff for every already-kept s,
/// dist(e, base) < between(e, s). Equal distances occlude. Stops after
/// `limit` kept entries. Returns the number of `between` evaluations.
template <typename Between>
size_t select_by_occlusion(std::span<const Neighbor> candidates, size_t limit,
                           Between&& between, std::vector<Neighbor>& kept) {
  kept.clear();
  size_t evaluations = 0;
  for (const Neighbor& e : candidates) {
    if (kept.size() >= limit) break;
    bool occluded = false;
    for (const Neighbor& s : kept) {
      ++evaluations;
      if (!(e.distance < between(e.id, s.id))) {
        occluded = true;
        break;
      }
    }
    if (!occluded) kept.push_back(e);
  }
  return evaluations;
}

/// GD: occlusion selection on every list, capped at gd_degree_cap(L).
/// Source lists must be sorted ascending (UsageError otherwise).
DiversifiedGraph gd_prune(const AdjacencyGraph& graph, const VectorSet& data,
                          unsigned threads = 1);

/// DPG rule: keep neighbor e of a iff dist(e, a) <= dist(e, s) for every
/// other member s of a's source list. A vertex left empty keeps its nearest
/// source neighbor.
DiversifiedGraph dpg_prune(const AdjacencyGraph& graph, const VectorSet& data,
                           unsigned threads = 1);

/// Union of each list with its reverse neighbors, re-sorted ascending.
/// The result is symmetric.
DiversifiedGraph add_reverse_edges(const DiversifiedGraph& graph);

/// Checks the GD occlusion inequality on every kept list and, when the
/// source graph is given, the half-length cap and subset relation.
AuditReport audit_gd(const AdjacencyGraph& pruned, const VectorSet& data,
                     const AdjacencyGraph* source = nullptr);

/// One-line sidecar: "provenance=<tag> source_digest=<hex> max_degree=<n>".
void write_provenance(const DiversifiedGraph& graph,
                      const std::filesystem::path& path);
struct ProvenanceRecord {
  Provenance provenance = Provenance::kGd;
  uint64_t source_digest = 0;
  size_t max_degree = 0;
};
ProvenanceRecord read_provenance(const std::filesystem::path& path);
std::filesystem::path provenance_path(const std::filesystem::path& graph_path);

}  // namespace graphann
