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

#include "graphann/graph.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "graphann/binary_io.h"
#include "graphann/distance.h"
#include "graphann/errors.h"

namespace graphann {

size_t AdjacencyGraph::edge_count() const {
  size_t total = 0;
  for (const auto& l : lists_) total += l.size();
  return total;
}

size_t AdjacencyGraph::max_degree() const {
  size_t best = 0;
  for (const auto& l : lists_) best = std::max(best, l.size());
  return best;
}

void write_graph(const AdjacencyGraph& graph, std::ostream& out) {
  binary::put_magic(out, "KNNG");
  binary::put<uint8_t>(out, kGraphFormatVersion);
  binary::put<uint32_t>(out, static_cast<uint32_t>(graph.size()));
  for (size_t v = 0; v < graph.size(); ++v) {
    const auto list = graph.neighbors(v);
    binary::put<uint32_t>(out, static_cast<uint32_t>(list.size()));
    for (const Neighbor& nb : list) {
      binary::put<uint32_t>(out, nb.id);
      binary::put<float>(out, nb.distance);
    }
  }
}

AdjacencyGraph read_graph(std::istream& in) {
  binary::expect_magic(in, "KNNG");
  const auto version = binary::get<uint8_t>(in, "graph version");
  if (version != kGraphFormatVersion) {
    throw FormatError("unsupported KNNG version " + std::to_string(version));
  }
  const auto n = binary::get<uint32_t>(in, "vertex count");
  AdjacencyGraph graph(n);
  for (uint32_t v = 0; v < n; ++v) {
    const auto count = binary::get<uint32_t>(in, "neighbor count");
    if (count > n) {
      throw FormatError("vertex " + std::to_string(v) + " lists " +
                        std::to_string(count) + " neighbors in a graph of " +
                        std::to_string(n));
    }
    auto& list = graph.mutable_neighbors(v);
    list.resize(count);
    for (auto& nb : list) {
      nb.id = binary::get<uint32_t>(in, "neighbor id");
      nb.distance = binary::get<float>(in, "neighbor distance");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after KNNG payload");
  }
  return graph;
}

void save_graph(const AdjacencyGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_graph(graph, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

AdjacencyGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_graph(in);
}

uint64_t graph_digest(const AdjacencyGraph& graph) {
  std::ostringstream buffer(std::ios::binary);
  write_graph(graph, buffer);
  const std::string bytes = buffer.str();
  return binary::fnv1a(bytes.data(), bytes.size());
}

AuditReport audit_graph(const AdjacencyGraph& graph,
                        const GraphAuditOptions& options) {
  AuditReport report;
  const size_t n = graph.size();
  if (options.data && options.data->size() != n) {
    report.fail("graph has " + std::to_string(n) + " vertices but data has " +
                std::to_string(options.data->size()) + " rows");
    return report;
  }
  std::unordered_set<uint32_t> seen;
  for (size_t v = 0; v < n; ++v) {
    const auto list = graph.neighbors(v);
    const std::string where = "vertex " + std::to_string(v) + ": ";
    if (options.max_degree && list.size() > *options.max_degree) {
      report.fail(where + "degree " + std::to_string(list.size()) +
                  " exceeds cap " + std::to_string(*options.max_degree));
    }
    seen.clear();
    for (size_t i = 0; i < list.size(); ++i) {
      const Neighbor& nb = list[i];
      if (nb.id >= n) {
        report.fail(where + "neighbor id " + std::to_string(nb.id) + " out of range");
        continue;
      }
      if (nb.id == v) report.fail(where + "self-loop");
      if (!seen.insert(nb.id).second) {
        report.fail(where + "duplicate neighbor " + std::to_string(nb.id));
      }
      if (options.require_sorted && i > 0 && closer(nb, list[i - 1])) {
        report.fail(where + "list not sorted at position " + std::to_string(i));
      }
      if (options.data) {
        const float expect = row_distance(*options.data, v, nb.id);
        const double tol = options.distance_rel_tolerance *
                           std::max(1e-12, static_cast<double>(std::fabs(expect)));
        if (std::fabs(static_cast<double>(nb.distance) - expect) > tol + 1e-7) {
          report.fail(where + "stored distance " + std::to_string(nb.distance) +
                      " to " + std::to_string(nb.id) + " != recomputed " +
                      std::to_string(expect));
        }
      }
    }
  }
  return report;
}

AuditReport audit_symmetry(const AdjacencyGraph& graph) {
  AuditReport report;
  std::vector<std::vector<uint32_t>> sorted_ids(graph.size());
  for (size_t v = 0; v < graph.size(); ++v) {
    for (const auto& nb : graph.neighbors(v)) sorted_ids[v].push_back(nb.id);
    std::sort(sorted_ids[v].begin(), sorted_ids[v].end());
  }
  for (size_t v = 0; v < graph.size(); ++v) {
    for (uint32_t u : sorted_ids[v]) {
      if (u >= graph.size()) continue;
      if (!std::binary_search(sorted_ids[u].begin(), sorted_ids[u].end(),
                              static_cast<uint32_t>(v))) {
        report.fail("edge " + std::to_string(v) + "->" + std::to_string(u) +
                    " has no reverse");
      }
    }
  }
  return report;
}

}  // namespace graphann
