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

#include "graphann/diversify.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/parallel.h"

namespace graphann {

namespace {

void require_sorted(const AdjacencyGraph& graph, const VectorSet& data) {
  if (graph.size() != data.size()) {
    throw UsageError("graph has " + std::to_string(graph.size()) +
                     " vertices but data has " + std::to_string(data.size()));
  }
  for (size_t v = 0; v < graph.size(); ++v) {
    const auto list = graph.neighbors(v);
    for (size_t i = 1; i < list.size(); ++i) {
      if (closer(list[i], list[i - 1])) {
        throw UsageError("source list of vertex " + std::to_string(v) +
                         " is not sorted by distance");
      }
    }
  }
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kGd: return "GD";
    case Provenance::kDpg: return "DPG";
    case Provenance::kGdReverse: return "GD+reverse";
    case Provenance::kDpgReverse: return "DPG+reverse";
  }
  return "?";
}

Provenance parse_provenance(std::string_view name) {
  for (auto p : {Provenance::kGd, Provenance::kDpg, Provenance::kGdReverse,
                 Provenance::kDpgReverse}) {
    if (provenance_name(p) == name) return p;
  }
  throw FormatError("unknown provenance tag '" + std::string(name) + "'");
}

bool has_reverse_edges(Provenance p) {
  return p == Provenance::kGdReverse || p == Provenance::kDpgReverse;
}

DiversifiedGraph gd_prune(const AdjacencyGraph& graph, const VectorSet& data,
                          unsigned threads) {
  require_sorted(graph, data);
  DiversifiedGraph out;
  out.provenance = Provenance::kGd;
  out.source_digest = graph_digest(graph);
  out.adjacency = AdjacencyGraph(graph.size());
  parallel_for(graph.size(), threads, [&](size_t v) {
    const auto source = graph.neighbors(v);
    std::vector<Neighbor> kept;
    select_by_occlusion(
        source, gd_degree_cap(source.size()),
        [&](uint32_t a, uint32_t b) { return row_distance(data, a, b); }, kept);
    out.adjacency.mutable_neighbors(v) = std::move(kept);
  });
  return out;
}

DiversifiedGraph dpg_prune(const AdjacencyGraph& graph, const VectorSet& data,
                           unsigned threads) {
  require_sorted(graph, data);
  DiversifiedGraph out;
  out.provenance = Provenance::kDpg;
  out.source_digest = graph_digest(graph);
  out.adjacency = AdjacencyGraph(graph.size());
  parallel_for(graph.size(), threads, [&](size_t v) {
    const auto source = graph.neighbors(v);
    auto& kept = out.adjacency.mutable_neighbors(v);
    for (size_t i = 0; i < source.size(); ++i) {
      const Neighbor& e = source[i];
      bool keep = true;
      for (size_t j = 0; j < source.size() && keep; ++j) {
        if (j == i) continue;
        if (row_distance(data, e.id, source[j].id) < e.distance) keep = false;
      }
      if (keep) kept.push_back(e);
    }
    if (kept.empty() && !source.empty()) kept.push_back(source[0]);
  });
  return out;
}

DiversifiedGraph add_reverse_edges(const DiversifiedGraph& graph) {
  const size_t n = graph.adjacency.size();
  // Phase 1: collect reverse entries. Phase 2: merge, dedupe, sort. Both
  // are order-independent, so the output is deterministic.
  std::vector<std::vector<Neighbor>> reverse(n);
  for (size_t v = 0; v < n; ++v) {
    for (const Neighbor& nb : graph.adjacency.neighbors(v)) {
      reverse[nb.id].push_back(Neighbor{static_cast<uint32_t>(v), nb.distance});
    }
  }
  DiversifiedGraph out;
  out.provenance = graph.provenance == Provenance::kDpg ||
                           graph.provenance == Provenance::kDpgReverse
                       ? Provenance::kDpgReverse
                       : Provenance::kGdReverse;
  out.source_digest = graph.source_digest;
  out.adjacency = AdjacencyGraph(n);
  for (size_t v = 0; v < n; ++v) {
    auto& list = out.adjacency.mutable_neighbors(v);
    const auto own = graph.adjacency.neighbors(v);
    list.assign(own.begin(), own.end());
    list.insert(list.end(), reverse[v].begin(), reverse[v].end());
    std::sort(list.begin(), list.end(), closer);
    list.erase(std::unique(list.begin(), list.end(),
                           [](const Neighbor& a, const Neighbor& b) { return a.id == b.id; }),
               list.end());
  }
  return out;
}

AuditReport audit_gd(const AdjacencyGraph& pruned, const VectorSet& data,
                     const AdjacencyGraph* source) {
  AuditReport report;
  if (pruned.size() != data.size()) {
    report.fail("graph/data size mismatch");
    return report;
  }
  for (size_t a = 0; a < pruned.size(); ++a) {
    const auto kept = pruned.neighbors(a);
    for (size_t i = 0; i < kept.size(); ++i) {
      const float to_base = row_distance(data, a, kept[i].id);
      for (size_t j = 0; j < i; ++j) {
        if (!(to_base < row_distance(data, kept[i].id, kept[j].id))) {
          report.fail("vertex " + std::to_string(a) + ": kept neighbor " +
                      std::to_string(kept[i].id) + " is occluded by " +
                      std::to_string(kept[j].id));
        }
      }
    }
    if (source) {
      const auto src = source->neighbors(a);
      if (kept.size() > gd_degree_cap(src.size())) {
        report.fail("vertex " + std::to_string(a) + ": kept " +
                    std::to_string(kept.size()) + " > cap " +
                    std::to_string(gd_degree_cap(src.size())));
      }
      for (const auto& nb : kept) {
        if (std::none_of(src.begin(), src.end(),
                         [&](const Neighbor& s) { return s.id == nb.id; })) {
          report.fail("vertex " + std::to_string(a) + ": kept " +
                      std::to_string(nb.id) + " not in source list");
        }
      }
    }
  }
  return report;
}

std::filesystem::path provenance_path(const std::filesystem::path& graph_path) {
  return std::filesystem::path(graph_path.string() + ".prov");
}

void write_provenance(const DiversifiedGraph& graph,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  char digest[17];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(graph.source_digest));
  out << "provenance=" << provenance_name(graph.provenance)
      << " source_digest=" << digest << " max_degree=" << graph.max_degree()
      << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

ProvenanceRecord read_provenance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::istringstream fields(line);
  ProvenanceRecord record;
  bool saw_tag = false;
  for (std::string field; fields >> field;) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw FormatError("bad provenance field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      if (key == "provenance") {
        record.provenance = parse_provenance(value);
        saw_tag = true;
      } else if (key == "source_digest") {
        record.source_digest = std::stoull(value, nullptr, 16);
      } else if (key == "max_degree") {
        record.max_degree = std::stoull(value);
      }
    } catch (const std::logic_error&) {
      throw FormatError("bad provenance value '" + field + "'");
    }
  }
  if (!saw_tag) throw FormatError(path.string() + ": missing provenance tag");
  return record;
}

}  // namespace graphann
