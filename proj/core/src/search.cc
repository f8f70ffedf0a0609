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

#include "graphann/search.h"

#include <optional>
#include <string>

#include "graphann/detail/best_first.h"
#include "graphann/distance.h"
#include "graphann/errors.h"

namespace graphann {

namespace {

// Adapts an adjacency list (id, distance entries) to a range of ids.
struct IdRange {
  std::span<const Neighbor> list;
  struct iterator {
    const Neighbor* p;
    uint32_t operator*() const { return p->id; }
    iterator& operator++() {
      ++p;
      return *this;
    }
    bool operator!=(const iterator& o) const { return p != o.p; }
  };
  iterator begin() const { return {list.data()}; }
  iterator end() const { return {list.data() + list.size()}; }
};

}  // namespace

SearchResult best_first_search(const AdjacencyGraph& graph,
                               const VectorSet& data, VectorView query,
                               const FlatSearchParams& params, Rng& rng,
                               SearchScratch* scratch, SearchTrace* trace) {
  const size_t n = graph.size();
  if (n == 0) throw UsageError("search on an empty graph");
  if (data.size() != n) {
    throw UsageError("graph has " + std::to_string(n) + " vertices but data has " +
                     std::to_string(data.size()));
  }
  if (query.size() != data.dim()) throw UsageError("query dimension mismatch");
  if (params.ef == 0 || params.k == 0 || params.k > params.ef) {
    throw UsageError("search needs 1 <= k <= ef");
  }
  const size_t seeds = params.seed_count == 0 ? params.ef : params.seed_count;
  if (params.seed_ids.empty() && seeds > n) {
    throw UsageError("seed count " + std::to_string(seeds) + " exceeds graph size " +
                     std::to_string(n));
  }

  SearchScratch local;
  VisitedTable& marks = scratch ? scratch->visited : local.visited;
  marks.reset(n);
  if (trace) trace->best_so_far.clear();
  detail::EvalRecorder recorder(trace);
  const size_t d = data.dim();
  const Metric metric = data.metric();
  auto evaluate = [&](uint32_t v) {
    const float dist = distance_unchecked(query.data(), data.row_ptr(v), d, metric);
    recorder.record(dist);
    return dist;
  };

  std::vector<detail::Candidate> entries;
  if (!params.seed_ids.empty()) {
    entries.reserve(params.seed_ids.size());
    for (const uint32_t v : params.seed_ids) {
      if (v >= n) throw UsageError("seed id " + std::to_string(v) + " out of range");
      if (marks.test_and_set(v)) continue;
      entries.emplace_back(evaluate(v), v);
    }
  } else {
    // Floyd's sampling of `seeds` distinct vertices, using the visited
    // marks as the membership set.
    entries.reserve(seeds);
    for (size_t j = n - seeds; j < n; ++j) {
      auto pick = static_cast<uint32_t>(uniform_below(rng, j + 1));
      if (marks.visited(pick)) pick = static_cast<uint32_t>(j);
      marks.test_and_set(pick);
      entries.emplace_back(evaluate(pick), pick);
    }
  }

  auto pool = detail::best_first_expand(
      entries, params.ef, [&](uint32_t v) { return IdRange{graph.neighbors(v)}; },
      [&](uint32_t v) -> std::optional<float> {
        if (marks.test_and_set(v)) return std::nullopt;
        return evaluate(v);
      });

  SearchResult result;
  result.evaluations = recorder.count();
  const size_t k = std::min(params.k, pool.size());
  result.neighbors.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    result.neighbors.push_back(Neighbor{pool[i].second, pool[i].first});
  }
  return result;
}

}  // namespace graphann
