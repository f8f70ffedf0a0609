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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "graphann/search.h"

namespace graphann::detail {

using Candidate = std::pair<float, uint32_t>;

/// Counts distance evaluations and appends to an optional trace.
class EvalRecorder {
 public:
  explicit EvalRecorder(SearchTrace* trace) : trace_(trace) {}

  void record(float d) {
    ++count_;
    if (d < best_) best_ = d;
    if (trace_) trace_->best_so_far.push_back(best_);
  }
  uint64_t count() const { return count_; }

 private:
  SearchTrace* trace_;
  uint64_t count_ = 0;
  float best_ = std::numeric_limits<float>::infinity();
};

/// Bounded best-first expansion shared by flat search, HNSW layer search
/// and HNSW construction.
///
/// `entries` are already evaluated and marked visited. neighbors_of(v)
/// yields the ids adjacent to v; probe(v) returns the query distance of v,
/// or nullopt if v was already visited. probe owns visited bookkeeping and
/// evaluation counting. Returns up to ef pool members in ascending
/// (distance, id) order.
template <typename NeighborsOf, typename Probe>
std::vector<Candidate> best_first_expand(std::span<const Candidate> entries,
                                         size_t ef, NeighborsOf&& neighbors_of,
                                         Probe&& probe) {
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> frontier;
  std::priority_queue<Candidate> pool;
  for (const Candidate& e : entries) {
    frontier.push(e);
    pool.push(e);
    if (pool.size() > ef) pool.pop();
  }
  while (!frontier.empty()) {
    const Candidate current = frontier.top();
    if (current > pool.top()) break;
    frontier.pop();
    for (const uint32_t nb : neighbors_of(current.second)) {
      const std::optional<float> dist = probe(nb);
      if (!dist) continue;
      const Candidate c{*dist, nb};
      if (pool.size() < ef || c < pool.top()) {
        frontier.push(c);
        pool.push(c);
        if (pool.size() > ef) pool.pop();
      }
    }
  }
  std::vector<Candidate> out(pool.size());
  for (size_t i = out.size(); i-- > 0;) {
    out[i] = pool.top();
    pool.pop();
  }
  return out;
}

}  // namespace graphann::detail
