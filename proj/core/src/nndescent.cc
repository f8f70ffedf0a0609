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

#include "graphann/nndescent.h"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <mutex>
#include <string>

#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/parallel.h"
#include "graphann/random.h"
#include "graphann/topk.h"

namespace graphann {

namespace {

struct PoolEntry {
  uint32_t id;
  float distance;
  bool is_new;
};

inline bool entry_less(float da, uint32_t ia, float db, uint32_t ib) {
  return da < db || (da == db && ia < ib);
}

// Bounded sorted neighbor list of one vertex.
class NeighborPool {
 public:
  std::vector<PoolEntry> entries;
  std::mutex lock;

  // Returns true when the list changed.
  bool try_insert(uint32_t id, float dist, size_t capacity) {
    if (entries.size() >= capacity) {
      const auto& worst = entries.back();
      if (!entry_less(dist, id, worst.distance, worst.id)) return false;
    }
    for (const auto& e : entries) {
      if (e.id == id) return false;
    }
    auto pos = std::find_if(entries.begin(), entries.end(), [&](const PoolEntry& e) {
      return entry_less(dist, id, e.distance, e.id);
    });
    entries.insert(pos, PoolEntry{id, dist, true});
    if (entries.size() > capacity) entries.pop_back();
    return true;
  }
};

double mean_list_distance(const std::vector<NeighborPool>& pools, size_t capacity) {
  double sum = 0.0;
  for (const auto& p : pools) {
    for (const auto& e : p.entries) sum += e.distance;
  }
  return sum / (static_cast<double>(pools.size()) * static_cast<double>(capacity));
}

void sample_down(std::vector<uint32_t>& ids, size_t cap, Rng& rng) {
  if (ids.size() <= cap) return;
  for (size_t i = 0; i < cap; ++i) {
    const size_t j = i + uniform_below(rng, ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(cap);
}

void sort_unique(std::vector<uint32_t>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

KnnGraph build_knn_graph(const VectorSet& data, size_t K,
                         const NnDescentParams& params) {
  const size_t n = data.size();
  if (n < 2) throw UsageError("NN-Descent needs at least 2 vectors");
  if (K == 0 || K >= n) {
    throw UsageError("K=" + std::to_string(K) + " must satisfy 1 <= K < n=" +
                     std::to_string(n));
  }
  if (!(params.rho > 0.0 && params.rho <= 1.0)) {
    throw UsageError("rho must lie in (0, 1]");
  }
  if (!(params.delta >= 0.0 && params.delta < 1.0)) {
    throw UsageError("delta must lie in [0, 1)");
  }

  const unsigned threads = std::max(1u, params.threads);
  std::vector<NeighborPool> pools(n);
  std::atomic<uint64_t> evaluations{0};

  // Random initialization: K distinct non-self ids per vertex, drawn from a
  // per-vertex stream so the result does not depend on worker count.
  parallel_for(n, threads, [&](size_t v) {
    Rng rng(derive_seed(params.seed, v));
    auto& entries = pools[v].entries;
    entries.reserve(K + 1);
    std::vector<uint32_t> picked;
    picked.reserve(K);
    while (picked.size() < K) {
      const auto u = static_cast<uint32_t>(uniform_below(rng, n));
      if (u == v || std::find(picked.begin(), picked.end(), u) != picked.end()) continue;
      picked.push_back(u);
    }
    for (uint32_t u : picked) {
      entries.push_back(PoolEntry{u, row_distance(data, v, u), true});
    }
    std::sort(entries.begin(), entries.end(), [](const PoolEntry& a, const PoolEntry& b) {
      return entry_less(a.distance, a.id, b.distance, b.id);
    });
  });
  evaluations += n * K;

  KnnGraph result;
  result.capacity = static_cast<uint32_t>(K);
  auto& stats = result.stats;
  stats.mean_distance.push_back(mean_list_distance(pools, K));

  const size_t sample_cap =
      std::max<size_t>(1, static_cast<size_t>(std::ceil(params.rho * K)));
  std::vector<std::vector<uint32_t>> fresh(n), stale(n), rev_fresh(n), rev_stale(n);

  for (uint32_t iter = 0; iter < params.max_iterations; ++iter) {
    // Sampling: up to sample_cap new entries (nearest first) become this
    // round's fresh set and are flagged old; entries already old form the
    // stale set.
    for (size_t v = 0; v < n; ++v) {
      fresh[v].clear();
      stale[v].clear();
      rev_fresh[v].clear();
      rev_stale[v].clear();
    }
    for (size_t v = 0; v < n; ++v) {
      for (auto& e : pools[v].entries) {
        if (e.is_new) {
          if (fresh[v].size() < sample_cap) {
            fresh[v].push_back(e.id);
            e.is_new = false;
          }
        } else {
          stale[v].push_back(e.id);
        }
      }
      for (uint32_t u : fresh[v]) rev_fresh[u].push_back(static_cast<uint32_t>(v));
      for (uint32_t u : stale[v]) rev_stale[u].push_back(static_cast<uint32_t>(v));
    }
    for (size_t v = 0; v < n; ++v) {
      Rng rng(derive_seed(params.seed, (static_cast<uint64_t>(iter) + 1) * n + v));
      sample_down(rev_fresh[v], sample_cap, rng);
      sample_down(rev_stale[v], sample_cap, rng);
      auto& f = fresh[v];
      auto& s = stale[v];
      f.insert(f.end(), rev_fresh[v].begin(), rev_fresh[v].end());
      s.insert(s.end(), rev_stale[v].begin(), rev_stale[v].end());
      sort_unique(f);
      sort_unique(s);
      // An id can be fresh for one direction and stale for the other.
      std::vector<uint32_t> only_stale;
      only_stale.reserve(s.size());
      std::set_difference(s.begin(), s.end(), f.begin(), f.end(),
                          std::back_inserter(only_stale));
      s.swap(only_stale);
    }

    // Local join: compare fresh-fresh and fresh-stale pairs.
    std::atomic<uint64_t> updates{0};
    std::atomic<uint64_t> iter_evals{0};
    auto join_pair = [&](uint32_t a, uint32_t b, uint64_t& local_updates) {
      const float dist = row_distance(data, a, b);
      if (threads == 1) {
        local_updates += pools[a].try_insert(b, dist, K);
        local_updates += pools[b].try_insert(a, dist, K);
      } else {
        {
          std::lock_guard<std::mutex> g(pools[a].lock);
          local_updates += pools[a].try_insert(b, dist, K);
        }
        std::lock_guard<std::mutex> g(pools[b].lock);
        local_updates += pools[b].try_insert(a, dist, K);
      }
    };
    parallel_for(n, threads, [&](size_t v) {
      uint64_t local_updates = 0;
      uint64_t local_evals = 0;
      const auto& f = fresh[v];
      const auto& s = stale[v];
      for (size_t i = 0; i < f.size(); ++i) {
        for (size_t j = i + 1; j < f.size(); ++j) {
          join_pair(f[i], f[j], local_updates);
          ++local_evals;
        }
        for (uint32_t b : s) {
          if (b == f[i]) continue;
          join_pair(f[i], b, local_updates);
          ++local_evals;
        }
      }
      updates += local_updates;
      iter_evals += local_evals;
    });

    evaluations += iter_evals.load();
    ++stats.iterations;
    stats.updates.push_back(updates.load());
    stats.mean_distance.push_back(mean_list_distance(pools, K));
#ifndef NDEBUG
    for (size_t v = 0; v < n; ++v) {
      const auto& e = pools[v].entries;
      assert(e.size() == K);
      for (size_t i = 0; i < e.size(); ++i) {
        assert(e[i].id != v);
        assert(i == 0 || !entry_less(e[i].distance, e[i].id, e[i - 1].distance, e[i - 1].id));
      }
    }
#endif
    if (static_cast<double>(updates.load()) <
        params.delta * static_cast<double>(n) * static_cast<double>(K)) {
      break;
    }
  }

  stats.distance_evaluations = evaluations.load();
  result.adjacency = AdjacencyGraph(n);
  for (size_t v = 0; v < n; ++v) {
    auto& list = result.adjacency.mutable_neighbors(v);
    list.reserve(K);
    for (const auto& e : pools[v].entries) list.push_back(Neighbor{e.id, e.distance});
  }
  return result;
}

KnnGraph exact_knn_graph(const VectorSet& data, size_t K, unsigned threads) {
  const size_t n = data.size();
  if (K == 0 || K >= n) throw UsageError("exact graph needs 1 <= K < n");
  KnnGraph result;
  result.capacity = static_cast<uint32_t>(K);
  result.adjacency = AdjacencyGraph(n);
  parallel_for(n, threads, [&](size_t v) {
    TopK top(K);
    for (size_t u = 0; u < n; ++u) {
      if (u != v) top.push(row_distance(data, v, u), static_cast<uint32_t>(u));
    }
    auto& list = result.adjacency.mutable_neighbors(v);
    for (const auto& [dist, id] : top.take_sorted()) list.push_back(Neighbor{id, dist});
  });
  result.stats.distance_evaluations = static_cast<uint64_t>(n) * (n - 1);
  return result;
}

double graph_recall(const AdjacencyGraph& approx, const AdjacencyGraph& exact,
                    size_t at_k) {
  if (approx.size() != exact.size()) {
    throw UsageError("graph_recall: vertex counts differ (" +
                     std::to_string(approx.size()) + " vs " +
                     std::to_string(exact.size()) + ")");
  }
  if (at_k == 0) throw UsageError("graph_recall: at_k must be >= 1");
  if (approx.size() == 0) return 1.0;
  double total = 0.0;
  std::vector<uint32_t> truth;
  for (size_t v = 0; v < approx.size(); ++v) {
    const auto a = approx.neighbors(v);
    const auto e = exact.neighbors(v);
    if (a.size() < at_k || e.size() < at_k) {
      throw UsageError("graph_recall: at_k exceeds a list length at vertex " +
                       std::to_string(v));
    }
    truth.clear();
    for (size_t i = 0; i < at_k; ++i) truth.push_back(e[i].id);
    std::sort(truth.begin(), truth.end());
    const double kth = e[at_k - 1].distance;
    const double tie_limit = kth + 1e-6 * std::fabs(kth);
    size_t hits = 0;
    for (size_t i = 0; i < at_k; ++i) {
      if (std::binary_search(truth.begin(), truth.end(), a[i].id) ||
          a[i].distance <= tie_limit) {
        ++hits;
      }
    }
    total += static_cast<double>(hits) / static_cast<double>(at_k);
  }
  return total / static_cast<double>(approx.size());
}

}  // namespace graphann
