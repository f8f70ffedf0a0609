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

#include "graphann/hnsw.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>

#include "graphann/binary_io.h"
#include "graphann/detail/best_first.h"
#include "graphann/distance.h"
#include "graphann/diversify.h"
#include "graphann/errors.h"

namespace graphann {

namespace {

constexpr uint8_t kHnswFormatVersion = 1;

// Greedy single-best descent. Moves to a neighbor when it is strictly
// closer, or equally close with a lower id. Vertices already evaluated in
// this descent are skipped: each of them is no better than the current
// vertex, so skipping never changes the path.
template <typename Links, typename Evaluate>
detail::Candidate greedy_descend(detail::Candidate current, int32_t from_layer,
                                 int32_t above_layer, Links&& links,
                                 Evaluate&& evaluate, VisitedTable& seen) {
  for (int32_t layer = from_layer; layer > above_layer; --layer) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const uint32_t nb : links(current.second, static_cast<uint32_t>(layer))) {
        if (seen.test_and_set(nb)) continue;
        const detail::Candidate c{evaluate(nb), nb};
        if (c < current) {
          current = c;
          moved = true;
        }
      }
    }
  }
  return current;
}

}  // namespace

uint32_t assign_level(double u, double level_decay) {
  if (!(u > 0.0 && u < 1.0)) {
    throw UsageError("assign_level: u must lie in (0, 1), got " + std::to_string(u));
  }
  if (!(level_decay > 0.0)) throw UsageError("assign_level: level decay must be positive");
  return static_cast<uint32_t>(std::floor(-std::log(u) * level_decay));
}

HnswIndex::HnswIndex(size_t capacity, size_t dim, const HnswParams& params)
    : dim_(dim),
      M_(params.M),
      max_degree_upper_(params.M),
      max_degree_bottom_(2 * params.M),
      ef_construction_(params.ef_construction),
      level_decay_(params.level_decay > 0.0 ? params.level_decay
                                            : 1.0 / std::log(static_cast<double>(params.M))),
      levels_(capacity, -1),
      links_(capacity),
      rng_(params.seed) {
  if (params.M < 2) throw UsageError("HNSW M must be >= 2");
  if (params.ef_construction == 0) throw UsageError("efConstruction must be >= 1");
}

void HnswIndex::insert(uint32_t id, const VectorSet& data) {
  insert_at_level(id, assign_level(uniform_open01(rng_), level_decay_), data);
}

void HnswIndex::shrink_links(uint32_t v, uint32_t layer, const VectorSet& data) {
  auto& list = links_[v][layer];
  std::vector<Neighbor> candidates;
  candidates.reserve(list.size());
  for (uint32_t u : list) candidates.push_back(Neighbor{u, row_distance(data, v, u)});
  stats_.distance_evaluations += list.size();
  std::sort(candidates.begin(), candidates.end(), closer);
  std::vector<Neighbor> kept;
  stats_.distance_evaluations += select_by_occlusion(
      candidates, layer_cap(layer),
      [&](uint32_t a, uint32_t b) { return row_distance(data, a, b); }, kept);
  list.clear();
  for (const auto& nb : kept) list.push_back(nb.id);
}

void HnswIndex::insert_at_level(uint32_t id, uint32_t level, const VectorSet& data) {
  if (id >= levels_.size()) {
    throw UsageError("HNSW id " + std::to_string(id) + " beyond capacity " +
                     std::to_string(levels_.size()));
  }
  if (data.size() != levels_.size() || data.dim() != dim_) {
    throw UsageError("HNSW data shape differs from the index");
  }
  if (levels_[id] >= 0) throw UsageError("vertex " + std::to_string(id) + " already inserted");

  levels_[id] = static_cast<int32_t>(level);
  links_[id].assign(level + 1, {});
  ++inserted_;
  if (max_level_ < 0) {
    enter_point_ = id;
    max_level_ = static_cast<int32_t>(level);
    return;
  }

  const float* q = data.row_ptr(id);
  auto evaluate = [&](uint32_t v) {
    ++stats_.distance_evaluations;
    return distance_unchecked(q, data.row_ptr(v), dim_, data.metric());
  };
  auto links = [&](uint32_t v, uint32_t layer) -> std::span<const uint32_t> {
    return links_[v][layer];
  };

  build_visited_.reset(levels_.size());
  build_visited_.test_and_set(enter_point_);
  detail::Candidate entry{evaluate(enter_point_), enter_point_};
  entry = greedy_descend(entry, max_level_, static_cast<int32_t>(level), links, evaluate,
                         build_visited_);

  std::vector<Neighbor> pool_list;
  std::vector<Neighbor> selected;
  for (int32_t layer = std::min<int32_t>(static_cast<int32_t>(level), max_level_);
       layer >= 0; --layer) {
    const auto l = static_cast<uint32_t>(layer);
    build_visited_.reset(levels_.size());
    build_visited_.test_and_set(entry.second);
    const detail::Candidate entries[] = {entry};
    const auto pool = detail::best_first_expand(
        entries, ef_construction_, [&](uint32_t v) { return links(v, l); },
        [&](uint32_t v) -> std::optional<float> {
          if (build_visited_.test_and_set(v)) return std::nullopt;
          return evaluate(v);
        });
    pool_list.clear();
    for (const auto& [dist, v] : pool) pool_list.push_back(Neighbor{v, dist});
    stats_.distance_evaluations += select_by_occlusion(
        pool_list, M_, [&](uint32_t a, uint32_t b) { return row_distance(data, a, b); },
        selected);

    auto& own = links_[id][l];
    for (const auto& nb : selected) {
      own.push_back(nb.id);
      auto& theirs = links_[nb.id][l];
      theirs.push_back(id);
      if (theirs.size() > layer_cap(l)) shrink_links(nb.id, l, data);
    }
    entry = pool.front();
  }

  if (static_cast<int32_t>(level) > max_level_) {
    max_level_ = static_cast<int32_t>(level);
    enter_point_ = id;
  }
}

SearchResult HnswIndex::search(const VectorSet& data, VectorView query, size_t ef,
                               size_t k, SearchScratch* scratch,
                               SearchTrace* trace) const {
  if (empty()) throw UsageError("search on an empty HNSW index");
  if (ef == 0 || k == 0 || k > ef) throw UsageError("search needs 1 <= k <= ef");
  if (query.size() != dim_ || data.dim() != dim_ || data.size() != levels_.size()) {
    throw UsageError("query/data shape differs from the index");
  }
  SearchScratch local;
  SearchScratch& s = scratch ? *scratch : local;
  const size_t n = levels_.size();
  if (s.cached_distance.size() != n) s.cached_distance.resize(n);
  s.cached.reset(n);
  if (trace) trace->best_so_far.clear();
  detail::EvalRecorder recorder(trace);

  auto evaluate = [&](uint32_t v) {
    const float dist = distance_unchecked(query.data(), data.row_ptr(v), dim_, data.metric());
    recorder.record(dist);
    return dist;
  };
  auto evaluate_and_cache = [&](uint32_t v) {
    const float dist = evaluate(v);
    s.cached_distance[v] = dist;
    return dist;
  };
  auto links = [&](uint32_t v, uint32_t layer) -> std::span<const uint32_t> {
    return links_[v][layer];
  };

  s.cached.test_and_set(enter_point_);
  detail::Candidate entry{evaluate_and_cache(enter_point_), enter_point_};
  entry = greedy_descend(entry, max_level_, 0, links, evaluate_and_cache, s.cached);

  s.visited.reset(n);
  s.visited.test_and_set(entry.second);
  const detail::Candidate entries[] = {entry};
  const auto pool = detail::best_first_expand(
      entries, ef, [&](uint32_t v) { return links(v, 0); },
      [&](uint32_t v) -> std::optional<float> {
        if (s.visited.test_and_set(v)) return std::nullopt;
        if (s.cached.visited(v)) return s.cached_distance[v];
        return evaluate(v);
      });

  SearchResult result;
  result.evaluations = recorder.count();
  const size_t take = std::min(k, pool.size());
  for (size_t i = 0; i < take; ++i) {
    result.neighbors.push_back(Neighbor{pool[i].second, pool[i].first});
  }
  return result;
}

AdjacencyGraph HnswIndex::bottom_layer(const VectorSet& data) const {
  AdjacencyGraph graph(levels_.size());
  for (uint32_t v = 0; v < levels_.size(); ++v) {
    if (levels_[v] < 0) continue;
    auto& list = graph.mutable_neighbors(v);
    for (uint32_t u : links_[v][0]) list.push_back(Neighbor{u, row_distance(data, v, u)});
    std::sort(list.begin(), list.end(), closer);
  }
  return graph;
}

AuditReport HnswIndex::audit() const {
  AuditReport report;
  int32_t highest = -1;
  std::unordered_set<uint32_t> seen;
  for (uint32_t v = 0; v < levels_.size(); ++v) {
    const int32_t lv = levels_[v];
    highest = std::max(highest, lv);
    const std::string where = "vertex " + std::to_string(v) + ": ";
    if (lv < 0) {
      if (!links_[v].empty()) report.fail(where + "uninserted vertex has links");
      continue;
    }
    if (links_[v].size() != static_cast<size_t>(lv) + 1) {
      report.fail(where + "has " + std::to_string(links_[v].size()) +
                  " layers but level " + std::to_string(lv));
      continue;
    }
    for (uint32_t layer = 0; layer < links_[v].size(); ++layer) {
      const auto& list = links_[v][layer];
      if (list.size() > layer_cap(layer)) {
        report.fail(where + "degree " + std::to_string(list.size()) + " on layer " +
                    std::to_string(layer) + " exceeds cap " +
                    std::to_string(layer_cap(layer)));
      }
      seen.clear();
      for (uint32_t u : list) {
        if (u >= levels_.size()) {
          report.fail(where + "neighbor id out of range");
          continue;
        }
        if (u == v) report.fail(where + "self-loop on layer " + std::to_string(layer));
        if (!seen.insert(u).second) {
          report.fail(where + "duplicate neighbor " + std::to_string(u));
        }
        if (levels_[u] < static_cast<int32_t>(layer)) {
          report.fail(where + "layer-" + std::to_string(layer) + " edge to " +
                      std::to_string(u) + " which is absent from that layer");
        }
      }
    }
  }
  if (highest != max_level_) {
    report.fail("recorded max level " + std::to_string(max_level_) +
                " != highest assigned level " + std::to_string(highest));
  }
  if (inserted_ > 0 && (enter_point_ >= levels_.size() || levels_[enter_point_] != max_level_)) {
    report.fail("enter point level differs from the maximum level");
  }
  return report;
}

std::vector<size_t> HnswIndex::level_tail_counts() const {
  std::vector<size_t> tail(static_cast<size_t>(std::max(max_level_, 0)) + 1, 0);
  for (int32_t lv : levels_) {
    for (int32_t l = 0; l <= lv; ++l) ++tail[static_cast<size_t>(l)];
  }
  return tail;
}

void HnswIndex::write(std::ostream& out) const {
  binary::put_magic(out, "HNSW");
  binary::put<uint8_t>(out, kHnswFormatVersion);
  binary::put<uint32_t>(out, static_cast<uint32_t>(levels_.size()));
  binary::put<uint32_t>(out, static_cast<uint32_t>(dim_));
  binary::put<uint32_t>(out, M_);
  binary::put<uint32_t>(out, max_degree_upper_);
  binary::put<uint32_t>(out, max_degree_bottom_);
  binary::put<double>(out, level_decay_);
  binary::put<uint32_t>(out, ef_construction_);
  binary::put<uint32_t>(out, enter_point_);
  binary::put<int32_t>(out, max_level_);
  for (size_t v = 0; v < levels_.size(); ++v) {
    binary::put<int32_t>(out, levels_[v]);
    for (const auto& list : links_[v]) {
      binary::put<uint32_t>(out, static_cast<uint32_t>(list.size()));
      for (uint32_t u : list) binary::put<uint32_t>(out, u);
    }
  }
}

HnswIndex HnswIndex::read(std::istream& in) {
  binary::expect_magic(in, "HNSW");
  const auto version = binary::get<uint8_t>(in, "HNSW version");
  if (version != kHnswFormatVersion) {
    throw FormatError("unsupported HNSW version " + std::to_string(version));
  }
  HnswIndex index;
  const auto n = binary::get<uint32_t>(in, "vertex count");
  index.dim_ = binary::get<uint32_t>(in, "dimension");
  index.M_ = binary::get<uint32_t>(in, "M");
  index.max_degree_upper_ = binary::get<uint32_t>(in, "upper cap");
  index.max_degree_bottom_ = binary::get<uint32_t>(in, "bottom cap");
  index.level_decay_ = binary::get<double>(in, "level decay");
  index.ef_construction_ = binary::get<uint32_t>(in, "efConstruction");
  index.enter_point_ = binary::get<uint32_t>(in, "enter point");
  index.max_level_ = binary::get<int32_t>(in, "max level");
  index.levels_.assign(n, -1);
  index.links_.assign(n, {});
  for (uint32_t v = 0; v < n; ++v) {
    const auto lv = binary::get<int32_t>(in, "vertex level");
    if (lv < -1 || lv > index.max_level_) {
      throw FormatError("vertex " + std::to_string(v) + " has invalid level " +
                        std::to_string(lv));
    }
    index.levels_[v] = lv;
    if (lv >= 0) ++index.inserted_;
    index.links_[v].resize(static_cast<size_t>(lv + 1));
    for (auto& list : index.links_[v]) {
      const auto count = binary::get<uint32_t>(in, "adjacency count");
      if (count > n) throw FormatError("adjacency count exceeds vertex count");
      list.resize(count);
      for (auto& u : list) u = binary::get<uint32_t>(in, "neighbor id");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after HNSW payload");
  }
  return index;
}

void HnswIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

HnswIndex HnswIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read(in);
}

bool HnswIndex::operator==(const HnswIndex& o) const {
  return dim_ == o.dim_ && M_ == o.M_ && max_degree_upper_ == o.max_degree_upper_ &&
         max_degree_bottom_ == o.max_degree_bottom_ &&
         ef_construction_ == o.ef_construction_ && level_decay_ == o.level_decay_ &&
         enter_point_ == o.enter_point_ && max_level_ == o.max_level_ &&
         levels_ == o.levels_ && links_ == o.links_;
}

HnswIndex hnsw_build(const VectorSet& data, const HnswParams& params) {
  if (data.empty()) throw UsageError("HNSW build needs at least one vector");
  const auto start = std::chrono::steady_clock::now();
  HnswIndex index(data.size(), data.dim(), params);
  for (size_t v = 0; v < data.size(); ++v) index.insert(static_cast<uint32_t>(v), data);
  index.mutable_build_stats().seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return index;
}

}  // namespace graphann
