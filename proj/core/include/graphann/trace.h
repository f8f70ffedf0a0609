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
#include <vector>

#include "graphann/search.h"

namespace graphann {

/// Evaluation counts attributed to distance ranges of the best-so-far.
///
/// edges is strictly descending; bucket i covers [edges[i+1], edges[i]).
/// Values at or above edges.front() fall into bucket 0 and values below
/// edges.back() into the last bucket, so every evaluation is counted once.
struct RangeHistogram {
  std::vector<double> edges;
  std::vector<uint64_t> evaluations;
  size_t queries = 0;

  size_t buckets() const { return evaluations.size(); }
  uint64_t total() const;

  bool operator==(const RangeHistogram&) const = default;
};

/// Attributes each evaluation of each trace to the bucket holding the
/// best-so-far distance at that moment.
RangeHistogram bucket_trace(std::span<const SearchTrace> traces,
                            std::span<const double> edges);

/// buckets + 1 edges spaced geometrically from `far` down to `near`.
std::vector<double> geometric_edges(double far, double near, size_t buckets);

/// Geometric edges from the largest first-evaluation distance over the
/// traces down to the smallest positive ground-truth distance.
std::vector<double> default_bucket_edges(std::span<const SearchTrace> traces,
                                         std::span<const float> true_nn_distances,
                                         size_t buckets = 10);

/// CSV: query_id,evaluation_index,best_distance (evaluation_index from 1).
void write_trace_csv(std::span<const SearchTrace> traces,
                     const std::filesystem::path& path);
/// CSV: bucket_low,bucket_high,evaluations.
void write_histogram_csv(const RangeHistogram& histogram,
                         const std::filesystem::path& path);
RangeHistogram read_histogram_csv(const std::filesystem::path& path);

}  // namespace graphann
