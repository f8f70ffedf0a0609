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

#include "graphann/vector_set.h"

namespace graphann {

/// Exact k nearest candidates per query, ascending by distance with ties
/// broken by ascending id.
struct GroundTruth {
  size_t queries = 0;
  size_t k = 0;
  std::vector<uint32_t> ids;
  std::vector<float> distances;
  /// Wall time of the exhaustive scan that produced this (0 when loaded).
  double scan_seconds = 0.0;

  std::span<const uint32_t> ids_of(size_t q) const {
    return {ids.data() + q * k, k};
  }
  std::span<const float> distances_of(size_t q) const {
    return {distances.data() + q * k, k};
  }
};

/// Full-scan k-NN. Parallel over queries when threads > 1; the result does
/// not depend on the worker count.
GroundTruth brute_force_knn(const VectorSet& candidates,
                            const VectorSet& queries, size_t k,
                            unsigned threads = 1);

/// Persists as "<prefix>.ivecs" (ids) and "<prefix>.fvecs" (distances).
void save_ground_truth(const GroundTruth& truth,
                       const std::filesystem::path& prefix);
GroundTruth load_ground_truth(const std::filesystem::path& prefix);

}  // namespace graphann
