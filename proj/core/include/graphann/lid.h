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
#include <span>

#include "graphann/vector_set.h"

namespace graphann {

struct LidEstimate {
  double value = 0.0;
  size_t k_neighbors = 0;
  /// Anchors requested.
  size_t sample_size = 0;
  /// Anchors actually used (anchors with a zero neighbor distance are skipped).
  size_t anchors_used = 0;
};

struct LidParams {
  size_t k_neighbors = 200;
  /// 0 means min(n, 10000).
  size_t sample_size = 0;
  uint64_t seed = 0;
  unsigned threads = 1;
};

/// Maximum-likelihood local intrinsic dimension averaged over a random
/// sample of anchors.
///
/// For an anchor with ascending neighbor distances T_1..T_k (the anchor
/// itself excluded) the local estimate is
///   ( 1/(k-1) * sum_{j<k} ln(T_k / T_j) )^-1
/// and the result is the arithmetic mean of the local estimates.
LidEstimate estimate_lid(const VectorSet& set, const LidParams& params);

/// Local estimate for one sorted distance list. Returns 0 if any distance
/// is zero (the anchor is unusable).
double local_lid(std::span<const float> sorted_distances);

}  // namespace graphann
