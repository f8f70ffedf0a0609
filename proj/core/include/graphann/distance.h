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

#include <cstddef>

#include "graphann/vector_set.h"

namespace graphann {

/// True metric distance between two vectors.
///
/// L2 is the Euclidean norm of the difference (never squared). Cosine is
/// 1 - <a,b> / (|a| |b|), clamped to [0, 2]. Throws UsageError on a
/// dimension mismatch and DomainError for a zero-norm vector under cosine.
float distance(VectorView a, VectorView b, Metric metric);

// Unchecked kernels for hot loops. Accumulation is always done in double.
float l2_distance(const float* a, const float* b, size_t d);
double l2_squared(const float* a, const float* b, size_t d);
double dot_product(const float* a, const float* b, size_t d);
/// Caller guarantees both norms are non-zero.
float cosine_distance(const float* a, const float* b, size_t d);

inline float distance_unchecked(const float* a, const float* b, size_t d,
                                Metric metric) {
  return metric == Metric::kL2 ? l2_distance(a, b, d)
                               : cosine_distance(a, b, d);
}

/// Distance between two rows of one set.
inline float row_distance(const VectorSet& set, size_t i, size_t j) {
  return distance_unchecked(set.row_ptr(i), set.row_ptr(j), set.dim(),
                            set.metric());
}

/// Throws DomainError if the set is cosine and contains a zero vector.
void check_metric_domain(const VectorSet& set);

}  // namespace graphann
