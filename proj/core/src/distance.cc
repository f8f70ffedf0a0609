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

#include "graphann/distance.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphann/errors.h"

namespace graphann {

namespace {

// Eight independent lanes let the compiler keep several accumulators in
// flight without reassociating a single running sum.
constexpr size_t kLanes = 8;

}  // namespace

double l2_squared(const float* a, const float* b, size_t d) {
  double acc[kLanes] = {};
  size_t i = 0;
  for (; i + kLanes <= d; i += kLanes) {
    for (size_t l = 0; l < kLanes; ++l) {
      const double diff = static_cast<double>(a[i + l]) - b[i + l];
      acc[l] += diff * diff;
    }
  }
  double tail = 0.0;
  for (; i < d; ++i) {
    const double diff = static_cast<double>(a[i]) - b[i];
    tail += diff * diff;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

double dot_product(const float* a, const float* b, size_t d) {
  double acc[kLanes] = {};
  size_t i = 0;
  for (; i + kLanes <= d; i += kLanes) {
    for (size_t l = 0; l < kLanes; ++l) {
      acc[l] += static_cast<double>(a[i + l]) * b[i + l];
    }
  }
  double tail = 0.0;
  for (; i < d; ++i) tail += static_cast<double>(a[i]) * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

float l2_distance(const float* a, const float* b, size_t d) {
  return static_cast<float>(std::sqrt(l2_squared(a, b, d)));
}

float cosine_distance(const float* a, const float* b, size_t d) {
  const double ab = dot_product(a, b, d);
  const double aa = dot_product(a, a, d);
  const double bb = dot_product(b, b, d);
  const double sim = ab / std::sqrt(aa * bb);
  return static_cast<float>(std::clamp(1.0 - sim, 0.0, 2.0));
}

float distance(VectorView a, VectorView b, Metric metric) {
  if (a.size() != b.size()) {
    throw UsageError("dimension mismatch: " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
  if (metric == Metric::kCosine) {
    if (dot_product(a.data(), a.data(), a.size()) == 0.0 ||
        dot_product(b.data(), b.data(), b.size()) == 0.0) {
      throw DomainError("cosine distance undefined for a zero-norm vector");
    }
  }
  return distance_unchecked(a.data(), b.data(), a.size(), metric);
}

void check_metric_domain(const VectorSet& set) {
  if (set.metric() != Metric::kCosine) return;
  for (size_t i = 0; i < set.size(); ++i) {
    if (dot_product(set.row_ptr(i), set.row_ptr(i), set.dim()) == 0.0) {
      throw DomainError("row " + std::to_string(i) +
                        " has zero norm under cosine metric");
    }
  }
}

}  // namespace graphann
