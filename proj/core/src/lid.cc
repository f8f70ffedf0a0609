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

#include "graphann/lid.h"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/parallel.h"
#include "graphann/random.h"
#include "graphann/topk.h"

namespace graphann {

double local_lid(std::span<const float> sorted_distances) {
  const size_t k = sorted_distances.size();
  if (k < 2) return 0.0;
  const double outer = sorted_distances[k - 1];
  if (sorted_distances[0] <= 0.0f) return 0.0;
  double sum = 0.0;
  for (size_t j = 0; j + 1 < k; ++j) {
    sum += std::log(outer / static_cast<double>(sorted_distances[j]));
  }
  const double mean = sum / static_cast<double>(k - 1);
  // All k neighbors equidistant: the ratio carries no scale information.
  if (mean <= 0.0) return 0.0;
  return 1.0 / mean;
}

LidEstimate estimate_lid(const VectorSet& set, const LidParams& params) {
  const size_t n = set.size();
  const size_t k = params.k_neighbors;
  if (k < 5) throw UsageError("LID needs k_neighbors >= 5");
  if (k >= n) {
    throw UsageError("LID k_neighbors=" + std::to_string(k) +
                     " must be below n=" + std::to_string(n));
  }
  const size_t sample =
      params.sample_size == 0 ? std::min<size_t>(n, 10000) : params.sample_size;
  if (sample > n) throw UsageError("LID sample size exceeds n");

  // Partial Fisher-Yates: the first `sample` slots become the anchors.
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(params.seed);
  for (size_t i = 0; i < sample; ++i) {
    const size_t j = i + uniform_below(rng, n - i);
    std::swap(order[i], order[j]);
  }

  std::vector<double> local(sample, 0.0);
  const size_t d = set.dim();
  parallel_for(sample, params.threads, [&](size_t s) {
    const uint32_t anchor = order[s];
    TopK top(k);
    const float* x = set.row_ptr(anchor);
    for (size_t c = 0; c < n; ++c) {
      if (c == anchor) continue;
      top.push(distance_unchecked(x, set.row_ptr(c), d, set.metric()),
               static_cast<uint32_t>(c));
    }
    const auto sorted = top.take_sorted();
    std::vector<float> dist(k);
    for (size_t j = 0; j < k; ++j) dist[j] = sorted[j].first;
    local[s] = local_lid(dist);
  });

  LidEstimate est;
  est.k_neighbors = k;
  est.sample_size = sample;
  double sum = 0.0;
  for (double v : local) {
    if (v > 0.0 && std::isfinite(v)) {
      sum += v;
      ++est.anchors_used;
    }
  }
  if (est.anchors_used == 0) {
    throw DomainError("every LID anchor had a zero neighbor distance");
  }
  est.value = sum / static_cast<double>(est.anchors_used);
  return est;
}

}  // namespace graphann
