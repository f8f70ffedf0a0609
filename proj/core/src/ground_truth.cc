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

#include "graphann/ground_truth.h"

#include <chrono>
#include <string>

#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/parallel.h"
#include "graphann/topk.h"
#include "graphann/vecs_io.h"

namespace graphann {

GroundTruth brute_force_knn(const VectorSet& candidates,
                            const VectorSet& queries, size_t k,
                            unsigned threads) {
  if (k == 0) throw UsageError("k must be >= 1");
  if (k > candidates.size()) {
    throw UsageError("k=" + std::to_string(k) + " exceeds candidate count " +
                     std::to_string(candidates.size()));
  }
  if (!queries.empty() && candidates.dim() != queries.dim()) {
    throw UsageError("candidate and query dimensions differ");
  }
  if (candidates.metric() != queries.metric()) {
    throw UsageError("candidate and query metrics differ");
  }
  GroundTruth truth;
  truth.queries = queries.size();
  truth.k = k;
  truth.ids.resize(truth.queries * k);
  truth.distances.resize(truth.queries * k);

  const size_t d = candidates.dim();
  const Metric metric = candidates.metric();
  const auto start = std::chrono::steady_clock::now();
  parallel_for(queries.size(), threads, [&](size_t q) {
    TopK top(k);
    const float* query = queries.row_ptr(q);
    for (size_t c = 0; c < candidates.size(); ++c) {
      top.push(distance_unchecked(query, candidates.row_ptr(c), d, metric),
               static_cast<uint32_t>(c));
    }
    const auto sorted = top.take_sorted();
    for (size_t j = 0; j < k; ++j) {
      truth.distances[q * k + j] = sorted[j].first;
      truth.ids[q * k + j] = sorted[j].second;
    }
  });
  truth.scan_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return truth;
}

void save_ground_truth(const GroundTruth& truth,
                       const std::filesystem::path& prefix) {
  IdMatrix ids{truth.queries, truth.k, truth.ids};
  write_ivecs(ids, prefix.string() + ".ivecs");
  write_fvecs(VectorSet(truth.queries, truth.k, truth.distances),
              prefix.string() + ".fvecs");
}

GroundTruth load_ground_truth(const std::filesystem::path& prefix) {
  IdMatrix ids = read_ivecs(prefix.string() + ".ivecs");
  VectorSet dist = read_fvecs(prefix.string() + ".fvecs");
  if (ids.rows != dist.size() || (ids.rows > 0 && ids.cols != dist.dim())) {
    throw FormatError("ground truth id/distance files disagree in shape: " +
                      prefix.string());
  }
  GroundTruth truth;
  truth.queries = ids.rows;
  truth.k = ids.cols;
  truth.ids = std::move(ids.values);
  truth.distances.assign(dist.data().begin(), dist.data().end());
  return truth;
}

}  // namespace graphann
