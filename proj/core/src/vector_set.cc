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

#include "graphann/vector_set.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "graphann/errors.h"

namespace graphann {

std::string_view metric_name(Metric metric) {
  return metric == Metric::kL2 ? "l2" : "cosine";
}

Metric parse_metric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "l2") return Metric::kL2;
  if (lower == "cosine") return Metric::kCosine;
  throw UsageError("unknown metric '" + std::string(name) +
                   "' (expected l2 or cosine)");
}

VectorSet::VectorSet(size_t n, size_t d, Metric metric)
    : n_(n), d_(d), metric_(metric) {
  if (d == 0 && n != 0) throw UsageError("vector dimension must be >= 1");
  if (d != 0 && n > data_.max_size() / d) {
    throw ResourceError("vector set of " + std::to_string(n) + " x " +
                        std::to_string(d) + " exceeds addressable memory");
  }
  data_.assign(n * d, 0.0f);
}

VectorSet::VectorSet(size_t n, size_t d, std::vector<float> data,
                     Metric metric)
    : n_(n), d_(d), data_(std::move(data)), metric_(metric) {
  if (d == 0 && n != 0) throw UsageError("vector dimension must be >= 1");
  if (d != 0 && n > data_.max_size() / d) {
    throw ResourceError("vector set size overflows");
  }
  if (data_.size() != n * d) {
    throw UsageError("vector data length " + std::to_string(data_.size()) +
                     " != n*d = " + std::to_string(n * d));
  }
  check_finite();
}

void VectorSet::check_finite() const {
  for (size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw UsageError("non-finite value in row " + std::to_string(i / d_));
    }
  }
}

VectorSet VectorSet::head(size_t count) const {
  count = std::min(count, n_);
  std::vector<float> values(data_.begin(),
                            data_.begin() + static_cast<ptrdiff_t>(count * d_));
  return VectorSet(count, d_, std::move(values), metric_);
}

}  // namespace graphann
