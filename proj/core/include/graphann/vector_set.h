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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace graphann {

enum class Metric : uint8_t { kL2, kCosine };

std::string_view metric_name(Metric metric);
/// Accepts "l2" / "cosine" (case-insensitive); throws UsageError otherwise.
Metric parse_metric(std::string_view name);

using VectorView = std::span<const float>;

/// n vectors of dimension d stored row-major in one contiguous block.
///
/// Invariants: data().size() == n * d, every value is finite, and d >= 1
/// unless the set is empty (an empty .fvecs file has no dimension, so
/// n == 0 && d == 0 is the one tolerated degenerate shape).
class VectorSet {
 public:
  VectorSet() = default;
  VectorSet(size_t n, size_t d, Metric metric = Metric::kL2);
  VectorSet(size_t n, size_t d, std::vector<float> data,
            Metric metric = Metric::kL2);

  size_t size() const { return n_; }
  size_t dim() const { return d_; }
  bool empty() const { return n_ == 0; }
  Metric metric() const { return metric_; }
  void set_metric(Metric metric) { metric_ = metric; }

  VectorView row(size_t i) const { return {data_.data() + i * d_, d_}; }
  std::span<float> mutable_row(size_t i) { return {data_.data() + i * d_, d_}; }
  const float* row_ptr(size_t i) const { return data_.data() + i * d_; }

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }

  /// Throws UsageError if any value is NaN or infinite.
  void check_finite() const;

  /// First `count` rows as a new set.
  VectorSet head(size_t count) const;

  bool operator==(const VectorSet&) const = default;

 private:
  size_t n_ = 0;
  size_t d_ = 0;
  std::vector<float> data_;
  Metric metric_ = Metric::kL2;
};

}  // namespace graphann
