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
#include <string>

#include "graphann/vector_set.h"

namespace graphann {

/// n x d vectors with coordinates i.i.d. uniform over [0, 1). Output is a
/// pure function of (n, d, seed).
VectorSet generate_uniform(size_t n, size_t d, uint64_t seed);

/// Scales every row to unit L2 norm in place. Zero rows raise DomainError.
void normalize_rows(VectorSet& set);

/// Sidecar describing how a vector file was produced. Stored as
/// line-oriented key=value text next to the data file.
struct DatasetMetadata {
  std::string name;
  size_t n = 0;
  size_t d = 0;
  Metric metric = Metric::kL2;
  uint64_t seed = 0;
  bool normalized = false;

  bool operator==(const DatasetMetadata&) const = default;
};

void write_metadata(const DatasetMetadata& meta,
                    const std::filesystem::path& path);
DatasetMetadata read_metadata(const std::filesystem::path& path);

/// Conventional sidecar location: "<data path>.meta".
std::filesystem::path metadata_path(const std::filesystem::path& data_path);

/// Loads an .fvecs file and applies its sidecar (if present): the metric
/// is taken from the sidecar and cosine data that is not yet normalized is
/// normalized here. `metric_override`, when set, wins over the sidecar.
VectorSet load_dataset(const std::filesystem::path& path,
                       const Metric* metric_override = nullptr);

}  // namespace graphann
