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
#include <vector>

#include "graphann/vector_set.h"

namespace graphann {

/// Row-major matrix of 32-bit ids, the payload of an .ivecs file.
struct IdMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<uint32_t> values;

  std::span<const uint32_t> row(size_t i) const {
    return {values.data() + i * cols, cols};
  }
  bool operator==(const IdMatrix&) const = default;
};

// .fvecs / .ivecs: repeated records of [int32 d][d x 4-byte element], all
// little-endian, every record sharing the same d. An empty file is a valid
// empty set.

VectorSet read_fvecs(const std::filesystem::path& path,
                     Metric metric = Metric::kL2);
IdMatrix read_ivecs(const std::filesystem::path& path);

void write_fvecs(const VectorSet& set, const std::filesystem::path& path);
void write_ivecs(const IdMatrix& ids, const std::filesystem::path& path);

}  // namespace graphann
