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

#include "graphann/vecs_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "graphann/errors.h"

namespace graphann {

namespace {

template <typename T>
void to_little_endian_inplace(std::vector<T>& values, size_t from) {
  if constexpr (std::endian::native == std::endian::big) {
    for (size_t i = from; i < values.size(); ++i) {
      auto* b = reinterpret_cast<unsigned char*>(&values[i]);
      std::swap(b[0], b[3]);
      std::swap(b[1], b[2]);
    }
  }
}

// Shared record parser. Returns rows and fills `values`.
template <typename T>
size_t read_records(const std::filesystem::path& path, std::vector<T>& values,
                    size_t& dim) {
  static_assert(sizeof(T) == 4);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<uint64_t>(in.tellg());
  in.seekg(0, std::ios::beg);

  size_t rows = 0;
  dim = 0;
  uint64_t offset = 0;
  while (offset < file_size) {
    if (file_size - offset < 4) {
      throw FormatError(path.string() + ": truncated record header at byte offset " +
                        std::to_string(offset));
    }
    unsigned char header[4];
    in.read(reinterpret_cast<char*>(header), 4);
    const int32_t d = static_cast<int32_t>(
        static_cast<uint32_t>(header[0]) | static_cast<uint32_t>(header[1]) << 8 |
        static_cast<uint32_t>(header[2]) << 16 |
        static_cast<uint32_t>(header[3]) << 24);
    if (d <= 0) {
      throw FormatError(path.string() + ": non-positive dimension " +
                        std::to_string(d) + " at byte offset " +
                        std::to_string(offset));
    }
    if (rows == 0) {
      dim = static_cast<size_t>(d);
      if (file_size % (4 + 4 * static_cast<uint64_t>(d)) == 0) {
        values.reserve(file_size / (4 + 4 * static_cast<uint64_t>(d)) * dim);
      }
    } else if (static_cast<size_t>(d) != dim) {
      throw FormatError(path.string() + ": inconsistent dimension " +
                        std::to_string(d) + " (expected " + std::to_string(dim) +
                        ") at byte offset " + std::to_string(offset));
    }
    const uint64_t payload = 4 * static_cast<uint64_t>(d);
    if (file_size - offset - 4 < payload) {
      throw FormatError(path.string() + ": truncated record at byte offset " +
                        std::to_string(offset) + " (needs " +
                        std::to_string(payload + 4) + " bytes, " +
                        std::to_string(file_size - offset) + " remain)");
    }
    const size_t start = values.size();
    values.resize(start + dim);
    in.read(reinterpret_cast<char*>(values.data() + start),
            static_cast<std::streamsize>(payload));
    if (!in) throw IoError(path.string() + ": read failed");
    to_little_endian_inplace(values, start);
    offset += 4 + payload;
    ++rows;
  }
  return rows;
}

template <typename T>
void write_records(const std::filesystem::path& path, const T* values,
                   size_t rows, size_t cols) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::vector<unsigned char> record(4 + 4 * cols);
  const uint32_t d = static_cast<uint32_t>(cols);
  for (size_t r = 0; r < rows; ++r) {
    for (int b = 0; b < 4; ++b) record[b] = static_cast<unsigned char>(d >> (8 * b));
    for (size_t c = 0; c < cols; ++c) {
      uint32_t bits;
      std::memcpy(&bits, values + r * cols + c, 4);
      for (int b = 0; b < 4; ++b) {
        record[4 + 4 * c + b] = static_cast<unsigned char>(bits >> (8 * b));
      }
    }
    out.write(reinterpret_cast<const char*>(record.data()),
              static_cast<std::streamsize>(record.size()));
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

VectorSet read_fvecs(const std::filesystem::path& path, Metric metric) {
  std::vector<float> values;
  size_t dim = 0;
  const size_t rows = read_records(path, values, dim);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw FormatError(path.string() + ": non-finite value in record " +
                        std::to_string(i / dim));
    }
  }
  return VectorSet(rows, dim, std::move(values), metric);
}

IdMatrix read_ivecs(const std::filesystem::path& path) {
  IdMatrix ids;
  ids.rows = read_records(path, ids.values, ids.cols);
  return ids;
}

void write_fvecs(const VectorSet& set, const std::filesystem::path& path) {
  write_records(path, set.data().data(), set.size(), set.dim());
}

void write_ivecs(const IdMatrix& ids, const std::filesystem::path& path) {
  write_records(path, ids.values.data(), ids.rows, ids.cols);
}

}  // namespace graphann
