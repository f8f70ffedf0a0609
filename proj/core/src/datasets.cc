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

#include "graphann/datasets.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/random.h"
#include "graphann/vecs_io.h"

namespace graphann {

VectorSet generate_uniform(size_t n, size_t d, uint64_t seed) {
  if (n == 0 || d == 0) throw UsageError("generate_uniform needs n >= 1 and d >= 1");
  if (n > std::numeric_limits<size_t>::max() / d / sizeof(float)) {
    throw ResourceError("n*d overflows addressable memory");
  }
  VectorSet set = [&] {
    try {
      return VectorSet(n, d);
    } catch (const std::bad_alloc&) {
      throw ResourceError("cannot allocate " + std::to_string(n) + " x " +
                          std::to_string(d) + " floats");
    }
  }();
  Rng rng(seed);
  for (float& v : set.mutable_data()) v = uniform_float(rng);
  return set;
}

void normalize_rows(VectorSet& set) {
  for (size_t i = 0; i < set.size(); ++i) {
    auto row = set.mutable_row(i);
    const double norm = std::sqrt(dot_product(row.data(), row.data(), row.size()));
    if (norm == 0.0) {
      throw DomainError("cannot normalize zero row " + std::to_string(i));
    }
    for (float& v : row) v = static_cast<float>(v / norm);
  }
}

std::filesystem::path metadata_path(const std::filesystem::path& data_path) {
  return std::filesystem::path(data_path.string() + ".meta");
}

void write_metadata(const DatasetMetadata& meta,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "name=" << meta.name << '\n'
      << "n=" << meta.n << '\n'
      << "d=" << meta.d << '\n'
      << "metric=" << metric_name(meta.metric) << '\n'
      << "seed=" << meta.seed << '\n'
      << "normalized=" << (meta.normalized ? 1 : 0) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

DatasetMetadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  DatasetMetadata meta;
  try {
    if (auto it = kv.find("name"); it != kv.end()) meta.name = it->second;
    if (auto it = kv.find("n"); it != kv.end()) meta.n = std::stoull(it->second);
    if (auto it = kv.find("d"); it != kv.end()) meta.d = std::stoull(it->second);
    if (auto it = kv.find("metric"); it != kv.end()) meta.metric = parse_metric(it->second);
    if (auto it = kv.find("seed"); it != kv.end()) meta.seed = std::stoull(it->second);
    if (auto it = kv.find("normalized"); it != kv.end()) meta.normalized = it->second == "1";
  } catch (const std::logic_error& e) {
    throw FormatError(path.string() + ": bad metadata value (" + e.what() + ")");
  }
  return meta;
}

VectorSet load_dataset(const std::filesystem::path& path,
                       const Metric* metric_override) {
  const auto meta_file = metadata_path(path);
  const bool has_meta = std::filesystem::exists(meta_file);
  DatasetMetadata meta;
  if (has_meta) meta = read_metadata(meta_file);
  const Metric metric = metric_override ? *metric_override : meta.metric;
  VectorSet set = read_fvecs(path, metric);
  if (metric == Metric::kCosine && !(has_meta && meta.normalized)) {
    normalize_rows(set);
  }
  check_metric_domain(set);
  return set;
}

}  // namespace graphann
