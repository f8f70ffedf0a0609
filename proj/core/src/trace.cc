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

#include "graphann/trace.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "graphann/errors.h"

namespace graphann {

uint64_t RangeHistogram::total() const {
  uint64_t sum = 0;
  for (auto e : evaluations) sum += e;
  return sum;
}

RangeHistogram bucket_trace(std::span<const SearchTrace> traces,
                            std::span<const double> edges) {
  if (traces.empty()) throw UsageError("bucket_trace needs at least one trace");
  if (edges.size() < 2) throw UsageError("bucket_trace needs at least two edges");
  for (size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] < edges[i - 1])) {
      throw UsageError("bucket edges must be strictly descending");
    }
  }
  RangeHistogram hist;
  hist.edges.assign(edges.begin(), edges.end());
  hist.evaluations.assign(edges.size() - 1, 0);
  hist.queries = traces.size();
  const size_t last = hist.evaluations.size() - 1;
  for (const SearchTrace& t : traces) {
    if (!t.best_so_far.empty() && t.terminal_best() < 0.0f) {
      throw UsageError("negative distance in trace");
    }
    for (const float best : t.best_so_far) {
      // First edge strictly below `best` closes the bucket that holds it.
      const auto it = std::upper_bound(edges.begin() + 1, edges.end(),
                                       static_cast<double>(best), std::greater<>());
      const size_t bucket = std::min<size_t>(
          static_cast<size_t>(std::distance(edges.begin() + 1, it)), last);
      ++hist.evaluations[bucket];
    }
  }
  return hist;
}

std::vector<double> geometric_edges(double far, double near, size_t buckets) {
  if (buckets == 0) throw UsageError("need at least one bucket");
  if (!(near > 0.0) || !(far > near)) {
    throw UsageError("geometric edges need far > near > 0");
  }
  std::vector<double> edges(buckets + 1);
  const double ratio = near / far;
  for (size_t i = 0; i <= buckets; ++i) {
    edges[i] = far * std::pow(ratio, static_cast<double>(i) / static_cast<double>(buckets));
  }
  edges.front() = far;
  edges.back() = near;
  return edges;
}

std::vector<double> default_bucket_edges(std::span<const SearchTrace> traces,
                                         std::span<const float> true_nn_distances,
                                         size_t buckets) {
  double far = 0.0;
  for (const auto& t : traces) {
    if (!t.best_so_far.empty()) far = std::max(far, static_cast<double>(t.best_so_far.front()));
  }
  double near = std::numeric_limits<double>::infinity();
  for (float d : true_nn_distances) {
    if (d > 0.0f) near = std::min(near, static_cast<double>(d));
  }
  if (!std::isfinite(near)) {
    for (const auto& t : traces) {
      for (float b : t.best_so_far) {
        if (b > 0.0f) near = std::min(near, static_cast<double>(b));
      }
    }
  }
  if (!std::isfinite(near) || !(far > near)) {
    throw UsageError("cannot derive bucket edges from these traces");
  }
  return geometric_edges(far, near, buckets);
}

void write_trace_csv(std::span<const SearchTrace> traces,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "query_id,evaluation_index,best_distance\n";
  char buf[64];
  for (size_t q = 0; q < traces.size(); ++q) {
    const auto& best = traces[q].best_so_far;
    for (size_t i = 0; i < best.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g\n", q, i + 1,
                    static_cast<double>(best[i]));
      out << buf;
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_histogram_csv(const RangeHistogram& histogram,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "bucket_low,bucket_high,evaluations\n";
  char buf[96];
  for (size_t i = 0; i < histogram.buckets(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%llu\n", histogram.edges[i + 1],
                  histogram.edges[i],
                  static_cast<unsigned long long>(histogram.evaluations[i]));
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

RangeHistogram read_histogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "bucket_low,bucket_high,evaluations") {
    throw FormatError(path.string() + ": missing histogram header");
  }
  RangeHistogram hist;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double low = 0.0, high = 0.0;
    unsigned long long count = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%llu", &low, &high, &count) != 3) {
      throw FormatError(path.string() + ": bad histogram row '" + line + "'");
    }
    if (hist.edges.empty()) hist.edges.push_back(high);
    hist.edges.push_back(low);
    hist.evaluations.push_back(count);
  }
  return hist;
}

}  // namespace graphann
