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

#include "graphann/config.h"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "graphann/errors.h"

namespace graphann {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

template <typename T>
void read_if(const YAML::Node& node, const char* key, T& out) {
  if (const auto child = node[key]) out = child.as<T>();
}

void reject_unknown(const YAML::Node& node, std::initializer_list<std::string_view> known,
                    std::string_view section) {
  if (!node.IsMap()) return;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) {
      throw UsageError("unknown key '" + key + "' in " + std::string(section) + " section");
    }
  }
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kHnsw: return "HNSW";
    case Algorithm::kFlatHnsw: return "flat-HNSW";
    case Algorithm::kKGraph: return "KGraph";
    case Algorithm::kKGraphGd: return "KGraph+GD";
    case Algorithm::kDpg: return "DPG";
    case Algorithm::kBrute: return "brute";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kHnsw, Algorithm::kFlatHnsw, Algorithm::kKGraph,
                 Algorithm::kKGraphGd, Algorithm::kDpg, Algorithm::kBrute}) {
    if (algorithm_name(a) == name) return a;
  }
  throw UsageError("unknown algorithm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (dataset.base.empty()) {
    if (dataset.n == 0 || dataset.d == 0) {
      throw UsageError("dataset needs either base/queries files or synthetic n and d");
    }
    if (dataset.query_count == 0) throw UsageError("dataset.queries must be >= 1");
  } else {
    if (!std::filesystem::exists(dataset.base)) {
      throw IoError("dataset file not found: " + dataset.base.string());
    }
    if (dataset.queries.empty() || !std::filesystem::exists(dataset.queries)) {
      throw IoError("query file not found: " + dataset.queries.string());
    }
  }
  if (algorithms.empty()) throw UsageError("no algorithms configured");
  if (ef_sweep.empty()) throw UsageError("ef sweep is empty");
  for (size_t i = 0; i < ef_sweep.size(); ++i) {
    if (ef_sweep[i] == 0) throw UsageError("ef values must be positive");
    if (i > 0 && ef_sweep[i] <= ef_sweep[i - 1]) {
      throw UsageError("ef sweep must be strictly ascending");
    }
  }
  if (k == 0 || k > ef_sweep.front()) throw UsageError("k must satisfy 1 <= k <= min ef");
  if (trajectory.queries == 0 || trajectory.ef < k) {
    throw UsageError("trajectory needs queries >= 1 and ef >= k");
  }
  for (size_t i = 1; i < trajectory.edges.size(); ++i) {
    if (!(trajectory.edges[i] < trajectory.edges[i - 1])) {
      throw UsageError("trajectory edges must be strictly descending");
    }
  }
}

ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    if (!root.IsMap()) throw UsageError("config root must be a mapping");
    reject_unknown(root,
                   {"dataset", "algorithms", "hnsw", "kgraph", "ef", "k", "seed",
                    "seed_count", "threads", "output_dir", "trajectory"},
                   "top-level");

    const YAML::Node ds = root["dataset"];
    if (!ds) throw UsageError("config has no dataset section");
    reject_unknown(ds,
                   {"name", "metric", "synthetic", "base", "queries", "query_seed",
                    "ground_truth"},
                   "dataset");
    read_if(ds, "name", cfg.dataset.name);
    if (const auto m = ds["metric"]) cfg.dataset.metric = parse_metric(m.as<std::string>());
    if (const auto syn = ds["synthetic"]) {
      reject_unknown(syn, {"n", "d", "seed"}, "dataset.synthetic");
      read_if(syn, "n", cfg.dataset.n);
      read_if(syn, "d", cfg.dataset.d);
      read_if(syn, "seed", cfg.dataset.seed);
    }
    if (const auto b = ds["base"]) cfg.dataset.base = resolve(base_dir, b.as<std::string>());
    if (const auto q = ds["queries"]) {
      // A scalar count for synthetic data, a path for file-backed data.
      if (cfg.dataset.base.empty()) {
        cfg.dataset.query_count = q.as<size_t>();
      } else {
        cfg.dataset.queries = resolve(base_dir, q.as<std::string>());
      }
    }
    read_if(ds, "query_seed", cfg.dataset.query_seed);
    if (const auto gt = ds["ground_truth"]) {
      cfg.dataset.ground_truth = resolve(base_dir, gt.as<std::string>());
    }

    if (const auto algos = root["algorithms"]) {
      for (const auto& a : algos) cfg.algorithms.push_back(parse_algorithm(a.as<std::string>()));
    }
    if (const auto h = root["hnsw"]) {
      reject_unknown(h, {"M", "ef_construction", "seed", "level_decay"}, "hnsw");
      read_if(h, "M", cfg.hnsw.M);
      read_if(h, "ef_construction", cfg.hnsw.ef_construction);
      read_if(h, "seed", cfg.hnsw.seed);
      read_if(h, "level_decay", cfg.hnsw.level_decay);
    }
    if (const auto kg = root["kgraph"]) {
      reject_unknown(kg, {"K", "rho", "delta", "max_iterations", "seed"}, "kgraph");
      read_if(kg, "K", cfg.kgraph_k);
      read_if(kg, "rho", cfg.kgraph.rho);
      read_if(kg, "delta", cfg.kgraph.delta);
      read_if(kg, "max_iterations", cfg.kgraph.max_iterations);
      read_if(kg, "seed", cfg.kgraph.seed);
    }
    if (const auto ef = root["ef"]) cfg.ef_sweep = ef.as<std::vector<size_t>>();
    read_if(root, "k", cfg.k);
    read_if(root, "seed", cfg.seed);
    read_if(root, "seed_count", cfg.seed_count);
    read_if(root, "threads", cfg.threads);
    if (const auto out = root["output_dir"]) cfg.output_dir = resolve(base_dir, out.as<std::string>());
    if (const auto t = root["trajectory"]) {
      reject_unknown(t, {"ef", "queries", "buckets", "edges"}, "trajectory");
      read_if(t, "ef", cfg.trajectory.ef);
      read_if(t, "queries", cfg.trajectory.queries);
      read_if(t, "buckets", cfg.trajectory.buckets);
      if (const auto e = t["edges"]) cfg.trajectory.edges = e.as<std::vector<double>>();
    }
  } catch (const YAML::Exception& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  cfg.kgraph.threads = cfg.threads;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = parse_config(text.str(), path.parent_path());
  cfg.validate();
  return cfg;
}

}  // namespace graphann
