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

#include "graphann/bench.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "graphann/datasets.h"
#include "graphann/distance.h"
#include "graphann/errors.h"

namespace graphann {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string file_stem_for(Algorithm a) {
  std::string s(algorithm_name(a));
  for (char& c : s) {
    if (c == '+' || c == '-') c = '_';
  }
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

double compute_recall_at_1(std::span<const Neighbor> top1, const GroundTruth& truth) {
  if (top1.size() != truth.queries) {
    throw UsageError("recall: " + std::to_string(top1.size()) + " results for " +
                     std::to_string(truth.queries) + " queries");
  }
  if (truth.k == 0) throw UsageError("recall: empty ground truth");
  if (top1.empty()) return 0.0;
  size_t hits = 0;
  for (size_t q = 0; q < top1.size(); ++q) {
    const uint32_t true_id = truth.ids_of(q)[0];
    const double true_dist = truth.distances_of(q)[0];
    const double got = top1[q].distance;
    if (top1[q].id == true_id ||
        std::fabs(got - true_dist) <= 1e-6 * std::fabs(true_dist)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(top1.size());
}

void write_results_csv(std::span<const BenchRecord> records,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << kResultsCsvHeader << '\n';
  char buf[512];
  for (const auto& r : records) {
    if (r.dataset.find(',') != std::string::npos) {
      throw UsageError("dataset name may not contain commas");
    }
    std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%zu,%.17g\n",
                  r.dataset.c_str(), std::string(algorithm_name(r.algorithm)).c_str(), r.ef,
                  r.k, r.recall_at_1, r.mean_evaluations, r.eval_speedup, r.wall_speedup,
                  r.query_count, r.build_seconds);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<BenchRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kResultsCsvHeader) {
    throw FormatError(path.string() + ": unexpected results header");
  }
  std::vector<BenchRecord> records;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 10) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 10 columns");
    }
    try {
      BenchRecord r;
      r.dataset = cells[0];
      r.algorithm = parse_algorithm(cells[1]);
      r.ef = std::stoull(cells[2]);
      r.k = std::stoull(cells[3]);
      r.recall_at_1 = std::stod(cells[4]);
      r.mean_evaluations = std::stod(cells[5]);
      r.eval_speedup = std::stod(cells[6]);
      r.wall_speedup = std::stod(cells[7]);
      r.query_count = std::stoull(cells[8]);
      r.build_seconds = std::stod(cells[9]);
      records.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_plot_script(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << R"PY(#!/usr/bin/env python3
"""Plots recall-vs-speedup curves and trajectory histograms.

Usage: python3 plot_results.py [results_dir]
Reads results.csv and trajectory_*.csv from results_dir (default: this
script's directory) and writes PNG files next to them.
"""
import csv
import glob
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def plot_sweeps(root):
    path = os.path.join(root, "results.csv")
    if not os.path.exists(path):
        return
    curves = defaultdict(lambda: defaultdict(list))
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            if row["algo"] == "brute":
                continue
            curve = curves[row["dataset"]][row["algo"]]
            curve.append((float(row["eval_speedup"]), float(row["wall_speedup"]),
                          float(row["recall_at_1"])))
    for dataset, algos in curves.items():
        fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
        for algo, points in sorted(algos.items()):
            points.sort(key=lambda p: p[2])
            axes[0].plot([p[2] for p in points], [p[0] for p in points], marker="o", label=algo)
            axes[1].plot([p[2] for p in points], [p[1] for p in points], marker="o", label=algo)
        for ax, label in zip(axes, ["speedup (distance evaluations)", "speedup (wall clock)"]):
            ax.set_xlabel("Recall@1")
            ax.set_ylabel(label)
            ax.set_yscale("log")
            ax.grid(True, which="both", alpha=0.3)
            ax.legend()
        fig.suptitle(dataset)
        fig.tight_layout()
        fig.savefig(os.path.join(root, "recall_speedup_%s.png" % dataset), dpi=130)
        plt.close(fig)


def plot_trajectories(root):
    files = sorted(glob.glob(os.path.join(root, "trajectory_*.csv")))
    if not files:
        return
    fig, ax = plt.subplots(figsize=(8, 4.5))
    width = 0.8 / len(files)
    for i, path in enumerate(files):
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        xs = [j + i * width for j in range(len(rows))]
        ax.bar(xs, [int(r["evaluations"]) for r in rows], width=width,
               label=os.path.basename(path)[len("trajectory_"):-4])
        labels = ["%.3g-%.3g" % (float(r["bucket_high"]), float(r["bucket_low"])) for r in rows]
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(labels))])
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_xlabel("distance range reached (far to near)")
    ax.set_ylabel("distance evaluations")
    ax.set_yscale("log")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(root, "trajectory.png"), dpi=130)
    plt.close(fig)


if __name__ == "__main__":
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))
    plot_sweeps(root)
    plot_trajectories(root)
)PY";
  if (!out) throw IoError("write failed: " + path.string());
}

struct Experiment::State {
  std::optional<VectorSet> base;
  std::optional<VectorSet> queries;
  std::optional<GroundTruth> truth;
  std::optional<double> exhaustive_seconds;
  std::optional<HnswIndex> hnsw;
  std::optional<AdjacencyGraph> flat_hnsw;
  std::optional<KnnGraph> kgraph;
  std::optional<DiversifiedGraph> kgraph_gd;
  std::optional<DiversifiedGraph> dpg;
  double hnsw_seconds = 0.0;
  double flat_extract_seconds = 0.0;
  double kgraph_seconds = 0.0;
  double gd_seconds = 0.0;
  double dpg_seconds = 0.0;
};

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)), state_(std::make_unique<State>()) {
  config_.validate();
}

Experiment::~Experiment() = default;

const VectorSet& Experiment::base() {
  if (!state_->base) {
    const auto& ds = config_.dataset;
    if (ds.base.empty()) {
      VectorSet set = generate_uniform(ds.n, ds.d, ds.seed);
      set.set_metric(ds.metric);
      if (ds.metric == Metric::kCosine) normalize_rows(set);
      state_->base = std::move(set);
    } else {
      state_->base = load_dataset(ds.base, &ds.metric);
    }
  }
  return *state_->base;
}

const VectorSet& Experiment::queries() {
  if (!state_->queries) {
    const auto& ds = config_.dataset;
    if (ds.base.empty()) {
      VectorSet set = generate_uniform(ds.query_count, ds.d, ds.query_seed);
      set.set_metric(ds.metric);
      if (ds.metric == Metric::kCosine) normalize_rows(set);
      state_->queries = std::move(set);
    } else {
      state_->queries = load_dataset(ds.queries, &ds.metric);
    }
    if (state_->queries->dim() != base().dim()) {
      throw UsageError("query dimension differs from base dimension");
    }
  }
  return *state_->queries;
}

const GroundTruth& Experiment::truth() {
  if (!state_->truth) {
    const auto& prefix = config_.dataset.ground_truth;
    const size_t k = config_.k;
    if (!prefix.empty() && std::filesystem::exists(prefix.string() + ".ivecs")) {
      GroundTruth gt = load_ground_truth(prefix);
      if (gt.queries != queries().size() || gt.k < k) {
        throw FormatError("cached ground truth " + prefix.string() +
                          " does not match the configured queries");
      }
      state_->truth = std::move(gt);
    } else {
      GroundTruth gt = brute_force_knn(base(), queries(), k, 1);
      state_->exhaustive_seconds = gt.scan_seconds;
      if (!prefix.empty()) save_ground_truth(gt, prefix);
      state_->truth = std::move(gt);
    }
  }
  return *state_->truth;
}

double Experiment::exhaustive_seconds() {
  truth();
  if (!state_->exhaustive_seconds) {
    state_->exhaustive_seconds = brute_force_knn(base(), queries(), 1, 1).scan_seconds;
  }
  return *state_->exhaustive_seconds;
}

const HnswIndex& Experiment::hnsw() {
  if (!state_->hnsw) {
    state_->hnsw = hnsw_build(base(), config_.hnsw);
    state_->hnsw_seconds = state_->hnsw->build_stats().seconds;
  }
  return *state_->hnsw;
}

const AdjacencyGraph& Experiment::flat_hnsw() {
  if (!state_->flat_hnsw) {
    const HnswIndex& index = hnsw();
    const auto start = Clock::now();
    state_->flat_hnsw = index.bottom_layer(base());
    state_->flat_extract_seconds = seconds_since(start);
  }
  return *state_->flat_hnsw;
}

const KnnGraph& Experiment::kgraph() {
  if (!state_->kgraph) {
    const auto start = Clock::now();
    state_->kgraph = build_knn_graph(base(), config_.kgraph_k, config_.kgraph);
    state_->kgraph_seconds = seconds_since(start);
  }
  return *state_->kgraph;
}

const DiversifiedGraph& Experiment::kgraph_gd() {
  if (!state_->kgraph_gd) {
    const KnnGraph& knn = kgraph();
    const auto start = Clock::now();
    state_->kgraph_gd = add_reverse_edges(gd_prune(knn.adjacency, base(), config_.threads));
    state_->gd_seconds = seconds_since(start);
  }
  return *state_->kgraph_gd;
}

const DiversifiedGraph& Experiment::dpg() {
  if (!state_->dpg) {
    const KnnGraph& knn = kgraph();
    const auto start = Clock::now();
    state_->dpg = add_reverse_edges(dpg_prune(knn.adjacency, base(), config_.threads));
    state_->dpg_seconds = seconds_since(start);
  }
  return *state_->dpg;
}

double Experiment::build_seconds(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kHnsw: hnsw(); return state_->hnsw_seconds;
    case Algorithm::kFlatHnsw: flat_hnsw(); return state_->hnsw_seconds + state_->flat_extract_seconds;
    case Algorithm::kKGraph: kgraph(); return state_->kgraph_seconds;
    case Algorithm::kKGraphGd: kgraph_gd(); return state_->kgraph_seconds + state_->gd_seconds;
    case Algorithm::kDpg: dpg(); return state_->kgraph_seconds + state_->dpg_seconds;
    case Algorithm::kBrute: return 0.0;
  }
  return 0.0;
}

BenchRecord Experiment::measure(Algorithm algorithm, size_t ef) {
  const VectorSet& data = base();
  const VectorSet& qs = queries();
  const GroundTruth& gt = truth();
  const double exhaustive = exhaustive_seconds();

  BenchRecord rec;
  rec.dataset = config_.dataset.name;
  rec.algorithm = algorithm;
  rec.k = config_.k;
  rec.query_count = qs.size();
  rec.build_seconds = build_seconds(algorithm);

  std::vector<Neighbor> top1(qs.size());
  uint64_t evaluations = 0;
  double elapsed = 0.0;
  if (algorithm == Algorithm::kBrute) {
    rec.ef = 0;
    const GroundTruth scan = brute_force_knn(data, qs, config_.k, 1);
    elapsed = scan.scan_seconds;
    for (size_t q = 0; q < qs.size(); ++q) {
      top1[q] = Neighbor{scan.ids_of(q)[0], scan.distances_of(q)[0]};
    }
    evaluations = static_cast<uint64_t>(data.size()) * qs.size();
  } else {
    rec.ef = ef;
    SearchScratch scratch;
    if (algorithm == Algorithm::kHnsw) {
      const HnswIndex& index = hnsw();
      const auto start = Clock::now();
      for (size_t q = 0; q < qs.size(); ++q) {
        const auto res = index.search(data, qs.row(q), ef, config_.k, &scratch);
        top1[q] = res.neighbors.front();
        evaluations += res.evaluations;
      }
      elapsed = seconds_since(start);
    } else {
      const AdjacencyGraph* graph = nullptr;
      switch (algorithm) {
        case Algorithm::kFlatHnsw: graph = &flat_hnsw(); break;
        case Algorithm::kKGraph: graph = &kgraph().adjacency; break;
        case Algorithm::kKGraphGd: graph = &kgraph_gd().adjacency; break;
        case Algorithm::kDpg: graph = &dpg().adjacency; break;
        default: break;
      }
      FlatSearchParams params;
      params.ef = ef;
      params.k = config_.k;
      params.seed_count = std::min(config_.seed_count == 0 ? ef : config_.seed_count, data.size());
      const auto start = Clock::now();
      for (size_t q = 0; q < qs.size(); ++q) {
        Rng rng = query_rng(config_.seed, q);
        const auto res = best_first_search(*graph, data, qs.row(q), params, rng, &scratch);
        top1[q] = res.neighbors.front();
        evaluations += res.evaluations;
      }
      elapsed = seconds_since(start);
    }
  }
  rec.recall_at_1 = compute_recall_at_1(top1, gt);
  rec.mean_evaluations = static_cast<double>(evaluations) / static_cast<double>(qs.size());
  rec.eval_speedup = static_cast<double>(data.size()) / rec.mean_evaluations;
  rec.wall_speedup = exhaustive / std::max(elapsed, 1e-9);
  return rec;
}

SweepOutcome Experiment::run_sweep(bool write_files) {
  SweepOutcome outcome;
  for (const Algorithm algo : config_.algorithms) {
    try {
      build_seconds(algo);
    } catch (const std::exception& e) {
      outcome.failures.push_back(std::string(algorithm_name(algo)) + ": " + e.what());
      continue;
    }
    if (algo == Algorithm::kBrute) {
      outcome.records.push_back(measure(algo, 0));
      continue;
    }
    for (const size_t ef : config_.ef_sweep) {
      if (ef > base().size()) break;
      outcome.records.push_back(measure(algo, ef));
    }
  }
  if (write_files) {
    std::filesystem::create_directories(config_.output_dir);
    write_results_csv(outcome.records, config_.output_dir / "results.csv");
    write_plot_script(config_.output_dir / "plot_results.py");
  }
  return outcome;
}

std::vector<TrajectoryResult> Experiment::run_trajectory_study(std::span<const double> edges,
                                                               bool write_files) {
  const VectorSet& data = base();
  const VectorSet& qs = queries();
  const GroundTruth& gt = truth();
  const size_t count = std::min(config_.trajectory.queries, qs.size());
  const size_t ef = std::min(config_.trajectory.ef, data.size());

  const Algorithm methods[] = {Algorithm::kHnsw, Algorithm::kFlatHnsw, Algorithm::kKGraphGd};
  std::vector<std::vector<SearchTrace>> traces(std::size(methods));
  std::vector<TrajectoryResult> results(std::size(methods));
  SearchScratch scratch;
  GroundTruth subset;
  subset.queries = count;
  subset.k = gt.k;
  subset.ids.assign(gt.ids.begin(), gt.ids.begin() + static_cast<ptrdiff_t>(count * gt.k));
  subset.distances.assign(gt.distances.begin(),
                          gt.distances.begin() + static_cast<ptrdiff_t>(count * gt.k));

  for (size_t m = 0; m < std::size(methods); ++m) {
    traces[m].resize(count);
    std::vector<Neighbor> top1(count);
    for (size_t q = 0; q < count; ++q) {
      SearchResult res;
      if (methods[m] == Algorithm::kHnsw) {
        res = hnsw().search(data, qs.row(q), ef, 1, &scratch, &traces[m][q]);
      } else {
        const AdjacencyGraph& graph =
            methods[m] == Algorithm::kFlatHnsw ? flat_hnsw() : kgraph_gd().adjacency;
        FlatSearchParams params;
        params.ef = ef;
        params.k = 1;
        params.seed_count = std::min(config_.seed_count == 0 ? ef : config_.seed_count, data.size());
        Rng rng = query_rng(config_.seed, q);
        res = best_first_search(graph, data, qs.row(q), params, rng, &scratch, &traces[m][q]);
      }
      top1[q] = res.neighbors.front();
      results[m].total_evaluations += res.evaluations;
    }
    results[m].algorithm = methods[m];
    results[m].recall_at_1 = compute_recall_at_1(top1, subset);
  }

  std::vector<double> bucket_edges(edges.begin(), edges.end());
  if (bucket_edges.empty()) bucket_edges = config_.trajectory.edges;
  if (bucket_edges.empty()) {
    std::vector<SearchTrace> all;
    for (const auto& t : traces) all.insert(all.end(), t.begin(), t.end());
    std::vector<float> nn(count);
    for (size_t q = 0; q < count; ++q) nn[q] = gt.distances_of(q)[0];
    bucket_edges = default_bucket_edges(all, nn, config_.trajectory.buckets);
  }
  for (size_t m = 0; m < std::size(methods); ++m) {
    results[m].histogram = bucket_trace(traces[m], bucket_edges);
  }
  if (write_files) {
    std::filesystem::create_directories(config_.output_dir);
    for (size_t m = 0; m < std::size(methods); ++m) {
      const std::string stem = config_.dataset.name + "_" + file_stem_for(methods[m]);
      write_histogram_csv(results[m].histogram,
                          config_.output_dir / ("trajectory_" + stem + ".csv"));
      write_trace_csv(traces[m], config_.output_dir / ("trace_" + stem + ".csv"));
    }
    write_plot_script(config_.output_dir / "plot_results.py");
  }
  return results;
}

SweepOutcome run_sweep(const ExperimentConfig& config) {
  Experiment experiment(config);
  return experiment.run_sweep();
}

std::vector<TrajectoryResult> run_trajectory_study(const ExperimentConfig& config,
                                                   std::span<const double> edges) {
  Experiment experiment(config);
  return experiment.run_trajectory_study(edges);
}

}  // namespace graphann
