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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphann/config.h"
#include "graphann/diversify.h"
#include "graphann/ground_truth.h"
#include "graphann/hnsw.h"
#include "graphann/nndescent.h"
#include "graphann/search.h"
#include "graphann/trace.h"

namespace graphann {

/// One row of a sweep.
struct BenchRecord {
  std::string dataset;
  Algorithm algorithm = Algorithm::kBrute;
  /// 0 for the exhaustive baseline, which has no pool.
  size_t ef = 0;
  size_t k = 1;
  double recall_at_1 = 0.0;
  double mean_evaluations = 0.0;
  /// n / mean_evaluations.
  double eval_speedup = 0.0;
  /// Exhaustive wall time / method wall time, same process.
  double wall_speedup = 0.0;
  size_t query_count = 0;
  double build_seconds = 0.0;

  bool operator==(const BenchRecord&) const = default;
};

/// Fraction of queries whose top-1 matches the true nearest neighbor by id,
/// or by distance within 1e-6 relative (ties count).
double compute_recall_at_1(std::span<const Neighbor> top1, const GroundTruth& truth);

inline constexpr const char* kResultsCsvHeader =
    "dataset,algo,ef,k,recall_at_1,mean_evals,eval_speedup,wall_speedup,"
    "query_count,build_seconds";

void write_results_csv(std::span<const BenchRecord> records,
                       const std::filesystem::path& path);
std::vector<BenchRecord> read_results_csv(const std::filesystem::path& path);

/// Emits a standalone matplotlib script that plots recall-vs-speedup curves
/// from results.csv and bar charts from the trajectory histogram CSVs found
/// next to it.
void write_plot_script(const std::filesystem::path& path);

struct TrajectoryResult {
  Algorithm algorithm = Algorithm::kHnsw;
  RangeHistogram histogram;
  double recall_at_1 = 0.0;
  uint64_t total_evaluations = 0;
};

struct SweepOutcome {
  std::vector<BenchRecord> records;
  /// "<algo>: <message>" for each algorithm whose build failed.
  std::vector<std::string> failures;
};

/// Holds the dataset, ground truth and lazily built indices of one config so
/// that sweeps and trajectory studies share builds.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);
  ~Experiment();

  const ExperimentConfig& config() const { return config_; }
  const VectorSet& base();
  const VectorSet& queries();
  const GroundTruth& truth();
  /// Single-threaded exhaustive scan time over all queries.
  double exhaustive_seconds();

  const HnswIndex& hnsw();
  const AdjacencyGraph& flat_hnsw();
  const KnnGraph& kgraph();
  const DiversifiedGraph& kgraph_gd();
  const DiversifiedGraph& dpg();
  double build_seconds(Algorithm algorithm);

  /// Runs every query once, sequentially, for one algorithm at one ef.
  BenchRecord measure(Algorithm algorithm, size_t ef);

  /// ef sweep over every configured algorithm. Writes results.csv and the
  /// plot script to the output directory when `write_files` is set.
  SweepOutcome run_sweep(bool write_files = true);

  /// First trajectory.queries queries on HNSW, flat-HNSW and KGraph+GD at
  /// trajectory.ef. Writes one histogram CSV per method when `write_files`.
  std::vector<TrajectoryResult> run_trajectory_study(std::span<const double> edges = {},
                                                     bool write_files = true);

 private:
  struct State;
  ExperimentConfig config_;
  std::unique_ptr<State> state_;
};

SweepOutcome run_sweep(const ExperimentConfig& config);
std::vector<TrajectoryResult> run_trajectory_study(const ExperimentConfig& config,
                                                   std::span<const double> edges = {});

}  // namespace graphann
