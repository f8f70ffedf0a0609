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

#include "graphann_cli/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "graphann/bench.h"
#include "graphann/config.h"
#include "graphann/datasets.h"
#include "graphann/diversify.h"
#include "graphann/errors.h"
#include "graphann/ground_truth.h"
#include "graphann/hnsw.h"
#include "graphann/lid.h"
#include "graphann/nndescent.h"
#include "graphann/search.h"
#include "graphann/trace.h"
#include "graphann/vecs_io.h"

namespace graphann::cli {
namespace {

// Values bound to CLI11 options. One instance per invocation.
struct Options {
  // shared
  std::string metric;
  unsigned threads = 1;
  uint64_t seed = 0;

  // gen
  size_t n = 0;
  size_t d = 0;
  std::string name;
  std::string out;

  // gt / search
  std::string base;
  std::string queries;
  size_t k = 1;

  // lid
  size_t lid_k = 200;
  size_t sample = 0;

  // build
  std::string algo;
  std::string source;
  std::string index;
  size_t knn_k = 20;
  double rho = 0.5;
  double delta = 0.001;
  uint32_t max_iterations = 30;
  uint32_t M = 16;
  uint32_t ef_construction = 200;
  bool no_reverse = false;

  // search
  std::string graph;
  size_t ef = 64;
  size_t seed_count = 0;
  std::string truth;
  std::string trace;

  // bench / trajectory
  std::string config;
  std::string output_dir;
  std::vector<double> edges;
};

// The --metric flag, when given, overrides the dataset sidecar.
VectorSet load(const Options& o, const std::string& path) {
  if (o.metric.empty()) return load_dataset(path);
  const Metric m = parse_metric(o.metric);
  return load_dataset(path, &m);
}

void print_audit(const AuditReport& report, const std::string& what, std::ostream& out,
                 std::ostream& err) {
  if (report.ok()) {
    out << what << ": ok\n";
    return;
  }
  err << what << ": " << report.violations() << " violation(s)\n";
  for (const auto& m : report.messages()) err << "  " << m << '\n';
}

int cmd_gen(const Options& o, std::ostream& out) {
  const Metric metric = o.metric.empty() ? Metric::kL2 : parse_metric(o.metric);
  VectorSet set = generate_uniform(o.n, o.d, o.seed);
  set.set_metric(metric);
  if (metric == Metric::kCosine) normalize_rows(set);
  write_fvecs(set, o.out);
  DatasetMetadata meta;
  meta.name = o.name.empty() ? std::filesystem::path(o.out).stem().string() : o.name;
  meta.n = o.n;
  meta.d = o.d;
  meta.metric = metric;
  meta.seed = o.seed;
  meta.normalized = metric == Metric::kCosine;
  write_metadata(meta, metadata_path(o.out));
  out << "wrote " << o.n << " x " << o.d << " vectors to " << o.out << '\n';
  return kExitOk;
}

int cmd_gt(const Options& o, std::ostream& out) {
  const VectorSet base = load(o, o.base);
  const Metric metric = base.metric();
  const VectorSet queries = load_dataset(o.queries, &metric);
  const GroundTruth gt = brute_force_knn(base, queries, o.k, o.threads);
  save_ground_truth(gt, o.out);
  out << "ground truth for " << gt.queries << " queries, k=" << gt.k << ", scan "
      << gt.scan_seconds << " s -> " << o.out << ".ivecs/.fvecs\n";
  return kExitOk;
}

int cmd_lid(const Options& o, std::ostream& out) {
  const VectorSet data = load(o, o.base);
  LidParams params;
  params.k_neighbors = o.lid_k;
  params.sample_size = o.sample;
  params.seed = o.seed;
  params.threads = o.threads;
  const LidEstimate est = estimate_lid(data, params);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", est.value);
  out << "lid=" << buf << " k=" << est.k_neighbors << " sample=" << est.sample_size
      << " anchors_used=" << est.anchors_used << '\n';
  return kExitOk;
}

HnswParams hnsw_params_of(const Options& o) {
  HnswParams p;
  p.M = o.M;
  p.ef_construction = o.ef_construction;
  p.seed = o.seed;
  return p;
}

int cmd_build(const Options& o, std::ostream& out) {
  const VectorSet data = load(o, o.base);
  if (o.algo == "kgraph") {
    NnDescentParams p;
    p.rho = o.rho;
    p.delta = o.delta;
    p.max_iterations = o.max_iterations;
    p.seed = o.seed;
    p.threads = o.threads;
    const KnnGraph g = build_knn_graph(data, o.knn_k, p);
    save_graph(g.adjacency, o.out);
    out << "kgraph: n=" << data.size() << " K=" << o.knn_k << " iterations="
        << g.stats.iterations << " evaluations=" << g.stats.distance_evaluations << '\n';
  } else if (o.algo == "gd" || o.algo == "dpg") {
    if (o.source.empty()) throw UsageError("--algo " + o.algo + " requires --source");
    const AdjacencyGraph source = load_graph(o.source);
    if (source.size() != data.size()) {
      throw UsageError("source graph has " + std::to_string(source.size()) +
                       " vertices but the data has " + std::to_string(data.size()));
    }
    DiversifiedGraph g = o.algo == "gd" ? gd_prune(source, data, o.threads)
                                        : dpg_prune(source, data, o.threads);
    if (!o.no_reverse) g = add_reverse_edges(g);
    save_graph(g.adjacency, o.out);
    write_provenance(g, provenance_path(o.out));
    out << o.algo << ": n=" << data.size() << " edges=" << g.adjacency.edge_count()
        << " max_degree=" << g.max_degree() << '\n';
  } else if (o.algo == "hnsw") {
    const HnswIndex index = hnsw_build(data, hnsw_params_of(o));
    index.save(o.out);
    out << "hnsw: n=" << data.size() << " max_level=" << index.max_level()
        << " evaluations=" << index.build_stats().distance_evaluations << " seconds="
        << index.build_stats().seconds << '\n';
  } else if (o.algo == "flat-hnsw") {
    const HnswIndex index =
        o.index.empty() ? hnsw_build(data, hnsw_params_of(o)) : HnswIndex::load(o.index);
    if (index.capacity() != data.size()) throw UsageError("index does not match the data");
    const AdjacencyGraph g = index.bottom_layer(data);
    save_graph(g, o.out);
    out << "flat-hnsw: n=" << data.size() << " edges=" << g.edge_count() << '\n';
  } else {
    throw UsageError("unknown --algo " + o.algo);
  }
  return kExitOk;
}

int cmd_search(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.graph.empty() == o.index.empty()) {
    throw UsageError("search needs exactly one of --graph or --index");
  }
  const VectorSet data = load(o, o.base);
  const Metric metric = data.metric();
  const VectorSet queries = load_dataset(o.queries, &metric);
  if (queries.dim() != data.dim()) throw UsageError("query dimension differs from data");

  std::optional<HnswIndex> index;
  std::optional<AdjacencyGraph> graph;
  if (!o.index.empty()) {
    index = HnswIndex::load(o.index);
    if (index->capacity() != data.size()) throw UsageError("index does not match the data");
  } else {
    graph = load_graph(o.graph);
    if (graph->size() != data.size()) throw UsageError("graph does not match the data");
  }

  std::vector<SearchTrace> traces(o.trace.empty() ? 0 : queries.size());
  std::vector<Neighbor> top1(queries.size());
  uint64_t evaluations = 0;
  SearchScratch scratch;
  out << "query_id,rank,id,distance\n";
  char buf[96];
  for (size_t q = 0; q < queries.size(); ++q) {
    SearchTrace* trace = traces.empty() ? nullptr : &traces[q];
    SearchResult res;
    if (index) {
      res = index->search(data, queries.row(q), o.ef, o.k, &scratch, trace);
    } else {
      FlatSearchParams p;
      p.ef = o.ef;
      p.k = o.k;
      p.seed_count = o.seed_count;
      Rng rng = query_rng(o.seed, q);
      res = best_first_search(*graph, data, queries.row(q), p, rng, &scratch, trace);
    }
    evaluations += res.evaluations;
    top1[q] = res.neighbors.front();
    for (size_t r = 0; r < res.neighbors.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%u,%.9g\n", q, r, res.neighbors[r].id,
                    res.neighbors[r].distance);
      out << buf;
    }
  }
  err << "queries=" << queries.size() << " mean_evals="
      << (queries.size() ? static_cast<double>(evaluations) / queries.size() : 0.0);
  if (!o.truth.empty()) {
    const GroundTruth gt = load_ground_truth(o.truth);
    err << " recall_at_1=" << compute_recall_at_1(top1, gt);
  }
  err << '\n';
  if (!o.trace.empty()) write_trace_csv(traces, o.trace);
  return kExitOk;
}

ExperimentConfig config_of(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  return cfg;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = config_of(o);
  const SweepOutcome outcome = run_sweep(cfg);
  char buf[256];
  out << "algo        ef    recall@1  mean_evals  eval_speedup  wall_speedup\n";
  for (const auto& r : outcome.records) {
    std::snprintf(buf, sizeof(buf), "%-10s %4zu %10.4f %11.1f %13.2f %13.2f\n",
                  std::string(algorithm_name(r.algorithm)).c_str(), r.ef, r.recall_at_1,
                  r.mean_evaluations, r.eval_speedup, r.wall_speedup);
    out << buf;
  }
  out << "results written to " << (cfg.output_dir / "results.csv").string() << '\n';
  for (const auto& f : outcome.failures) err << "build failed: " << f << '\n';
  return outcome.failures.empty() ? kExitOk : kExitFailure;
}

int cmd_trajectory(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = config_of(o);
  const auto results = run_trajectory_study(cfg, o.edges);
  char buf[128];
  for (const auto& r : results) {
    out << algorithm_name(r.algorithm) << " recall@1=" << r.recall_at_1
        << " evaluations=" << r.total_evaluations << '\n';
    for (size_t b = 0; b < r.histogram.buckets(); ++b) {
      std::snprintf(buf, sizeof(buf), "  [%.6g, %.6g) %llu\n", r.histogram.edges[b + 1],
                    r.histogram.edges[b],
                    static_cast<unsigned long long>(r.histogram.evaluations[b]));
      out << buf;
    }
  }
  out << "histograms written to " << cfg.output_dir.string() << '\n';
  return kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.graph.empty() == o.index.empty()) {
    throw UsageError("audit needs exactly one of --graph or --index");
  }
  std::optional<VectorSet> data;
  if (!o.base.empty()) {
    data = load(o, o.base);
  }
  AuditReport report;
  if (!o.index.empty()) {
    const HnswIndex index = HnswIndex::load(o.index);
    report.merge(index.audit());
    if (data && index.capacity() != data->size()) {
      report.fail("index holds " + std::to_string(index.capacity()) +
                  " vertices but the data has " + std::to_string(data->size()));
    }
    print_audit(report, "hnsw " + o.index, out, err);
    return report.ok() ? kExitOk : kExitFailure;
  }

  const AdjacencyGraph graph = load_graph(o.graph);
  GraphAuditOptions opts;
  if (data) {
    if (data->size() != graph.size()) {
      throw UsageError("graph has " + std::to_string(graph.size()) +
                       " vertices but the data has " + std::to_string(data->size()));
    }
    opts.data = &*data;
  }
  const auto prov_file = provenance_path(o.graph);
  std::string what = "graph " + o.graph;
  if (std::filesystem::exists(prov_file)) {
    const ProvenanceRecord prov = read_provenance(prov_file);
    what += " (" + std::string(provenance_name(prov.provenance)) + ")";
    if (graph.max_degree() > prov.max_degree) {
      report.fail("max degree " + std::to_string(graph.max_degree()) +
                  " exceeds recorded " + std::to_string(prov.max_degree));
    }
    if (has_reverse_edges(prov.provenance)) report.merge(audit_symmetry(graph));
    std::optional<AdjacencyGraph> source;
    if (!o.source.empty()) {
      source = load_graph(o.source);
      if (graph_digest(*source) != prov.source_digest) {
        report.fail("source graph digest does not match the provenance record");
      }
    }
    if (data) {
      const bool gd = prov.provenance == Provenance::kGd ||
                      prov.provenance == Provenance::kGdReverse;
      if (!has_reverse_edges(prov.provenance)) {
        if (gd) report.merge(audit_gd(graph, *data, source ? &*source : nullptr));
      } else if (source) {
        // Re-derive the forward lists and check they are audited and that
        // the stored graph is exactly their reverse-edge union.
        DiversifiedGraph forward = gd ? gd_prune(*source, *data, o.threads)
                                      : dpg_prune(*source, *data, o.threads);
        if (gd) report.merge(audit_gd(forward.adjacency, *data, &*source));
        if (!(add_reverse_edges(forward).adjacency == graph)) {
          report.fail("graph differs from the reverse-edge union of its source");
        }
      }
    }
  }
  report.merge(audit_graph(graph, opts));
  print_audit(report, what, out, err);
  return report.ok() ? kExitOk : kExitFailure;
}

void add_metric(CLI::App* cmd, Options& o) {
  cmd->add_option("--metric", o.metric, "Distance: l2 or cosine (default: dataset sidecar, else l2)")
      ->check(CLI::IsMember({"l2", "cosine"}));
}

void add_threads(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Graph-based approximate nearest neighbor search toolkit", "graphann"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "graphann 0.1.0");

  auto* gen = app.add_subcommand("gen", "Generate uniform random vectors in [0,1)^d");
  gen->add_option("--n", o.n, "Number of vectors")->required();
  gen->add_option("--d", o.d, "Dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  gen->add_option("--name", o.name, "Dataset name recorded in the metadata sidecar");
  gen->add_option("--out", o.out, "Output .fvecs path")->required();
  add_metric(gen, o);

  auto* gt = app.add_subcommand("gt", "Exact k nearest neighbors by exhaustive scan");
  gt->add_option("--base", o.base, "Base vectors (.fvecs)")->required();
  gt->add_option("--queries", o.queries, "Query vectors (.fvecs)")->required();
  gt->add_option("--k", o.k, "Neighbors per query")->capture_default_str();
  gt->add_option("--out", o.out, "Output prefix for .ivecs/.fvecs")->required();
  add_metric(gt, o);
  add_threads(gt, o);

  auto* lid = app.add_subcommand("lid", "Maximum-likelihood local intrinsic dimension");
  lid->add_option("--base", o.base, "Vectors (.fvecs)")->required();
  lid->add_option("--k", o.lid_k, "Neighbors per anchor")->capture_default_str();
  lid->add_option("--sample", o.sample, "Anchors to sample (0 = min(n, 10000))")
      ->capture_default_str();
  lid->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  add_metric(lid, o);
  add_threads(lid, o);

  auto* build = app.add_subcommand("build", "Build a graph or index");
  build->add_option("--algo", o.algo, "kgraph, gd, dpg, hnsw or flat-hnsw")
      ->required()
      ->check(CLI::IsMember({"kgraph", "gd", "dpg", "hnsw", "flat-hnsw"}));
  build->add_option("--base", o.base, "Vectors (.fvecs)")->required();
  build->add_option("--out", o.out, "Output graph or index path")->required();
  build->add_option("--source", o.source, "k-NN graph to diversify (gd, dpg)");
  build->add_option("--index", o.index, "Existing HNSW index (flat-hnsw)");
  build->add_option("--K", o.knn_k, "Neighbors per vertex (kgraph)")->capture_default_str();
  build->add_option("--rho", o.rho, "Sample rate (kgraph)")->capture_default_str();
  build->add_option("--delta", o.delta, "Early termination threshold (kgraph)")
      ->capture_default_str();
  build->add_option("--max-iterations", o.max_iterations, "Iteration cap (kgraph)")
      ->capture_default_str();
  build->add_option("--M", o.M, "Links per layer (hnsw, flat-hnsw)")->capture_default_str();
  build->add_option("--ef-construction", o.ef_construction,
                    "Construction pool size (hnsw, flat-hnsw)")
      ->capture_default_str();
  build->add_option("--seed", o.seed, "Seed")->capture_default_str();
  build->add_flag("--no-reverse", o.no_reverse, "Skip the reverse-edge union (gd, dpg)");
  add_metric(build, o);
  add_threads(build, o);

  auto* search = app.add_subcommand("search", "Query a graph or HNSW index");
  search->add_option("--base", o.base, "Vectors the artifact was built on")->required();
  search->add_option("--queries", o.queries, "Query vectors (.fvecs)")->required();
  search->add_option("--graph", o.graph, "Flat graph file");
  search->add_option("--index", o.index, "HNSW index file");
  search->add_option("--ef", o.ef, "Pool size")->capture_default_str()->check(CLI::PositiveNumber);
  search->add_option("--k", o.k, "Results per query")->capture_default_str();
  search->add_option("--seed", o.seed, "Seed for random starting points")->capture_default_str();
  search->add_option("--seed-count", o.seed_count, "Random starting points (0 = ef)")
      ->capture_default_str();
  search->add_option("--truth", o.truth, "Ground-truth prefix; reports Recall@1");
  search->add_option("--trace", o.trace, "Write per-evaluation trace CSV here");
  add_metric(search, o);

  auto* bench = app.add_subcommand("bench", "Run an ef sweep from a config file");
  bench->add_option("--config", o.config, "Experiment config (YAML)")->required();
  bench->add_option("--output-dir", o.output_dir, "Override the configured output directory");

  auto* traj = app.add_subcommand("trajectory", "Run the search trajectory study");
  traj->add_option("--config", o.config, "Experiment config (YAML)")->required();
  traj->add_option("--output-dir", o.output_dir, "Override the configured output directory");
  traj->add_option("--edges", o.edges, "Descending bucket edges, comma separated")
      ->delimiter(',');

  auto* audit = app.add_subcommand("audit", "Check structural invariants of an artifact");
  audit->add_option("--graph", o.graph, "Graph file");
  audit->add_option("--index", o.index, "HNSW index file");
  audit->add_option("--base", o.base, "Vectors, enables distance and occlusion checks");
  audit->add_option("--source", o.source, "Source k-NN graph of a gd/dpg graph");
  add_metric(audit, o);
  add_threads(audit, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (gt->parsed()) return cmd_gt(o, out);
    if (lid->parsed()) return cmd_lid(o, out);
    if (build->parsed()) return cmd_build(o, out);
    if (search->parsed()) return cmd_search(o, out, err);
    if (bench->parsed()) return cmd_bench(o, out, err);
    if (traj->parsed()) return cmd_trajectory(o, out);
    if (audit->parsed()) return cmd_audit(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace graphann::cli
