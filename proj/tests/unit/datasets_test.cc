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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "../common/oracles.h"
#include "graphann/datasets.h"
#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/ground_truth.h"
#include "graphann/lid.h"
#include "graphann/random.h"
#include "graphann/vecs_io.h"

using namespace graphann;
using graphann::testing::TempDir;
using graphann::testing::random_set;
using graphann::testing::read_bytes;

namespace {

void write_raw(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

const std::string kGolden("\x02\x00\x00\x00\x00\x00\x80\x3f\x00\x00\x00\x40", 12);

}  // namespace

TEST(GenerateTest, DeterministicAndInRange) {
  EXPECT_EQ(generate_uniform(1000, 4, 7), generate_uniform(1000, 4, 7));
  EXPECT_NE(generate_uniform(1000, 4, 7), generate_uniform(1000, 4, 8));
  const VectorSet one = generate_uniform(1, 32, 3);
  for (float x : one.data()) {
    EXPECT_GE(x, 0.0f);
    EXPECT_LT(x, 1.0f);
  }
  const VectorSet big = generate_uniform(100000, 4, 1);
  for (size_t c = 0; c < 4; ++c) {
    double sum = 0;
    for (size_t i = 0; i < big.size(); ++i) sum += big.row(i)[c];
    EXPECT_NEAR(sum / big.size(), 0.5, 0.01);
  }
  EXPECT_THROW(generate_uniform(0, 4, 1), UsageError);
  EXPECT_THROW(generate_uniform(SIZE_MAX / 2, 4, 1), ResourceError);
}

TEST(VecsTest, GoldenBytes) {
  TempDir dir("vecs");
  VectorSet s(1, 2, std::vector<float>{1.0f, 2.0f});
  write_fvecs(s, dir / "a.fvecs");
  EXPECT_EQ(read_bytes(dir / "a.fvecs"), kGolden);
  write_raw(dir / "b.fvecs", kGolden);
  const VectorSet r = read_fvecs(dir / "b.fvecs");
  ASSERT_EQ(r.size(), 1u);
  ASSERT_EQ(r.dim(), 2u);
  EXPECT_EQ(r.row(0)[0], 1.0f);
  EXPECT_EQ(r.row(0)[1], 2.0f);
}

TEST(VecsTest, EmptyFileAndEmptySet) {
  TempDir dir("vecs");
  write_raw(dir / "e.fvecs", "");
  EXPECT_EQ(read_fvecs(dir / "e.fvecs").size(), 0u);
  write_fvecs(VectorSet(), dir / "z.fvecs");
  EXPECT_EQ(std::filesystem::file_size(dir / "z.fvecs"), 0u);
}

TEST(VecsTest, RoundTripBitExact) {
  TempDir dir("vecs");
  for (auto [n, d] : {std::pair<size_t, size_t>{100, 16}, {1000, 8}}) {
    const VectorSet s = random_set(n, d, n + d);
    write_fvecs(s, dir / "r.fvecs");
    const std::string bytes = read_bytes(dir / "r.fvecs");
    const VectorSet back = read_fvecs(dir / "r.fvecs");
    EXPECT_EQ(back, s);
    write_fvecs(back, dir / "r2.fvecs");
    EXPECT_EQ(read_bytes(dir / "r2.fvecs"), bytes);
  }
  IdMatrix ids{3, 2, {1, 2, 3, 4, 5, 6}};
  write_ivecs(ids, dir / "i.ivecs");
  const IdMatrix back = read_ivecs(dir / "i.ivecs");
  EXPECT_EQ(back.rows, 3u);
  EXPECT_EQ(back.cols, 2u);
  EXPECT_EQ(back.values, ids.values);
}

TEST(VecsTest, MalformedFiles) {
  TempDir dir("vecs");
  write_raw(dir / "t.fvecs", kGolden.substr(0, 10));
  try {
    read_fvecs(dir / "t.fvecs");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
  }
  write_raw(dir / "m.fvecs",
            kGolden + std::string("\x01\x00\x00\x00\x00\x00\x80\x3f", 8));
  EXPECT_THROW(read_fvecs(dir / "m.fvecs"), FormatError);
  write_raw(dir / "z.fvecs", std::string("\x00\x00\x00\x00", 4));
  EXPECT_THROW(read_fvecs(dir / "z.fvecs"), FormatError);
  write_raw(dir / "n.fvecs", std::string("\xff\xff\xff\xff", 4));
  EXPECT_THROW(read_fvecs(dir / "n.fvecs"), FormatError);
  EXPECT_THROW(read_fvecs(dir / "missing.fvecs"), IoError);
}

TEST(MetadataTest, RoundTripAndCosineNormalization) {
  TempDir dir("meta");
  DatasetMetadata meta{"glove", 3, 2, Metric::kCosine, 9, false};
  write_metadata(meta, dir / "m.meta");
  EXPECT_EQ(read_metadata(dir / "m.meta"), meta);

  VectorSet s(2, 2, std::vector<float>{3, 4, 0, 2});
  write_fvecs(s, dir / "c.fvecs");
  meta.n = 2;
  write_metadata(meta, metadata_path(dir / "c.fvecs"));
  const VectorSet loaded = load_dataset(dir / "c.fvecs");
  EXPECT_EQ(loaded.metric(), Metric::kCosine);
  EXPECT_FLOAT_EQ(loaded.row(0)[0], 0.6f);
  EXPECT_FLOAT_EQ(loaded.row(0)[1], 0.8f);
  EXPECT_FLOAT_EQ(loaded.row(1)[1], 1.0f);
}

TEST(BruteForceTest, HandCases) {
  VectorSet line(3, 1, std::vector<float>{0, 1, 3});
  VectorSet q(1, 1, std::vector<float>{0.9f});
  GroundTruth gt = brute_force_knn(line, q, 2);
  EXPECT_EQ(gt.ids_of(0)[0], 1u);
  EXPECT_EQ(gt.ids_of(0)[1], 0u);

  VectorSet self(1, 1, std::vector<float>{3});
  gt = brute_force_knn(line, self, 1);
  EXPECT_EQ(gt.ids_of(0)[0], 2u);
  EXPECT_EQ(gt.distances_of(0)[0], 0.0f);
  EXPECT_THROW(brute_force_knn(line, q, 4), UsageError);
}

TEST(BruteForceTest, TiesBreakByLowerId) {
  VectorSet dup(4, 1, std::vector<float>{2, 1, 1, 1});
  VectorSet q(1, 1, std::vector<float>{1});
  const GroundTruth gt = brute_force_knn(dup, q, 3);
  EXPECT_EQ(gt.ids_of(0)[0], 1u);
  EXPECT_EQ(gt.ids_of(0)[1], 2u);
  EXPECT_EQ(gt.ids_of(0)[2], 3u);
}

TEST(BruteForceTest, MatchesQuadraticOracleAnyThreadCount) {
  const VectorSet base = random_set(200, 6, 21);
  const VectorSet queries = random_set(20, 6, 22);
  const GroundTruth one = brute_force_knn(base, queries, 10, 1);
  const GroundTruth many = brute_force_knn(base, queries, 10, 4);
  EXPECT_EQ(one.ids, many.ids);
  EXPECT_EQ(one.distances, many.distances);
  for (size_t q = 0; q < queries.size(); ++q) {
    const auto want = graphann::testing::naive_knn(base, queries.row_ptr(q), 10);
    const auto ids = one.ids_of(q);
    EXPECT_TRUE(graphann::testing::same_ranking({ids.begin(), ids.end()}, want));
    for (size_t j = 0; j < 10; ++j) {
      EXPECT_NEAR(one.distances_of(q)[j], want[j].first, 1e-5 * want[j].first);
    }
  }
}

TEST(GroundTruthTest, SaveLoadRoundTrip) {
  TempDir dir("gt");
  const GroundTruth gt = brute_force_knn(random_set(50, 3, 1), random_set(5, 3, 2), 4);
  save_ground_truth(gt, dir / "gt");
  const GroundTruth back = load_ground_truth(dir / "gt");
  EXPECT_EQ(back.queries, 5u);
  EXPECT_EQ(back.k, 4u);
  EXPECT_EQ(back.ids, gt.ids);
  EXPECT_EQ(back.distances, gt.distances);
}

TEST(LidTest, LocalEstimateClosedForm) {
  // T = (1, 2, 4): mean of ln(4/1), ln(4/2) is 1.5 ln 2.
  const std::vector<float> t{1, 2, 4};
  EXPECT_NEAR(local_lid(t), 1.0 / (1.5 * std::log(2.0)), 1e-9);
}

TEST(LidTest, SegmentIsOneDimensional) {
  Rng rng(4);
  VectorSet seg(20000, 10);
  for (size_t i = 0; i < seg.size(); ++i) {
    const float t = uniform_float(rng);
    for (size_t j = 0; j < 10; ++j) seg.mutable_row(i)[j] = t * static_cast<float>(j + 1);
  }
  LidParams p;
  p.k_neighbors = 100;
  p.sample_size = 2000;
  const LidEstimate est = estimate_lid(seg, p);
  EXPECT_NEAR(est.value, 1.0, 0.2);
  EXPECT_EQ(est.k_neighbors, 100u);
  EXPECT_EQ(est.sample_size, 2000u);
}

TEST(LidTest, Errors) {
  const VectorSet s = random_set(50, 3, 1);
  LidParams p;
  p.k_neighbors = 4;
  EXPECT_THROW(estimate_lid(s, p), UsageError);
  p.k_neighbors = 50;
  EXPECT_THROW(estimate_lid(s, p), UsageError);
  VectorSet same(20, 2);
  p.k_neighbors = 5;
  EXPECT_THROW(estimate_lid(same, p), DomainError);
}

TEST(LidTest, IncreasesWithDimension) {
  double last = 0;
  for (size_t d : {2, 4, 8}) {
    LidParams p;
    p.k_neighbors = 50;
    p.sample_size = 1000;
    p.seed = 5;
    const double est = estimate_lid(generate_uniform(20000, d, d), p).value;
    EXPECT_GT(est, last);
    last = est;
  }
}
