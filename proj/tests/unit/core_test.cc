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
#include <numeric>
#include <sstream>

#include "../common/oracles.h"
#include "graphann/audit.h"
#include "graphann/binary_io.h"
#include "graphann/distance.h"
#include "graphann/errors.h"
#include "graphann/parallel.h"
#include "graphann/random.h"
#include "graphann/topk.h"
#include "graphann/vector_set.h"

using namespace graphann;
using graphann::testing::naive_distance;
using graphann::testing::random_set;

namespace {

std::vector<float> v(std::initializer_list<float> xs) { return xs; }

}  // namespace

TEST(DistanceTest, HandCases) {
  auto a = v({0, 0}), b = v({3, 4});
  EXPECT_FLOAT_EQ(distance(a, b, Metric::kL2), 5.0f);
  EXPECT_FLOAT_EQ(distance(b, b, Metric::kL2), 0.0f);
  auto x = v({1, 0}), y = v({0, 1});
  EXPECT_FLOAT_EQ(distance(x, y, Metric::kCosine), 1.0f);
  auto p = v({2, 0}), q = v({5, 0});
  EXPECT_FLOAT_EQ(distance(p, q, Metric::kCosine), 0.0f);
}

TEST(DistanceTest, Errors) {
  auto a = v({1, 2}), b = v({1, 2, 3}), z = v({0, 0});
  EXPECT_THROW(distance(a, b, Metric::kL2), UsageError);
  EXPECT_THROW(distance(a, z, Metric::kCosine), DomainError);
  EXPECT_NO_THROW(distance(a, z, Metric::kL2));
}

TEST(DistanceTest, MatchesScalarReference) {
  for (size_t d : {1, 3, 7, 8, 9, 16, 31, 100, 960}) {
    const VectorSet s = random_set(40, d, d);
    for (size_t i = 0; i + 1 < s.size(); ++i) {
      for (Metric m : {Metric::kL2, Metric::kCosine}) {
        const double want = naive_distance(s.row_ptr(i), s.row_ptr(i + 1), d, m);
        const double got = distance(s.row(i), s.row(i + 1), m);
        EXPECT_NEAR(got, want, 1e-6 * std::max(want, 1e-3)) << "d=" << d;
      }
    }
  }
}

TEST(DistanceTest, Symmetry) {
  const VectorSet s = random_set(200, 13, 5);
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    for (Metric m : {Metric::kL2, Metric::kCosine}) {
      const float ab = distance(s.row(i), s.row(i + 1), m);
      const float ba = distance(s.row(i + 1), s.row(i), m);
      EXPECT_LE(std::fabs(ab - ba), 1e-6 * std::max(ab, 1e-6f));
    }
  }
}

TEST(DistanceTest, TriangleInequality) {
  const VectorSet s = random_set(1000, 6, 11);
  Rng rng(3);
  for (int t = 0; t < 100000; ++t) {
    const size_t a = uniform_below(rng, s.size());
    const size_t b = uniform_below(rng, s.size());
    const size_t c = uniform_below(rng, s.size());
    const double ab = row_distance(s, a, b), bc = row_distance(s, b, c);
    const double ac = row_distance(s, a, c);
    ASSERT_LE(ac, (ab + bc) * (1 + 1e-5) + 1e-7);
  }
}

TEST(DistanceTest, CosineScaleInvariance) {
  VectorSet s = random_set(100, 9, 17);
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    std::vector<float> scaled(s.row(i).begin(), s.row(i).end());
    for (float& x : scaled) x *= 3.5f;
    EXPECT_NEAR(distance(scaled, s.row(i + 1), Metric::kCosine),
                distance(s.row(i), s.row(i + 1), Metric::kCosine), 1e-6);
  }
}

TEST(VectorSetTest, ShapeAndFinite) {
  EXPECT_THROW(VectorSet(2, 2, std::vector<float>(3)), UsageError);
  EXPECT_THROW(VectorSet(2, 2, v({1, 2, 3, NAN})), UsageError);
  VectorSet s(1, 2);
  s.mutable_row(0)[1] = INFINITY;
  EXPECT_THROW(s.check_finite(), UsageError);
  const VectorSet r = random_set(10, 4, 1);
  EXPECT_EQ(r.head(3).size(), 3u);
  EXPECT_EQ(r.head(3).row(2)[1], r.row(2)[1]);
  EXPECT_EQ(parse_metric(metric_name(Metric::kCosine)), Metric::kCosine);
  EXPECT_THROW(parse_metric("hamming"), UsageError);
}

TEST(RandomTest, DeriveSeedSeparatesStreams) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(RandomTest, UniformRanges) {
  Rng rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const float f = uniform_float(rng);
    ASSERT_GE(f, 0.0f);
    ASSERT_LT(f, 1.0f);
    const double o = uniform_open01(rng);
    ASSERT_GT(o, 0.0);
    ASSERT_LT(o, 1.0);
    ++counts[uniform_below(rng, 7)];
  }
  // Binomial sd ~ 94; 5 sd band.
  for (int c : counts) EXPECT_NEAR(c, 10000, 470);
}

TEST(BinaryTest, LittleEndianAndTruncation) {
  std::ostringstream out;
  binary::put<uint32_t>(out, 0x01020304u);
  binary::put<float>(out, 1.0f);
  EXPECT_EQ(out.str(), std::string("\x04\x03\x02\x01\x00\x00\x80\x3f", 8));
  std::istringstream in(out.str().substr(0, 6));
  EXPECT_EQ(binary::get<uint32_t>(in, "word"), 0x01020304u);
  try {
    binary::get<float>(in, "value");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 4"), std::string::npos) << e.what();
  }
}

TEST(ParallelTest, CoversEveryIndexOnce) {
  for (unsigned threads : {1u, 3u, 8u}) {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), threads, [&](size_t i) { ++hits[i]; });
    EXPECT_EQ(std::accumulate(hits.begin(), hits.end(), 0), 1001);
    EXPECT_EQ(*std::min_element(hits.begin(), hits.end()), 1);
  }
  EXPECT_THROW(parallel_for(10, 4,
                            [](size_t i) {
                              if (i == 7) throw DomainError("boom");
                            }),
               DomainError);
}

TEST(TopKTest, KeepsSmallestWithIdTies) {
  TopK top(3);
  for (uint32_t id : {5u, 1u, 4u, 2u, 3u}) top.push(id == 4 ? 0.5f : 1.0f, id);
  const auto got = top.take_sorted();
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[0].second, 4u);
  EXPECT_EQ(got[1].second, 1u);
  EXPECT_EQ(got[2].second, 2u);
}

TEST(AuditReportTest, MergeAndCap) {
  AuditReport a, b;
  for (int i = 0; i < 40; ++i) a.fail("x");
  b.fail("y");
  a.merge(b);
  EXPECT_EQ(a.violations(), 41u);
  EXPECT_EQ(a.messages().size(), AuditReport::kMaxMessages);
  EXPECT_TRUE(AuditReport().ok());
}
