// Copyright 2026 The roadstress Authors
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

#include <algorithm>

#include "roadstress/bench/bench.hpp"
#include "test_util.hpp"

using namespace roadstress;

namespace {
BenchResult result(Kind k, int level, double mean) {
  BenchResult r;
  r.kind = k;
  r.level = level;
  r.iterations = 250;
  r.mean_ms = r.max_ms = mean;
  return r;
}
}  // namespace

TEST(Gate, BudgetIsThirtyFramesPerSecond) { EXPECT_NEAR(Budget{}.budget_ms(), 33.333, 1e-3); }

TEST(Gate, AllBelowBudget) {
  const auto g = gate({result(Kind::greyscale, 1, 1.0), result(Kind::fog, 1, 20.0), result(Kind::fog, 2, 33.0)});
  EXPECT_TRUE(g.excluded.empty());
  EXPECT_EQ(g.included.size(), 2u);
}

TEST(Gate, SlowKindExcluded) {
  const auto g = gate({result(Kind::zoom_blur, 5, 95.6), result(Kind::greyscale, 5, 0.5)});
  EXPECT_TRUE(g.is_excluded(Kind::zoom_blur));
  EXPECT_FALSE(g.is_excluded(Kind::greyscale));
}

TEST(Gate, WorstLevelRule) {
  const auto g = gate({result(Kind::elastic, 1, 30.0), result(Kind::elastic, 2, 40.0)});
  EXPECT_TRUE(g.is_excluded(Kind::elastic));
  EXPECT_DOUBLE_EQ(g.worst_mean_ms.at(Kind::elastic), 40.0);
}

TEST(Gate, PartitionIsOrderIndependent) {
  std::vector<BenchResult> rs;
  roadstress::Rng rng(5);
  for (std::size_t i = 0; i < kKindCount; ++i)
    for (int l = 1; l <= 5; ++l) rs.push_back(result(kKindTable[i].kind, l, rng.uniform(0.0, 60.0)));
  const auto a = gate(rs);
  std::reverse(rs.begin(), rs.end());
  const auto b = gate(rs);
  EXPECT_EQ(a.included, b.included);
  EXPECT_EQ(a.excluded, b.excluded);
  EXPECT_EQ(a.included.size() + a.excluded.size(), kKindCount);
  EXPECT_ERRC(gate({}), Errc::invalid_argument);
}

TEST(Measure, PositiveAndStable) {
  const BenchResult a = measure(Kind::greyscale, IntensityLevel(1), 320, 240, 250);
  EXPECT_GT(a.mean_ms, 0.0);
  EXPECT_GE(a.std_ms, 0.0);
  EXPECT_GE(a.max_ms, a.mean_ms);
  EXPECT_EQ(a.iterations, 250);
  const BenchResult b = measure("greyscale", IntensityLevel(1), 320, 240, 250);
  EXPECT_LT(std::max(a.mean_ms, b.mean_ms), 3.0 * std::min(a.mean_ms, b.mean_ms));
  EXPECT_ERRC(measure("nope", IntensityLevel(1)), Errc::not_found);
  EXPECT_ERRC(measure(Kind::greyscale, IntensityLevel(1), 320, 240, 0), Errc::invalid_argument);
}

TEST(Measure, CsvLayout) {
  const std::string csv = bench_csv({result(Kind::fog, 3, 1.5)});
  EXPECT_EQ(csv, "kind,level,iterations,mean_ms,std_ms,max_ms\nfog,3,250,1.5000,0.0000,1.5000\n");
  EXPECT_NE(bench_svg({result(Kind::fog, 3, 1.5)}).find("<svg"), std::string::npos);
}
