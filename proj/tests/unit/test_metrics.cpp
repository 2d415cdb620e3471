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

#include "roadstress/metrics/driving.hpp"
#include "roadstress/metrics/segmentation.hpp"
#include "test_util.hpp"

using namespace roadstress;

namespace {

SegMap random_map(Rng& rng, int classes) {
  SegMap m(8, 8);
  for (auto& v : m.classes) v = static_cast<std::uint8_t>(rng.below(classes));
  return m;
}

std::vector<std::optional<double>> brute_iou(const SegMap& p, const SegMap& g, int classes) {
  std::vector<std::optional<double>> out(classes);
  for (int k = 0; k < classes; ++k) {
    int inter = 0, uni = 0;
    for (int y = 0; y < p.height; ++y)
      for (int x = 0; x < p.width; ++x) {
        const bool a = p.at(x, y) == k, b = g.at(x, y) == k;
        inter += a && b;
        uni += a || b;
      }
    if (uni) out[k] = static_cast<double>(inter) / uni;
  }
  return out;
}

Road straight(double length = 100.0, double lane = 4.0) {
  std::vector<Vec2> pts;
  for (double x = 0.0; x <= length + 1e-9; x += 2.0) pts.push_back({x, 0.0});
  return Road(pts, lane);
}

EpisodeLog log_along(const Road& road, const std::vector<std::pair<double, double>>& xy, double dt = 0.1) {
  EpisodeLog log;
  for (std::size_t k = 0; k < xy.size(); ++k) {
    FrameRecord f;
    f.index = k;
    f.t = static_cast<double>(k) * dt;
    f.x = xy[k].first;
    f.y = xy[k].second;
    f.cte = road.project({f.x, f.y}).cte;
    log.frames.push_back(f);
  }
  return log;
}

}  // namespace

TEST(IoU, IdentityAndDisjoint) {
  Rng rng(1);
  const SegMap m = random_map(rng, 4);
  for (const auto& v : iou_per_class(m, m, 4))
    if (v) EXPECT_EQ(*v, 1.0);
  SegMap a(8, 8, std::uint8_t{0}), b(8, 8, std::uint8_t{1});
  for (int i = 0; i < 32; ++i) {
    a.classes[i] = 2;
    b.classes[i] = 3;
  }
  for (const auto& v : iou_per_class(a, b, 4)) {
    ASSERT_TRUE(v);
    EXPECT_EQ(*v, 0.0);
  }
}

TEST(IoU, MatchesBruteForceCounting) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const SegMap p = random_map(rng, 4), g = random_map(rng, 4);
    const auto expected = brute_iou(p, g, 4);
    EXPECT_EQ(iou_per_class(p, g, 4), expected);
    double s = 0.0;
    int n = 0;
    for (const auto& v : expected)
      if (v) s += *v, ++n;
    EXPECT_EQ(mean_iou(p, g, 4), s / n);
  }
}

TEST(IoU, MeanExamplesAndErrors) {
  EXPECT_EQ(mean_iou(ClassIoU{1.0, 1.0, std::nullopt}), 1.0);
  EXPECT_DOUBLE_EQ(mean_iou(ClassIoU{0.2, 0.8}), 0.5);
  EXPECT_ERRC(mean_iou(ClassIoU{std::nullopt, std::nullopt}), Errc::undefined_metric);
  EXPECT_ERRC(mean_iou(SegMap(8, 8), SegMap(9, 8), 2), Errc::invalid_argument);
  EXPECT_ERRC(mean_iou(SegMap(8, 8, std::uint8_t{5}), SegMap(8, 8), 2), Errc::invalid_argument);
}

TEST(Jitter, ClosedForms) {
  const std::vector<double> flat(50, 0.7);
  EXPECT_EQ(jitter(flat, 4.0), 0.0);
  std::vector<double> alt;
  for (int i = 0; i < 51; ++i) alt.push_back(i % 2 ? -1.0 : 1.0);
  EXPECT_EQ(jitter(alt, 4.0), 50.0);
  EXPECT_ERRC(jitter(std::vector<double>{1.0}, 4.0), Errc::invalid_argument);
}

TEST(Outcome, SuccessWithinLane) {
  const Road road = straight();
  std::vector<std::pair<double, double>> xy;
  for (int k = 0; k <= 500; ++k) xy.push_back({k * 0.2, 0.8 * std::sin(k * 0.05)});  // |cte| <= 0.2 w
  const EpisodeOutcome o = classify_outcome(log_along(road, xy), road, 200.0);
  EXPECT_EQ(o.status, EpisodeStatus::success);
  EXPECT_EQ(o.completion, 1.0);
  EXPECT_LE(o.elapsed_s, 50.0);
}

TEST(Outcome, OutOfRoadAtThresholdFrame) {
  const Road road = straight();
  std::vector<std::pair<double, double>> xy;
  for (int k = 0; k < 30; ++k) xy.push_back({k * 1.0, k == 20 ? 0.6 * 4.0 : 0.0});
  const EpisodeOutcome o = classify_outcome(log_along(road, xy), road, 200.0);
  EXPECT_EQ(o.status, EpisodeStatus::out_of_road);
  EXPECT_EQ(o.end_frame, 20u);
  EXPECT_NEAR(o.completion, 0.19, 1e-9);
}

TEST(Outcome, StationaryTimesOut) {
  const Road road = straight();
  std::vector<std::pair<double, double>> xy(2001, {0.0, 0.0});
  const EpisodeOutcome o = classify_outcome(log_along(road, xy), road, 200.0);
  EXPECT_EQ(o.status, EpisodeStatus::out_of_time);
  EXPECT_NEAR(o.elapsed_s, 200.0, 1e-9);
  EXPECT_NEAR(o.completion, 0.0, 1e-12);
  EXPECT_ERRC(classify_outcome(EpisodeLog{}, road, 200.0), Errc::invalid_argument);
}

TEST(Rates, Examples) {
  std::vector<EpisodeOutcome> ten(10);
  for (auto& o : ten) o.completion = 1.0;
  EXPECT_EQ(success_rate(ten), 100.0);
  for (int i = 5; i < 10; ++i) {
    ten[i].status = EpisodeStatus::out_of_road;
    ten[i].completion = 0.5;
  }
  EXPECT_DOUBLE_EQ(success_rate(ten), 50.0);
  EXPECT_DOUBLE_EQ(completion_rate(ten), 75.0);
  EXPECT_ERRC(success_rate(std::vector<EpisodeOutcome>{}), Errc::invalid_argument);
}

TEST(Rates, MatchRecount) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EpisodeOutcome> os(1 + rng.below(30));
    int succ = 0;
    double comp = 0.0;
    for (auto& o : os) {
      o.status = static_cast<EpisodeStatus>(rng.below(4));
      o.completion = o.status == EpisodeStatus::success ? 1.0 : rng.uniform();
      succ += o.status == EpisodeStatus::success;
      comp += o.completion;
    }
    EXPECT_DOUBLE_EQ(success_rate(os), 100.0 * succ / os.size());
    EXPECT_NEAR(completion_rate(os), 100.0 * comp / os.size(), 1e-9);
  }
}
