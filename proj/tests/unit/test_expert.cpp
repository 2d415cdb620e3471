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

#include "roadstress/expert/expert.hpp"
#include "roadstress/road/roadgen.hpp"
#include "test_util.hpp"

using namespace roadstress;

namespace {

Road straight(double length = 400.0) {
  std::vector<Vec2> pts;
  for (double x = 0.0; x <= length + 1e-9; x += 2.0) pts.push_back({x, 0.0});
  return Road(pts, 4.0);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Pursuit, AlignedOnCenterlineIsStraight) {
  const Road road = straight();
  VehicleState s{20.0, 0.0, 0.0, 5.0};
  EXPECT_NEAR(pursuit_steer(s, road, {}), 0.0, 1e-12);
}

TEST(Pursuit, GoalToTheLeftSteersLeft) {
  VehicleState s{0.0, 0.0, 0.0, 5.0};
  EXPECT_NEAR(bearing_to(s, {std::cos(0.5236), std::sin(0.5236)}), 0.5236, 1e-9);
  const Road road({{0, 0}, {6.0 * std::cos(0.5236), 6.0 * std::sin(0.5236)}, {20, 10}}, 4.0);
  EXPECT_GT(pursuit_steer(s, road, {}), 0.0);
}

TEST(Pursuit, CircleSteadyState) {
  const VehicleParams vp;
  for (double radius : {20.0, 40.0, 80.0}) {
    std::vector<Vec2> pts;
    for (int i = 0; i <= 400; ++i) {
      const double a = i * 0.005;
      pts.push_back({radius * std::sin(a), radius * (1.0 - std::cos(a))});  // left-turning arc
    }
    const Road road(pts, 4.0);
    const Vec2 p = road.point_at(10.0);
    const VehicleState s{p.x, p.y, 10.0 / radius, 5.0};
    const double expected = std::clamp(std::atan(vp.wheelbase_m / radius) / vp.max_steer_rad, -1.0, 1.0);
    EXPECT_NEAR(pursuit_steer(s, road, {}, vp), expected, 0.05 * expected) << radius;
  }
}

TEST(Pid, EquilibriumAndSlowdown) {
  const ExpertConfig cfg;
  EXPECT_EQ(pid_throttle(cfg.target_speed_mps, 0.0, 4.0, cfg, {}).throttle, 0.0);
  EXPECT_EQ(effective_target(2.0, 4.0, cfg), 0.0);
  EXPECT_LE(pid_throttle(3.0, 2.0, 4.0, cfg, {}).throttle, 0.0);
  EXPECT_GT(pid_throttle(0.0, 0.0, 4.0, cfg, {}).throttle, 0.0);
  ExpertConfig bad;
  bad.lookahead_m = 0.0;
  EXPECT_ERRC(ExpertAgent{bad}, Errc::invalid_argument);
}

TEST(Pid, SpeedSettlesWithinFifteenSeconds) {
  const Road road = straight();
  ExpertAgent expert;
  EpisodeConfig cfg;
  cfg.timeout_s = 30.0;
  const EpisodeLog log = run_episode(road, expert, cfg);
  const double target = ExpertConfig{}.target_speed_mps;
  double last_outside = 0.0;
  for (const FrameRecord& f : log.frames)
    if (std::abs(f.speed - target) > 0.05 * target) last_outside = f.t;
  EXPECT_LT(last_outside, 15.0);
  EXPECT_GT(log.frames.back().t, 25.0);
}

TEST(Expert, StraightRoadJitterBelowFivePercent) {
  const Road road = straight(150.0);
  ExpertAgent expert;
  const EpisodeLog log = run_episode(road, expert, {});
  const EpisodeOutcome o = classify_outcome(log, road, 200.0);
  EXPECT_EQ(o.status, EpisodeStatus::success);
  EXPECT_LT(o.jitter_pct, 5.0);
}

TEST(Shadow, OneSamplePerAnsweredFrame) {
  const Road road = preset_road(1);
  ExpertAgent expert;
  const EpisodeLog log = run_episode(road, expert, {});
  const auto samples = shadow_collect({{road, 7001}}, {}, {});
  ASSERT_EQ(samples.size(), log.frames.size() - 1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(samples[i].steering, *log.frames[i].steering);
    EXPECT_EQ(samples[i].throttle, *log.frames[i].throttle);
    EXPECT_EQ(samples[i].road_seed, 7001u);
    EXPECT_EQ(samples[i].level, 0);
  }
}

TEST(Shadow, StraightSegmentsSteerNearZero) {
  const auto samples = shadow_collect({{straight(120.0), 1}}, {}, {});
  ASSERT_FALSE(samples.empty());
  for (const auto& s : samples) EXPECT_LT(std::abs(s.steering), 0.05);
}

TEST(Shadow, DatasetIsByteReproducible) {
  testutil::TempDir a, b;
  const std::vector<ShadowRoad> roads{{preset_road(2), 7002}};
  const std::vector<std::pair<Kind, int>> grid{{Kind::gaussian_noise, 3}};
  ShadowConfig cfg;
  cfg.seed = 5;
  cfg.timeout_s = 3.0;
  const auto s1 = shadow_collect(roads, grid, cfg);
  write_shadow_dataset(s1, a.path());
  write_shadow_dataset(shadow_collect(roads, grid, cfg), b.path());
  EXPECT_EQ(slurp(a / "labels.csv"), slurp(b / "labels.csv"));
  std::size_t pngs = 0;
  for (const auto& e : std::filesystem::directory_iterator(a / "samples")) {
    ++pngs;
    EXPECT_EQ(slurp(e.path()), slurp(b.path() / "samples" / e.path().filename()));
  }
  EXPECT_EQ(pngs, s1.size());
  const std::string csv = slurp(a / "labels.csv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), s1.size() + 1);
  EXPECT_EQ(csv.rfind("frame,steering,throttle,road_seed,perturbation,level\n", 0), 0u);
}
