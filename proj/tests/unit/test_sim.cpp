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
#include "roadstress/metrics/driving.hpp"
#include "roadstress/road/roadgen.hpp"
#include "roadstress/sim/centroid.hpp"
#include "test_util.hpp"

using namespace roadstress;

namespace {

Road straight(double length = 200.0) {
  std::vector<Vec2> pts;
  for (double x = 0.0; x <= length + 1e-9; x += 2.0) pts.push_back({x, 0.0});
  return Road(pts, 4.0);
}

double circumradius(Vec2 a, Vec2 b, Vec2 c) {
  const double ab = norm(b - a), bc = norm(c - b), ca = norm(a - c);
  return ab * bc * ca / (2.0 * std::abs(cross(b - a, c - a)));
}

double mean_luma(const Image& img) {
  double s = 0.0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    s += 0.299 * img.data()[3 * i] + 0.587 * img.data()[3 * i + 1] + 0.114 * img.data()[3 * i + 2];
  return s / static_cast<double>(img.pixel_count());
}

bool near_color(const std::uint8_t* px, Rgb c) {
  return std::abs(px[0] - quantize_sample(c.r)) <= 2 && std::abs(px[1] - quantize_sample(c.g)) <= 2 &&
         std::abs(px[2] - quantize_sample(c.b)) <= 2;
}

}  // namespace

TEST(Vehicle, RestIsEquilibrium) {
  const VehicleState s{3.0, -2.0, 0.4, 0.0};
  const VehicleState n = step(s, {0.0, 0.0}, 0.1);
  EXPECT_EQ(n.x, s.x);
  EXPECT_EQ(n.y, s.y);
  EXPECT_EQ(n.heading, s.heading);
  EXPECT_EQ(n.speed, 0.0);
  EXPECT_ERRC(step(s, {}, 0.0), Errc::invalid_argument);
}

TEST(Vehicle, StraightLineDisplacement) {
  const VehicleState s{1.0, 2.0, 0.7, 5.0};
  const double dt = 0.05;
  const VehicleState n = step(s, {0.0, 0.0}, dt);
  EXPECT_NEAR(n.x - s.x, 5.0 * dt * std::cos(0.7), 1e-12);
  EXPECT_NEAR(n.y - s.y, 5.0 * dt * std::sin(0.7), 1e-12);
}

TEST(Vehicle, TurningRadiusMatchesBicycleModel) {
  VehicleParams vp;
  vp.drag_per_s = 0.0;
  for (double steer : {0.2, 0.5, -0.8}) {
    VehicleState s{0.0, 0.0, 0.0, 4.0};
    std::vector<Vec2> path;
    for (int k = 0; k < 6000; ++k) {
      s = step(s, {steer, 0.0}, 0.001, vp);
      path.push_back(s.position());
    }
    const double expected = vp.wheelbase_m / std::tan(std::abs(steer) * vp.max_steer_rad);
    const double r = circumradius(path[0], path[path.size() / 3], path[2 * path.size() / 3]);
    EXPECT_NEAR(r, expected, 0.02 * expected);
  }
}

TEST(Vehicle, ActionsAreClamped) {
  const VehicleState s{0.0, 0.0, 0.0, 5.0};
  const VehicleState a = step(s, {3.0, 9.0}, 0.1), b = step(s, {1.0, 1.0}, 0.1);
  EXPECT_EQ(a.heading, b.heading);
  EXPECT_EQ(a.speed, b.speed);
}

TEST(Render, CenteredStraightFrameIsSymmetric) {
  const Road road = straight();
  const Image img = render(start_state(road), road, find_weather("nominal"));
  EXPECT_EQ(img.width(), 320);
  EXPECT_EQ(img.height(), 240);
  for (int y = 0; y < 240; ++y)
    for (int x = 0; x < 160; ++x)
      for (int c = 0; c < 3; ++c) ASSERT_LE(std::abs(img.at(x, y, c) - img.at(319 - x, y, c)), 1) << x << "," << y;
}

TEST(Render, DarkWeatherIsDarker) {
  const Road road = preset_road(2);
  const VehicleState s = start_state(road);
  EXPECT_LT(mean_luma(render(s, road, find_weather("dark_overcast"))), mean_luma(render(s, road, find_weather("nominal"))));
  EXPECT_ERRC(find_weather("hail"), Errc::not_found);
  EXPECT_EQ(render(s, road, find_weather("rain"), 4), render(s, road, find_weather("rain"), 4));
}

TEST(Render, RoadPixelsMatchRayCast) {
  const Camera cam;
  for (int preset : {1, 5, 9}) {
    const Road road = preset_road(preset);
    VehicleState s = start_state(road);
    const Vec2 p = road.point_at(0.3 * road.length_m());
    const Projection pr = road.project(p);
    s.x = p.x;
    s.y = p.y;
    s.heading = road.segment_heading(pr.segment);
    const Image img = render(s, road, find_weather("nominal"));
    long agree = 0, total = 0;
    for (int v = 0; v < cam.height; ++v)
      for (int u = 0; u < cam.width; ++u) {
        const auto hit = pixel_ground_ray(cam, u, v);
        if (!hit || (*hit)[0] > cam.far_m) continue;
        const Vec2 fwd = heading_vector(s.heading), right{std::sin(s.heading), -std::cos(s.heading)};
        const Vec2 w = s.position() + fwd * (*hit)[0] + right * (*hit)[1];
        const bool expected = std::abs(road.project(w).cte) <= road.lane_width() / 2.0;
        const std::uint8_t* px = img.data().data() + 3 * (static_cast<std::size_t>(v) * cam.width + u);
        const bool seen = near_color(px, kRoadColor) || near_color(px, kDashColor);
        agree += expected == seen;
        ++total;
      }
    ASSERT_GT(total, 10000);
    EXPECT_GE(static_cast<double>(agree) / total, 0.98) << "preset " << preset;
  }
}

TEST(Episode, ExpertSucceedsOnEveryPreset) {
  for (int i = 1; i <= 10; ++i) {
    const Road road = preset_road(i);
    ExpertAgent expert;
    const EpisodeLog log = run_episode(road, expert, {});
    const EpisodeOutcome o = classify_outcome(log, road, 200.0);
    EXPECT_EQ(o.status, EpisodeStatus::success) << "preset " << i;
    for (const FrameRecord& f : log.frames) ASSERT_NEAR(f.cte, road.project({f.x, f.y}).cte, 1e-12);
  }
}

TEST(Episode, FullLeftLeavesTheRoad) {
  const Road road = straight();
  ConstantAgent agent({1.0, 0.5});
  const EpisodeLog log = run_episode(road, agent, {});
  EXPECT_EQ(classify_outcome(log, road, 200.0).status, EpisodeStatus::out_of_road);
  EXPECT_GT(log.frames.back().cte, 0.0);
  EXPECT_FALSE(log.frames.back().steering);
}

TEST(Episode, StationaryTimesOut) {
  const Road road = straight();
  ConstantAgent agent({0.0, 0.0});
  const EpisodeLog log = run_episode(road, agent, {});
  const EpisodeOutcome o = classify_outcome(log, road, 200.0);
  EXPECT_EQ(o.status, EpisodeStatus::out_of_time);
  EXPECT_NEAR(o.elapsed_s, 200.0, 1e-6);
  EXPECT_EQ(log.frames.size(), 6001u);
}

TEST(Episode, AgentFailureAborts) {
  struct Failing : DrivingAgent {
    std::string name() const override { return "failing"; }
    bool needs_image() const override { return false; }
    Action act(const Observation& o) override {
      if (o.frame_index == 5) fail(Errc::disconnect, "gone");
      return {0.0, 0.5};
    }
  } agent;
  const Road road = straight();
  const EpisodeLog log = run_episode(road, agent, {});
  EXPECT_EQ(log.frames.size(), 6u);
  EXPECT_NE(log.abort_reason.find("disconnect"), std::string::npos);
  EXPECT_EQ(classify_outcome(log, road, 200.0).status, EpisodeStatus::agent_error);
}

TEST(Episode, LogRoundTripsThroughJsonl) {
  const Road road = preset_road(1);
  ExpertAgent expert;
  EpisodeConfig cfg;
  cfg.perturbation = PerturbationSetting{Kind::fog, 2, 9};
  const EpisodeLog log = run_episode(road, expert, cfg, "ep", "preset1");
  const EpisodeLog back = episode_log_from_jsonl(episode_log_to_jsonl(log));
  EXPECT_EQ(back.frames, log.frames);
  EXPECT_EQ(back.perturbation, log.perturbation);
  EXPECT_EQ(back.episode_id, "ep");
}

TEST(Centroid, SymmetricFrameSteersStraight) {
  const Road road = straight();
  const Action a = centroid_action(render(start_state(road), road, find_weather("nominal")));
  EXPECT_NEAR(a.steering, 0.0, 0.01);
  EXPECT_GT(a.throttle, 0.0);
}

TEST(Centroid, RoadOnTheRightSteersRight) {
  const Road road = straight();
  VehicleState s = start_state(road);
  s.y = 1.0;  // left of the centerline, so the road appears to the right
  const Action a = centroid_action(render(s, road, find_weather("nominal")));
  EXPECT_LT(a.steering, 0.0);
}

TEST(Centroid, InvertedColorsStopTheCar) {
  const Road road = straight();
  const Image frame = render(start_state(road), road, find_weather("nominal"));
  const Image inverted = apply(Kind::false_color, frame, IntensityLevel(5), Seed{1});
  EXPECT_FALSE(road_centroid_offset(inverted));
  const Action a = centroid_action(inverted);
  EXPECT_EQ(a.steering, 0.0);
  EXPECT_EQ(a.throttle, 0.0);
}
