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

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "roadstress/img/fft.hpp"
#include "roadstress/perturb/apply.hpp"
#include "test_util.hpp"

using namespace roadstress;
using namespace testutil;

namespace {

std::vector<Kind> all_kinds() {
  std::vector<Kind> out;
  for (const auto& e : kKindTable) out.push_back(e.kind);
  return out;
}

const Image& frame() {
  static const Image img = natural_image();
  return img;
}

double plane_mean(std::span<const float> p) {
  double s = 0.0;
  for (float v : p) s += v;
  return s / static_cast<double>(p.size());
}

}  // namespace

TEST(Kinds, TableIsConsistent) {
  std::set<std::string_view> names, codes;
  for (std::size_t i = 0; i < kKindCount; ++i) {
    EXPECT_EQ(kind_index(kKindTable[i].kind), i);
    names.insert(kKindTable[i].name);
    codes.insert(kKindTable[i].code);
    EXPECT_EQ(parse_kind(kKindTable[i].name), kKindTable[i].kind);
    EXPECT_EQ(parse_kind(kKindTable[i].code), kKindTable[i].kind);
    EXPECT_EQ(static_cast<char>(kKindTable[i].category), kKindTable[i].code[0]);
  }
  EXPECT_EQ(names.size(), kKindCount);
  EXPECT_EQ(codes.size(), kKindCount);
}

TEST(Kinds, UnknownAndExcludedIds) {
  EXPECT_ERRC(parse_kind("not_a_kind"), Errc::not_found);
  for (const auto& ex : kExcludedKinds) {
    EXPECT_ERRC(parse_kind(ex.name), Errc::unsupported_perturbation);
    EXPECT_ERRC(parse_kind(ex.code), Errc::unsupported_perturbation);
  }
  EXPECT_ERRC(apply("rotate", frame(), IntensityLevel(1), Seed{1}), Errc::unsupported_perturbation);
  EXPECT_ERRC(apply("nope", frame(), IntensityLevel(1), Seed{1}), Errc::not_found);
  EXPECT_ERRC(IntensityLevel(0), Errc::invalid_argument);
  EXPECT_ERRC(IntensityLevel(6), Errc::invalid_argument);
}

TEST(Catalog, ShippedFileMatchesBuiltin) {
  std::ifstream f(std::string(ROADSTRESS_SOURCE_DIR) + "/config/catalog.txt");
  ASSERT_TRUE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(Catalog::parse(ss.str()).to_text(), Catalog::builtin().to_text());
}

TEST(Catalog, TextRoundTripAndArity) {
  const Catalog& c = Catalog::builtin();
  EXPECT_EQ(Catalog::parse(c.to_text()).to_text(), c.to_text());
  for (Kind k : all_kinds())
    for (int l = 1; l <= 5; ++l) EXPECT_EQ(c.spec(k).params(IntensityLevel(l)).size(), param_names(k).size());
  EXPECT_TRUE(c.spec(Kind::zoom_blur).over_budget);
}

TEST(Catalog, RejectsBadTables) {
  std::string text = Catalog::builtin().to_text();
  const auto pos = text.find("B-V");
  std::string missing = text;
  missing.erase(pos, missing.find('\n', pos) - pos);
  EXPECT_ERRC(Catalog::parse(missing), Errc::invalid_argument);
  std::string bad = text;
  bad.replace(bad.find("| 0.03 |"), 8, "| x |");
  EXPECT_ERRC(Catalog::parse(bad), Errc::invalid_argument);
  EXPECT_ERRC(apply_with_params(Kind::gaussian_noise, frame(), {0.1, 0.2}, Seed{1}), Errc::invalid_argument);
}

TEST(Catalog, EndpointsAndUniformSteps) {
  const Catalog& c = Catalog::builtin();
  auto p = [&](Kind k, int l) { return c.spec(k).params(IntensityLevel(l)); };
  EXPECT_DOUBLE_EQ(p(Kind::gaussian_noise, 1)[0], 0.03);
  EXPECT_DOUBLE_EQ(p(Kind::gaussian_noise, 5)[0], 0.15);
  EXPECT_DOUBLE_EQ(p(Kind::zoom_blur, 5)[1], 10.0);
  EXPECT_DOUBLE_EQ(p(Kind::posterize, 1)[0], 7.0);
  EXPECT_DOUBLE_EQ(p(Kind::posterize, 5)[0], 3.0);
  EXPECT_DOUBLE_EQ(p(Kind::saturation_decrease, 5)[0], 0.0);
  EXPECT_DOUBLE_EQ(p(Kind::phase_scramble, 5)[0], 1.0);
  // uniform steps on a real-valued kind
  for (int l = 1; l < 4; ++l)
    EXPECT_NEAR(p(Kind::fog, l + 1)[0] - p(Kind::fog, l)[0], p(Kind::fog, l + 2)[0] - p(Kind::fog, l + 1)[0], 1e-12);
  // brightness alternates sign by level parity
  for (int l = 1; l <= 5; ++l) EXPECT_EQ(p(Kind::brightness, l)[0] > 0, l % 2 == 1);
}

TEST(Apply, AllKindsLevelsKeepDimensions) {
  for (Kind k : all_kinds())
    for (int l = 1; l <= 5; ++l) {
      const Image out = apply(k, frame(), IntensityLevel(l), Seed{11});
      EXPECT_EQ(out.width(), 320) << kind_name(k);
      EXPECT_EQ(out.height(), 240) << kind_name(k);
    }
}

TEST(Apply, DeterministicForSameSeed) {
  const Image img = noise_image(64, 48, 3);
  for (Kind k : all_kinds())
    for (int l = 1; l <= 5; ++l)
      EXPECT_EQ(apply(k, img, IntensityLevel(l), Seed{5}), apply(k, img, IntensityLevel(l), Seed{5})) << kind_name(k);
}

TEST(Apply, StochasticKindsDependOnSeedOthersDoNot) {
  const Image img = natural_image(96, 72);
  for (Kind k : all_kinds()) {
    std::set<std::vector<std::uint8_t>> outs;
    for (std::uint64_t s = 1; s <= 6; ++s) {
      const Image o = apply(k, img, IntensityLevel(3), Seed{s});
      outs.emplace(o.data().begin(), o.data().end());
    }
    if (Catalog::builtin().spec(k).stochastic) EXPECT_GT(outs.size(), 1u) << kind_name(k);
    else EXPECT_EQ(outs.size(), 1u) << kind_name(k);
  }
}

TEST(Apply, NeutralParametersAreIdentity) {
  const Image img = frame();
  for (Kind k : all_kinds()) {
    const auto neutral = neutral_params(k);
    if (!neutral) continue;
    EXPECT_EQ(apply_with_params(k, img, *neutral, Seed{3}), img) << kind_name(k);
  }
}

TEST(Apply, StreamsDifferPerKindAndLevel) {
  EXPECT_NE(perturbation_stream(Seed{1}, Kind::gaussian_noise, 1).next(),
            perturbation_stream(Seed{1}, Kind::gaussian_noise, 2).next());
  EXPECT_NE(perturbation_stream(Seed{1}, Kind::gaussian_noise, 1).next(),
            perturbation_stream(Seed{1}, Kind::speckle_noise, 1).next());
}

TEST(Noise, GaussianStatistics) {
  FloatImage img(320, 240, 0.5f);
  Rng rng(21);
  perturb::gaussian_noise(img, 0.08, rng);
  double sum = 0.0, sq = 0.0;
  for (float v : img.samples()) {
    sum += v - 0.5;
    sq += (v - 0.5) * (v - 0.5);
  }
  const double n = static_cast<double>(img.samples().size());
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.003);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 0.08, 0.005);
}

TEST(Noise, ImpulseFractionMatchesReplay) {
  const Image img = constant_image(100, 100, 128);
  const Seed seed{42};
  const Image out = apply_with_params(Kind::impulse_noise, img, {0.1}, seed);
  Rng replay = perturbation_stream(seed, Kind::impulse_noise, 1);
  int hits = 0;
  for (int i = 0; i < 100 * 100; ++i) {
    const bool hit = replay.uniform() < 0.1;
    std::uint8_t expected = 128;
    if (hit) {
      ++hits;
      expected = replay.coin() ? 255 : 0;
    }
    for (int c = 0; c < 3; ++c) ASSERT_EQ(out.data()[3 * i + c], expected);
  }
  EXPECT_NEAR(hits / 10000.0, 0.10, 0.01);
}

TEST(Blur, LowPassUnitIsIdentityAndConstantsSurvive) {
  EXPECT_EQ(apply_with_params(Kind::low_pass, frame(), {1.0}, Seed{1}), frame());
  const Image grey = constant_image(64, 48, 90);
  for (Kind k : {Kind::defocus_blur, Kind::motion_blur, Kind::zoom_blur, Kind::gaussian_blur, Kind::low_pass})
    for (int l = 1; l <= 5; ++l) EXPECT_EQ(apply(k, grey, IntensityLevel(l), Seed{2}), grey) << kind_name(k);
}

TEST(Blur, GaussianImpulseMatchesClosedForm) {
  FloatImage img(41, 41);
  for (int c = 0; c < 3; ++c) img.at(20, 20, c) = 1.0f;
  const FloatImage out = perturb::gaussian_blur_op(img, 2.0);
  double s = 0.0;
  for (int k = -6; k <= 6; ++k) s += std::exp(-k * k / 8.0);
  const double peak = 1.0 / (s * s);
  EXPECT_NEAR(out.at(20, 20, 0), peak, 1.0 / 255.0);
  EXPECT_NEAR(out.at(23, 20, 0), std::exp(-9.0 / 8.0) / (s * s), 1.0 / 255.0);
}

TEST(Weather, NeutralContrastAndFullFog) {
  EXPECT_EQ(apply_with_params(Kind::contrast, frame(), {1.0}, Seed{1}), frame());
  const Image fogged = apply_with_params(Kind::fog, frame(), {1.0}, Seed{1});
  for (std::uint8_t v : fogged.data()) ASSERT_EQ(v, quantize_sample(0.85f));
}

TEST(Weather, FrostedGlassPermutesValues) {
  const Image img = noise_image(64, 64, 17);
  const Image out = apply_with_params(Kind::frosted_glass, img, {2.0, 1.0}, Seed{4});
  EXPECT_NE(out, img);
  for (int c = 0; c < 3; ++c) {
    std::vector<int> a, b;
    for (int i = 0; i < 64 * 64; ++i) {
      a.push_back(img.data()[3 * i + c]);
      b.push_back(out.data()[3 * i + c]);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(Weather, BrightnessDirectionAndSnowBrightens) {
  const Image grey = constant_image(64, 48, 128);
  EXPECT_GT(apply(Kind::brightness, grey, IntensityLevel(1), Seed{1}).data()[0], 128);
  EXPECT_LT(apply(Kind::brightness, grey, IntensityLevel(2), Seed{1}).data()[0], 128);
  const Image snowy = apply(Kind::snow, grey, IntensityLevel(5), Seed{1});
  for (std::size_t i = 0; i < grey.data().size(); ++i) ASSERT_GE(snowy.data()[i], 128);
  EXPECT_NE(snowy, grey);
}

TEST(Distortion, PixelateBlockMeans) {
  FloatImage img(8, 8);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) img.at(x, y, c) = static_cast<float>(x + 8 * y) / 64.0f;
  FloatImage out = img;
  perturb::pixelate(out, 4);
  for (int c = 0; c < 3; ++c)
    for (int by = 0; by < 8; by += 4)
      for (int bx = 0; bx < 8; bx += 4) {
        double sum = 0.0;
        for (int y = by; y < by + 4; ++y)
          for (int x = bx; x < bx + 4; ++x) sum += img.at(x, y, c);
        const float mean = static_cast<float>(sum / 16.0);
        for (int y = by; y < by + 4; ++y)
          for (int x = bx; x < bx + 4; ++x) EXPECT_EQ(out.at(x, y, c), mean);
      }
  EXPECT_EQ(apply_with_params(Kind::pixelate, frame(), {1.0}, Seed{1}), frame());
  EXPECT_EQ(apply_with_params(Kind::sharpen, frame(), {0.0}, Seed{1}), frame());
}

TEST(Affine, TranslateCopiesOverlap) {
  const Image img = noise_image(80, 60, 9);
  for (int l = 1; l <= 5; ++l) {
    const Image out = apply(Kind::translate, img, IntensityLevel(l), Seed{static_cast<std::uint64_t>(l)});
    const double frac = Catalog::builtin().spec(Kind::translate).params(IntensityLevel(l))[0];
    const int sx = static_cast<int>(std::lround(frac * 80)), sy = static_cast<int>(std::lround(frac * 60));
    bool matched = false;
    for (auto [dx, dy] : {std::pair{sx, 0}, std::pair{-sx, 0}, std::pair{0, sy}, std::pair{0, -sy}}) {
      bool ok = true;
      for (int y = 0; y < 60 && ok; ++y)
        for (int x = 0; x < 80 && ok; ++x)
          for (int c = 0; c < 3; ++c) {
            const int px = x - dx, py = y - dy;
            const int expected = (px >= 0 && px < 80 && py >= 0 && py < 60) ? img.at(px, py, c) : 0;
            if (out.at(x, y, c) != expected) ok = false;
          }
      matched = matched || ok;
    }
    EXPECT_TRUE(matched) << "level " << l;
  }
  EXPECT_EQ(apply_with_params(Kind::translate, img, {0.0}, Seed{1}), img);
}

TEST(Affine, ScaleGrowsDiscRadius) {
  const int w = 320, h = 240;
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if ((x - 159.5) * (x - 159.5) + (y - 119.5) * (y - 119.5) <= 40.0 * 40.0) img.set(x, y, {255, 255, 255});
  auto radius = [](const Image& im) {
    int n = 0;
    for (std::size_t i = 0; i < im.pixel_count(); ++i) n += im.data()[3 * i] >= 128;
    return std::sqrt(n / std::numbers::pi);
  };
  const Image out = apply_with_params(Kind::scale, img, {1.25}, Seed{1});
  EXPECT_NEAR(radius(out), 1.25 * radius(img), 1.0);
}

TEST(Pattern, CannyOnConstantIsIdentity) {
  const Image grey = constant_image(64, 48, 77);
  for (int l = 1; l <= 5; ++l) EXPECT_EQ(apply(Kind::canny_edges, grey, IntensityLevel(l), Seed{1}), grey);
}

TEST(Pattern, CannyPaintsEdgesWhite) {
  Image img = constant_image(64, 48, 40);
  for (int y = 0; y < 48; ++y)
    for (int x = 32; x < 64; ++x) img.set(x, y, {200, 200, 200});
  const Image out = apply(Kind::canny_edges, img, IntensityLevel(3), Seed{1});
  int white = 0;
  for (int y = 2; y < 46; ++y) white += out.at(31, y, 0) == 255 || out.at(32, y, 0) == 255;
  EXPECT_GE(white, 40);
}

TEST(Pattern, SplatterAreaWithinLevelRange) {
  const Image white = constant_image(320, 240, 255);
  for (int l = 1; l <= 5; ++l) {
    const Seed seed{static_cast<std::uint64_t>(100 + l)};
    const auto& p = Catalog::builtin().spec(Kind::splatter).params(IntensityLevel(l));
    const Image out = apply(Kind::splatter, white, IntensityLevel(l), seed);
    Rng replay = perturbation_stream(seed, Kind::splatter, l);
    const auto blobs = perturb::splatter_blobs(320, 240, static_cast<int>(p[0]), p[1], p[2], replay);
    int black = 0, oracle = 0;
    for (int y = 0; y < 240; ++y)
      for (int x = 0; x < 320; ++x) {
        black += out.at(x, y, 0) == 0;
        bool in = false;
        for (const auto& b : blobs) in = in || (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy) <= b.radius * b.radius;
        oracle += in;
      }
    EXPECT_EQ(black, oracle);
    const double side = 240.0, area = 320.0 * 240.0;
    const double upper = p[0] * std::numbers::pi * std::pow(p[2] * side + 1.0, 2) / area;
    EXPECT_LE(black / area, upper);
    EXPECT_GT(black, 0);
  }
}

TEST(Pattern, CutoutAndLinesOnlyDarken) {
  const Image white = constant_image(160, 120, 255);
  for (Kind k : {Kind::cutout, Kind::dotted_lines, Kind::zigzag, Kind::splatter}) {
    const Image out = apply(k, white, IntensityLevel(5), Seed{8});
    int black = 0;
    for (std::uint8_t v : out.data()) {
      ASSERT_TRUE(v == 0 || v == 255) << kind_name(k);
      black += v == 0;
    }
    EXPECT_GT(black, 0) << kind_name(k);
  }
}

TEST(Color, FalseColorModes) {
  Image px = constant_image(8, 8, 0);
  for (int i = 0; i < 64; ++i) {
    px.data()[3 * i] = 200;
    px.data()[3 * i + 1] = 100;
    px.data()[3 * i + 2] = 20;
  }
  auto first = [&](int level) {
    const Image o = apply(Kind::false_color, px, IntensityLevel(level), Seed{1});
    return std::array<int, 3>{o.data()[0], o.data()[1], o.data()[2]};
  };
  const std::set<std::array<int, 3>> distinct{first(1), first(2), first(3), first(4), first(5)};
  EXPECT_EQ(distinct.size(), 5u);
  EXPECT_EQ(first(5), (std::array<int, 3>{55, 155, 235}));  // invert all
  EXPECT_ERRC(apply_with_params(Kind::false_color, px, {6.0}, Seed{1}), Errc::invalid_argument);
}

TEST(Color, GreyscaleFullWeight) {
  const Image out = apply(Kind::greyscale, frame(), IntensityLevel(5), Seed{1});
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    ASSERT_EQ(out.data()[3 * i], out.data()[3 * i + 1]);
    ASSERT_EQ(out.data()[3 * i], out.data()[3 * i + 2]);
  }
}

TEST(Color, PosterizeBound) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Image out = apply(Kind::posterize, noise_image(128, 96, s), IntensityLevel(5), Seed{s});
    for (int c = 0; c < 3; ++c) {
      std::set<int> vals;
      for (std::size_t i = 0; i < out.pixel_count(); ++i) vals.insert(out.data()[3 * i + c]);
      EXPECT_LE(vals.size(), 8u);
    }
  }
}

TEST(Color, SaturationDirections) {
  const Image img = natural_image(64, 48);
  auto mean_sat = [](const Image& im) { return plane_mean(rgb_to_hsv(to_float(im)).plane(1)); };
  EXPECT_GT(mean_sat(apply(Kind::saturation_increase, img, IntensityLevel(3), Seed{1})), mean_sat(img));
  EXPECT_LT(mean_sat(apply(Kind::saturation_decrease, img, IntensityLevel(3), Seed{1})), mean_sat(img));
  const Image flat = apply(Kind::saturation_decrease, img, IntensityLevel(5), Seed{1});
  EXPECT_LT(mean_sat(flat), 1e-3);
}

TEST(Color, HistogramEqualizationSpreadsValues) {
  Image img(64, 64);
  Rng rng(3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(100 + rng.below(20));
  const Image out = apply(Kind::histogram_equalization, img, IntensityLevel(5), Seed{1});
  int lo = 255, hi = 0;
  for (std::uint8_t v : out.data()) {
    lo = std::min<int>(lo, v);
    hi = std::max<int>(hi, v);
  }
  EXPECT_GT(hi - lo, 150);
}

TEST(Color, WhiteBalanceNeutralizesCast) {
  Image img = natural_image(64, 48);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) img.data()[3 * i + 2] = img.data()[3 * i + 2] / 2;
  const Image out = apply(Kind::white_balance, img, IntensityLevel(5), Seed{1});
  auto spread = [](const Image& im) {
    const FloatImage f = to_float(im);
    const double r = plane_mean(f.plane(0)), g = plane_mean(f.plane(1)), b = plane_mean(f.plane(2));
    return std::max({r, g, b}) - std::min({r, g, b});
  };
  EXPECT_LT(spread(out), spread(img));
}

TEST(Color, PhaseScramblePreservesMagnitude) {
  const Image img = noise_image(48, 36, 6);
  const FloatImage f = to_float(img);
  for (double w : {0.2, 0.6, 1.0}) {
    Rng rng(7);
    const auto planes = perturb::phase_scramble_planes(f, w, rng);
    for (int c = 0; c < 3; ++c) {
      const ComplexPlane a = fft2(f.plane(c), 48, 36);
      const ComplexPlane b = fft2(std::span<const double>(planes[c]), 48, 36);
      for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double ma = std::abs(a.data[i]), mb = std::abs(b.data[i]);
        ASSERT_LE(std::abs(ma - mb), 1e-4 * ma + 1e-9);
      }
    }
  }
}

TEST(Jpeg, QualityControlsError) {
  const Image img = natural_image(64, 48);
  auto err = [&](int level) {
    const Image o = apply(Kind::jpeg_artifacts, img, IntensityLevel(level), Seed{1});
    double e = 0.0;
    for (std::size_t i = 0; i < o.data().size(); ++i) e += std::abs(o.data()[i] - img.data()[i]);
    return e;
  };
  EXPECT_GT(err(5), err(1));
  EXPECT_GT(err(1), 0.0);
}
