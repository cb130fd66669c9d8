#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

#include "imgprops/imgcore.hpp"
#include "imgprops/stats.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace imgprops;
using namespace imgprops::stats;
using namespace oracle;

namespace {

std::vector<std::array<std::uint8_t, 3>> one_color_per_hue_bin() {
  std::map<int, std::array<std::uint8_t, 3>> found;
  for (int r = 0; r < 256; ++r) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; b += 5) {
        const Hsv hsv = srgb_to_hsv(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b));
        const int bin = std::min(255, static_cast<int>(hsv.h * 256.0));
        found.try_emplace(bin, std::array<std::uint8_t, 3>{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                                            static_cast<std::uint8_t>(b)});
      }
    }
    if (found.size() == 256) break;
  }
  std::vector<std::array<std::uint8_t, 3>> out;
  for (auto& [bin, rgb] : found) out.push_back(rgb);
  return out;
}

}  // namespace

TEST(Size, SumOfSides) {
  EXPECT_EQ(image_size(testutil::constant_rgb(1024, 768, 0, 0, 0)), 1792.0);
  EXPECT_EQ(image_size(testutil::constant_rgb(1, 1, 0, 0, 0)), 2.0);
  EXPECT_EQ(image_size(testutil::constant_rgb(512, 512, 0, 0, 0)), 1024.0);
}

TEST(Aspect, WidthOverHeight) {
  EXPECT_NEAR(aspect_ratio(RasterImage(1920, 1080, ColorSpace::RGB8)), 1920.0 / 1080.0, 1e-15);
  EXPECT_EQ(aspect_ratio(RasterImage(7, 7, ColorSpace::RGB8)), 1.0);
  EXPECT_EQ(aspect_ratio(RasterImage(1080, 1920, ColorSpace::RGB8)), 0.5625);
}

TEST(ChannelStats, ConstantHasZeroSpread) {
  const RasterImage img = testutil::constant_rgb(9, 4, 12, 200, 77);
  for (auto space : {StatsSpace::RGB, StatsSpace::HSV, StatsSpace::Lab}) {
    const ChannelStats s = channel_stats(img, space);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(s.std[c], 0.0);
  }
}

TEST(ChannelStats, TwoPointRed) {
  std::vector<std::uint8_t> px;
  for (int i = 0; i < 8; ++i) px.insert(px.end(), {static_cast<std::uint8_t>(i % 2 ? 255 : 0), 0, 0});
  const ChannelStats s = channel_stats(RasterImage::from_bytes(4, 2, ColorSpace::RGB8, px), StatsSpace::RGB);
  EXPECT_EQ(s.mean[0], 127.5);
  EXPECT_EQ(s.std[0], 127.5);
  EXPECT_EQ(s.mean[1], 0.0);
}

TEST(ChannelStats, MatchesTwoPassOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RasterImage img = testutil::random_rgb(64, 64, seed);
    for (auto space : {StatsSpace::RGB, StatsSpace::HSV, StatsSpace::Lab}) {
      const ChannelStats s = channel_stats(img, space);
      for (int c = 0; c < 3; ++c) {
        const auto [m, sd] = channel_oracle(img, space, c);
        EXPECT_NEAR(s.mean[c], m, 1e-9 * std::max(1.0, std::abs(m)));
        EXPECT_NEAR(s.std[c], sd, 1e-9 * std::max(1.0, sd));
      }
    }
  }
}

TEST(ChannelStats, PermutationInvariant) {
  const RasterImage img = testutil::random_rgb(40, 30, 3);
  const RasterImage shuffled = testutil::shuffled_pixels(img, 99);
  for (auto space : {StatsSpace::RGB, StatsSpace::HSV, StatsSpace::Lab}) {
    const ChannelStats a = channel_stats(img, space), b = channel_stats(shuffled, space);
    for (int c = 0; c < 3; ++c) {
      EXPECT_NEAR(a.mean[c], b.mean[c], 1e-9);
      EXPECT_NEAR(a.std[c], b.std[c], 1e-9);
    }
  }
}

TEST(RmsContrast, Examples) {
  EXPECT_EQ(rms_contrast(testutil::constant_rgb(5, 5, 30, 60, 90)), 0.0);
  const RasterImage half = testutil::gray_rgb(10, 4, [](int x, int) { return x < 5 ? 0 : 255; });
  EXPECT_NEAR(rms_contrast(half), 50.0, 1e-9);
  const RasterImage img = testutil::random_rgb(64, 64, 21);
  EXPECT_NEAR(rms_contrast(img), channel_oracle(img, StatsSpace::Lab, 0).second, 1e-9);
}

TEST(RmsContrast, GrayIsInvariantUnderHueRotation) {
  const RasterImage gray = testutil::gray_rgb(20, 20, [](int x, int y) { return (x * 13 + y * 7) % 256; });
  EXPECT_EQ(rms_contrast(rotate_hue(gray, 73.0)), rms_contrast(gray));
}

TEST(LightnessEntropy, Examples) {
  EXPECT_EQ(lightness_entropy(testutil::constant_rgb(8, 8, 10, 20, 30)), 0.0);
  const auto colors = one_color_per_lightness_bin();
  ASSERT_EQ(colors.size(), 256u);
  EXPECT_EQ(lightness_entropy(image_from_colors(colors, 3)), 8.0);
}

TEST(LightnessEntropy, MatchesOracleAndIgnoresArrangement) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RasterImage img = testutil::random_rgb(64, 64, seed + 100);
    std::vector<double> hist(256, 0.0);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) {
        const Lab lab = srgb_to_lab(img.bytes()[img.index(x, y, 0)], img.bytes()[img.index(x, y, 1)],
                                    img.bytes()[img.index(x, y, 2)]);
        hist[std::clamp(static_cast<int>(lab.l / 100.0 * 256.0), 0, 255)] += 1.0;
      }
    }
    EXPECT_NEAR(lightness_entropy(img), entropy_oracle(hist), 1e-9);
    EXPECT_NEAR(lightness_entropy(testutil::shuffled_pixels(img, seed)), lightness_entropy(img), 1e-12);
  }
}

TEST(ColorEntropy, Examples) {
  EXPECT_EQ(color_entropy(testutil::constant_rgb(8, 8, 200, 10, 10)), 0.0);
  const auto colors = one_color_per_hue_bin();
  ASSERT_EQ(colors.size(), 256u);
  EXPECT_EQ(color_entropy(image_from_colors(colors, 2)), 8.0);
}

TEST(ColorEntropy, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RasterImage img = testutil::random_rgb(64, 64, seed + 200);
    std::vector<double> hist(256, 0.0);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
      const Hsv hsv = srgb_to_hsv(img.bytes()[3 * p], img.bytes()[3 * p + 1], img.bytes()[3 * p + 2]);
      hist[std::clamp(static_cast<int>(hsv.h * 256.0), 0, 255)] += 1.0;
    }
    EXPECT_NEAR(color_entropy(img), entropy_oracle(hist), 1e-9);
  }
}

TEST(ColorEntropy, AchromaticPixelsCanBeExcluded) {
  // Gray counts as hue 0 unless excluded; green sits at 1/3.
  std::vector<std::uint8_t> px;
  for (int i = 0; i < 4; ++i) px.insert(px.end(), {100, 100, 100});
  for (int i = 0; i < 4; ++i) px.insert(px.end(), {0, 255, 0});
  const RasterImage img = RasterImage::from_bytes(8, 1, ColorSpace::RGB8, px);
  EXPECT_NEAR(color_entropy(img, {true}), 1.0, 1e-12);
  EXPECT_EQ(color_entropy(img, {false}), 0.0);
}

TEST(Entropy, Bounds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RasterImage img = testutil::random_rgb(32, 16, seed);
    for (double h : {lightness_entropy(img), color_entropy(img)}) {
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, 8.0);
    }
  }
}

TEST(Entropy, BinIndexClampsTopEdge) {
  EXPECT_EQ(bin_index(100.0, 0.0, 100.0, 256), 255);
  EXPECT_EQ(bin_index(0.0, 0.0, 100.0, 256), 0);
  EXPECT_EQ(bin_index(50.0, 0.0, 100.0, 256), 128);
}
