#include <gtest/gtest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

#include "imgprops/cnn.hpp"
#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/reference.hpp"
#include "imgprops/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace imgprops;
using namespace imgprops::cnn;
using namespace oracle;

namespace {

const std::string kWeights = std::string(IMGPROPS_DATA_DIR) + "/conv1_synthetic.atb";

const Conv1Weights& bundled() {
  static const Conv1Weights w = load_conv1_weights(kWeights);
  return w;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::array<Plane, 3> random_planes(int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 255.0);
  std::array<Plane, 3> p;
  for (auto& plane : p) plane = testutil::make_plane(side, side, [&](int, int) { return d(rng); });
  return p;
}

std::vector<double> unit(std::vector<double> v) {
  double t = 0;
  for (double x : v) t += x;
  for (double& x : v) x /= t;
  return v;
}

RasterImage quadrant_textures(int side) {
  return testutil::gray_rgb(side, side, [&](int x, int y) {
    const bool right = x >= side / 2, bottom = y >= side / 2;
    if (!right && !bottom) return (x / 4) % 2 ? 230 : 20;
    if (right && !bottom) return (y / 4) % 2 ? 230 : 20;
    if (!right) return 128;
    return ((x + y) / 6) % 2 ? 250 : 0;
  });
}

}  // namespace

TEST(Weights, BundledFileLoads) {
  const Conv1Weights& w = bundled();
  EXPECT_EQ(w.filters, 96);
  EXPECT_EQ(w.channels, 3);
  EXPECT_EQ(w.kernel_h, 11);
  EXPECT_EQ(w.kernel_w, 11);
  EXPECT_EQ(w.weights.size(), 96u * 3 * 11 * 11);
  EXPECT_EQ(w.bias.size(), 96u);
}

TEST(Weights, RegeneratesBundledFile) {
  EXPECT_EQ(serialize_conv1_weights(synthetic_conv1_weights()), read_bytes(kWeights));
}

TEST(Weights, RoundTrip) {
  const Conv1Weights w = synthetic_conv1_weights();
  const Conv1Weights back = parse_conv1_weights(serialize_conv1_weights(w));
  EXPECT_EQ(back.weights, w.weights);
  EXPECT_EQ(back.bias, w.bias);
  EXPECT_EQ(back.means, w.means);
}

TEST(Weights, ErrorPaths) {
  auto bytes = read_bytes(kWeights);
  auto wrong_count = bytes;
  wrong_count[4] = 95;
  EXPECT_EQ(code_of([&] { parse_conv1_weights(wrong_count); }), ErrorCode::DimMismatch);
  auto flipped = bytes;
  flipped[1000] ^= 0x10;
  EXPECT_EQ(code_of([&] { parse_conv1_weights(flipped); }), ErrorCode::ChecksumFail);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(code_of([&] { parse_conv1_weights(magic); }), ErrorCode::BadMagic);
  auto truncated = bytes;
  truncated.resize(truncated.size() - 8);
  EXPECT_EQ(code_of([&] { parse_conv1_weights(truncated); }), ErrorCode::DimMismatch);
  EXPECT_EQ(code_of([] { load_conv1_weights("/nonexistent/weights.atb"); }), ErrorCode::WeightFileMissing);
}

TEST(Forward, MapDimensions) {
  const Conv1Responses r = conv1_forward(testutil::random_rgb(300, 200, 1), bundled());
  EXPECT_EQ(r.filters, 96);
  EXPECT_EQ(r.width, 126);
  EXPECT_EQ(r.height, 126);
}

TEST(Forward, MeanInputGivesRectifiedBias) {
  Conv1Weights w = bundled();
  for (int k = 0; k < 96; k += 3) w.bias[k] = -w.bias[k];
  std::array<Plane, 3> planes;
  for (int c = 0; c < 3; ++c) planes[c] = Plane(64, 64, w.means[c]);
  const Conv1Responses r = conv1_forward(planes, w);
  for (int k = 0; k < 96; ++k) {
    for (int y = 0; y < r.height; ++y) {
      for (int x = 0; x < r.width; ++x) EXPECT_EQ(r.at(k, x, y), std::max(0.0, static_cast<double>(w.bias[k])));
    }
  }
}

TEST(Forward, ToyWeightsMatchQuadLoop) {
  Conv1Weights w;
  w.filters = 4;
  w.kernel_h = 5;
  w.kernel_w = 5;
  w.means = {10.0f, 20.0f, 30.0f};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> d(-1.0f, 1.0f);
  w.weights.resize(w.filter_stride() * 4);
  for (float& v : w.weights) v = d(rng);
  w.bias = {0.5f, -2.0f, 0.0f, 1.0f};
  const auto planes = random_planes(16, 6);
  for (bool rectify : {false, true}) {
    const ForwardOptions o{16, 2, rectify};
    const Conv1Responses r = conv1_forward(planes, w, o);
    ASSERT_EQ(r.width, 6);
    for (int k = 0; k < 4; ++k) {
      for (int oy = 0; oy < 6; ++oy) {
        for (int ox = 0; ox < 6; ++ox) {
          double acc = w.bias[k];
          for (int c = 0; c < 3; ++c) {
            for (int ky = 0; ky < 5; ++ky) {
              for (int kx = 0; kx < 5; ++kx) {
                acc += (planes[c].at(2 * ox + kx, 2 * oy + ky) - w.means[c]) * w.at(k, c, ky, kx);
              }
            }
          }
          if (rectify) acc = std::max(acc, 0.0);
          EXPECT_NEAR(r.at(k, ox, oy), acc, 1e-6);
        }
      }
    }
  }
}

TEST(Forward, MatchesReferenceAtFullSize) {
  const auto planes = prepare_input(testutil::random_rgb(512, 512, 7));
  const Conv1Responses fast = conv1_forward(planes, bundled());
  const Conv1Responses slow = reference::conv1_forward(planes, bundled());
  ASSERT_EQ(fast.maps.size(), slow.maps.size());
  for (std::size_t i = 0; i < fast.maps.size(); ++i) EXPECT_NEAR(fast.maps[i], slow.maps[i], 1e-9);
}

TEST(Forward, DeterministicAcrossThreadCounts) {
  const auto planes = prepare_input(testutil::random_rgb(256, 256, 8));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Conv1Responses one = conv1_forward(planes, bundled());
  omp_set_num_threads(4);
  const Conv1Responses four = conv1_forward(planes, bundled());
  omp_set_num_threads(saved);
  EXPECT_EQ(one.maps, four.maps);
  EXPECT_EQ(conv1_forward(planes, bundled()).maps, one.maps);
}

TEST(Symmetry, MirrorSymmetricImageScoresOne) {
  const RasterImage half = testutil::random_rgb(256, 512, 9);
  const RasterImage img = testutil::gray_rgb(512, 512, [&](int x, int y) {
    const int sx = x < 256 ? x : 511 - x;
    return half.bytes()[half.index(sx, y, 1)];
  });
  const CnnSymmetry s = cnn_symmetry(img, bundled());
  EXPECT_NEAR(s.left_right, 1.0, 1e-6);
  EXPECT_LT(s.up_down, s.left_right);
  EXPECT_NEAR(s.combined, (s.left_right + s.up_down) / 2.0, 1e-15);
}

TEST(Symmetry, SplitImageBelowConstant) {
  const RasterImage split = testutil::gray_rgb(128, 128, [](int x, int) { return x < 64 ? 0 : 255; });
  const RasterImage flat = testutil::constant_rgb(128, 128, 128, 128, 128);
  EXPECT_LT(cnn_symmetry(split, bundled()).left_right, cnn_symmetry(flat, bundled()).left_right);
}

TEST(Symmetry, MirroringIsAnInvolution) {
  const RasterImage img = testutil::random_rgb(512, 512, 10);
  EXPECT_NEAR(cnn_symmetry(mirror_left_right(img), bundled()).left_right, cnn_symmetry(img, bundled()).left_right,
              1e-6);
}

TEST(Symmetry, ResponseSymmetryFormula) {
  Conv1Responses a{1, 2, 2, {0.0, 2.0, 4.0, 1e-9}};
  Conv1Responses b{1, 2, 2, {0.0, 1.0, 4.0, 0.0}};
  EXPECT_DOUBLE_EQ(response_symmetry(a, b), (1.0 + 0.5 + 1.0 + 1.0) / 4.0);
  Conv1Responses c{1, 1, 2, {0.0, 1.0}};
  EXPECT_THROW(response_symmetry(a, c), Error);
}

TEST(SelfSimilarity, ConstantIsOne) {
  EXPECT_NEAR(cnn_self_similarity(testutil::constant_rgb(100, 100, 60, 120, 180), bundled()), 1.0, 1e-12);
}

TEST(SelfSimilarity, DistinctQuadrantsBelowConstant) {
  const double q = cnn_self_similarity(quadrant_textures(512), bundled());
  EXPECT_LT(q, cnn_self_similarity(testutil::constant_rgb(64, 64, 90, 90, 90), bundled()));
  EXPECT_GE(q, 0.0);
}

TEST(SelfSimilarity, MatchesStepByStepOracle) {
  const Conv1Responses r = conv1_forward(testutil::random_rgb(512, 512, 11), bundled());
  const auto ground = unit(pooled_oracle(r, 1));
  const auto cells = pooled_oracle(r, 8);
  std::vector<double> hik;
  for (int cell = 0; cell < 64; ++cell) {
    std::vector<double> h;
    for (int k = 0; k < 96; ++k) h.push_back(cells[k * 64 + cell]);
    h = unit(h);
    double s = 0;
    for (int k = 0; k < 96; ++k) s += std::min(h[k], ground[k]);
    hik.push_back(s);
  }
  const double v = cnn_self_similarity(r);
  EXPECT_NEAR(v, median_oracle(hik), 1e-9);
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
}

TEST(SelfSimilarity, ZeroResponseIsNaN) {
  Conv1Responses r{2, 16, 16, std::vector<double>(512, 0.0)};
  EXPECT_TRUE(std::isnan(cnn_self_similarity(r)));
}

TEST(Variances, ConstantHasZeroVariability) {
  const CnnVariances v = cnn_variances(testutil::constant_rgb(80, 80, 30, 140, 220), bundled(), 8);
  EXPECT_EQ(v.variability, 0.0);
  EXPECT_GT(v.sparseness, 0.0);
}

// The texture is a lattice of small discs whose contrast is tuned until its
// pooled response mass matches the single blob's.
TEST(Variances, BlobIsSparserThanTextureOfEqualEnergy) {
  const int n = 8;
  auto pooled_sum = [&](const RasterImage& img) {
    const auto p = conv1_forward(img, bundled()).pooled(n);
    return std::accumulate(p.begin(), p.end(), 0.0);
  };
  auto texture = [](int a) {
    return testutil::gray_rgb(512, 512, [a](int x, int y) {
      const int cx = x % 64 - 32, cy = y % 64 - 32;
      return cx * cx + cy * cy < 25 ? a : 0;
    });
  };
  const RasterImage blob = testutil::gray_rgb(512, 512, [](int x, int y) {
    return (x - 100) * (x - 100) + (y - 140) * (y - 140) < 40 * 40 ? 255 : 0;
  });
  const double target = pooled_sum(blob);
  int lo = 1, hi = 255;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (pooled_sum(texture(mid)) < target ? lo : hi) = mid;
  }
  const int a = std::abs(pooled_sum(texture(lo)) - target) < std::abs(pooled_sum(texture(hi)) - target) ? lo : hi;
  EXPECT_NEAR(pooled_sum(texture(a)), target, 0.1 * target);
  EXPECT_GT(cnn_variances(blob, bundled(), n).sparseness, cnn_variances(texture(a), bundled(), n).sparseness);
}

TEST(Variances, MatchOracle) {
  const Conv1Responses r = conv1_forward(testutil::random_rgb(400, 400, 12), bundled());
  for (int n : {2, 8, 30}) {
    const auto p = pooled_oracle(r, n);
    EXPECT_EQ(r.pooled(n), p);
    std::vector<double> per;
    for (int k = 0; k < 96; ++k) per.push_back(variance_oracle({p.begin() + k * n * n, p.begin() + (k + 1) * n * n}));
    const CnnVariances v = cnn_variances(r, n);
    EXPECT_NEAR(v.sparseness, variance_oracle(p), 1e-9 * std::max(1.0, v.sparseness));
    EXPECT_NEAR(v.variability, median_oracle(per), 1e-9 * std::max(1.0, v.variability));
  }
  EXPECT_THROW(cnn_variances(r, 1), Error);
  EXPECT_THROW(cnn_variances(r, 31), Error);
}

TEST(Variances, VariabilityIgnoresFilterOrder) {
  Conv1Responses r = conv1_forward(testutil::random_rgb(200, 200, 13), bundled());
  const double before = cnn_variances(r, 8).variability;
  const std::size_t map = static_cast<std::size_t>(r.width) * r.height;
  std::vector<int> perm(96);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  std::vector<double> moved(r.maps.size());
  for (int k = 0; k < 96; ++k) {
    std::copy_n(r.maps.begin() + static_cast<std::ptrdiff_t>(perm[k] * map), map,
                moved.begin() + static_cast<std::ptrdiff_t>(k * map));
  }
  r.maps = std::move(moved);
  EXPECT_EQ(cnn_variances(r, 8).variability, before);
}

TEST(Variances, MedianAndVariance) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
  const std::vector<double> same(10, 0.1);
  EXPECT_EQ(population_variance(same), 0.0);
  EXPECT_DOUBLE_EQ(population_variance(std::vector<double>{1.0, 3.0}), 1.0);
}
