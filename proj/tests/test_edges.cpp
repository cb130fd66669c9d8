#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "imgprops/edges.hpp"
#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/reference.hpp"
#include "imgprops/synth.hpp"
#include "test_util.hpp"

using namespace imgprops;
using namespace imgprops::edges;

namespace {

std::vector<Edge> random_edges(std::size_t n, int extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(0, extent - 1), ori(0, kOrientations - 1);
  std::uniform_real_distribution<double> str(0.01, 5.0);
  std::vector<Edge> e(n);
  for (auto& v : e) v = {pos(rng), pos(rng), ori(rng), str(rng)};
  return e;
}

// One anchor edge and a tight cluster of partners 100 px away, so only the
// cross pairs count.
std::vector<Edge> anchor_and_cluster(const std::vector<int>& orientations) {
  std::vector<Edge> e{{0, 0, 0, 1.0}};
  for (std::size_t i = 0; i < orientations.size(); ++i) {
    e.push_back({100 + static_cast<int>(i % 5), static_cast<int>(i / 5), orientations[i], 1.0});
  }
  return e;
}

double entropy_bits(const std::vector<double>& h) {
  const double total = std::accumulate(h.begin(), h.end(), 0.0);
  double s = 0.0;
  for (double v : h) {
    if (v > 0.0) s -= v / total * std::log2(v / total);
  }
  return s;
}

}  // namespace

TEST(GaborBank, KernelsAreDcFreeAndPaired) {
  const GaborBank bank;
  EXPECT_EQ(bank.radius(), 16);
  for (int k = 0; k < kOrientations; ++k) {
    const auto g = bank.kernel(k);
    EXPECT_LT(std::abs(std::accumulate(g.begin(), g.end(), 0.0)), 1e-6);
    double l1 = 0.0;
    for (double v : g) l1 += std::abs(v);
    EXPECT_NEAR(l1, 1.0, 1e-12);
  }
  for (int k = 0; k < kOrientations / 2; ++k) {
    const auto a = bank.kernel(k), b = bank.kernel(k + kOrientations / 2);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], -b[i]);
  }
  EXPECT_THROW(GaborBank(GaborParams{0.0, 4.0, 0.5, 2.0}), Error);
}

TEST(Responses, ConstantIsZero) {
  for (int v : {0, 37, 100, 255}) {
    const auto c = static_cast<std::uint8_t>(v);
    const EdgeField f = gabor_responses(testutil::constant_rgb(64, 48, c, c, c));
    for (const auto& r : f.response) {
      for (double x : r) EXPECT_EQ(x, 0.0);
    }
    EXPECT_TRUE(f.strongest_edges.empty());
    EXPECT_EQ(edge_density(f), 0.0);
  }
}

TEST(Responses, MatchDirectCorrelation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 255.0);
  const Plane gray = testutil::make_plane(45, 31, [&](int, int) { return d(rng); });
  const GaborBank bank;
  const EdgeField f = filter_responses(gray, bank);
  for (int k = 0; k < kOrientations / 2; ++k) {
    const Plane c = reference::correlate(gray, bank.kernel(k), bank.radius());
    for (std::size_t i = 0; i < c.data.size(); ++i) {
      EXPECT_NEAR(f.response[k][i], std::max(c.data[i], 0.0), 1e-9);
      EXPECT_NEAR(f.response[k + 12][i], std::max(-c.data[i], 0.0), 1e-9);
    }
  }
}

TEST(Responses, StepEdgeOrientation) {
  const Plane rising = testutil::make_plane(40, 40, [](int x, int) { return x < 20 ? 10.0 : 200.0; });
  const Plane falling = testutil::make_plane(40, 40, [](int x, int) { return x < 20 ? 200.0 : 10.0; });
  const GaborBank bank;
  const EdgeField up = filter_responses(rising, bank);
  const EdgeField down = filter_responses(falling, bank);
  ASSERT_FALSE(up.strongest_edges.empty());
  EXPECT_EQ(up.strongest_edges.front().orientation, 0);
  EXPECT_EQ(down.strongest_edges.front().orientation, 12);
  EXPECT_TRUE(up.strongest_edges.front().x == 19 || up.strongest_edges.front().x == 20);
  // Transposed step: the winner turns by a quarter.
  const Plane rows = testutil::make_plane(40, 40, [](int, int y) { return y < 20 ? 10.0 : 200.0; });
  EXPECT_EQ(filter_responses(rows, bank).strongest_edges.front().orientation, 6);
}

TEST(Responses, EdgeListRankedAndCapped) {
  const RasterImage img = testutil::random_rgb(80, 60, 4);
  EdgeOptions o;
  o.max_edges = 500;
  const EdgeField f = gabor_responses(img, o);
  ASSERT_EQ(f.strongest_edges.size(), 500u);
  for (std::size_t i = 1; i < f.strongest_edges.size(); ++i) {
    EXPECT_GE(f.strongest_edges[i - 1].strength, f.strongest_edges[i].strength);
  }
  for (const Edge& e : f.strongest_edges) {
    EXPECT_GT(e.strength, 0.0);
    const std::size_t i = static_cast<std::size_t>(e.y) * f.width + e.x;
    for (int k = 0; k < kOrientations; ++k) EXPECT_LE(f.response[k][i], e.strength);
  }
}

TEST(Responses, PixelCap) {
  const EdgeField small = gabor_responses(testutil::random_rgb(300, 300, 1));
  EXPECT_EQ(small.width, 300);
  EXPECT_EQ(small.height, 300);
  const EdgeField big = gabor_responses(testutil::random_rgb(600, 400, 1));
  EXPECT_LE(static_cast<long>(big.width) * big.height, 120000);
  EXPECT_GT(static_cast<long>(big.width) * big.height, 115000);
}

TEST(EdgeDensity, ContrastOrdering) {
  const RasterImage hi = testutil::gray_rgb(96, 96, [](int x, int y) { return ((x / 8) + (y / 8)) % 2 ? 230 : 20; });
  const RasterImage lo = testutil::gray_rgb(96, 96, [](int x, int y) { return ((x / 8) + (y / 8)) % 2 ? 140 : 110; });
  EXPECT_GT(edge_density(hi), edge_density(lo));
  EXPECT_EQ(edge_density(testutil::constant_rgb(30, 30, 7, 7, 7)), 0.0);
}

TEST(EdgeDensity, MatchesSumOracle) {
  const RasterImage img = testutil::random_rgb(50, 40, 6);
  const Plane gray = gray_plane(img);
  const GaborBank bank;
  double oracle = 0.0;
  for (int k = 0; k < kOrientations / 2; ++k) {
    for (double v : reference::correlate(gray, bank.kernel(k), bank.radius()).data) oracle += std::abs(v);
  }
  const EdgeField f = gabor_responses(img);
  EXPECT_NEAR(edge_density_sum(f), oracle, 1e-6 * oracle);
  EXPECT_NEAR(edge_density(f), oracle / 2000.0, 1e-6 * oracle / 2000.0);
}

TEST(Eoe1, IsotropicNoiseIsHigh) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_GE(eoe_first_order(gabor_responses(synth::random_phase_rgb8(256, 1.0, seed + 70))), 4.4);
  }
}

TEST(Eoe1, GratingIsLow) {
  const RasterImage grating = testutil::gray_rgb(128, 128, [](int x, int) {
    return static_cast<int>(std::lround(128.0 + 100.0 * std::sin(2.0 * std::numbers::pi * x / 8.0)));
  });
  const double g = eoe_first_order(gabor_responses(grating));
  EXPECT_LE(g, 2.5);
  EXPECT_LT(g, eoe_first_order(gabor_responses(synth::random_phase_rgb8(128, 1.0, 3))));
}

TEST(Eoe1, MatchesHandBuiltHistogram) {
  EdgeField f;
  f.width = 3;
  f.height = 2;
  std::vector<double> oracle(kOrientations, 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int k = 0; k < kOrientations; ++k) {
    f.response[k].resize(6);
    for (double& v : f.response[k]) {
      v = k % 5 == 0 ? 0.0 : d(rng);
      oracle[k] += v;
    }
  }
  EXPECT_NEAR(eoe_first_order(f), entropy_bits(oracle), 1e-9);
  for (auto& r : f.response) std::fill(r.begin(), r.end(), 0.0);
  EXPECT_TRUE(std::isnan(eoe_first_order(f)));
}

TEST(Eoe1, IgnoresArrangement) {
  EdgeField f = gabor_responses(testutil::random_rgb(40, 40, 9));
  const double before = eoe_first_order(f);
  std::vector<std::size_t> perm(f.response[0].size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
  for (auto& r : f.response) {
    std::vector<double> moved(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) moved[perm[i]] = r[i];
    r = std::move(moved);
  }
  EXPECT_NEAR(eoe_first_order(f), before, 1e-12);
}

TEST(Eoe2, SingleOrientationIsZero) {
  auto e = random_edges(200, 200, 3);
  for (auto& v : e) v.orientation = 7;
  EXPECT_EQ(eoe_second_order(e), 0.0);
}

TEST(Eoe2, UniformClassesReachMaximum) {
  std::vector<int> folded(13);
  std::iota(folded.begin(), folded.end(), 0);
  EXPECT_NEAR(eoe_second_order(anchor_and_cluster(folded)), std::log2(13.0), 1e-12);
  std::vector<int> all(24);
  std::iota(all.begin(), all.end(), 0);
  PairOptions unfolded;
  unfolded.classes = DifferenceClasses::Unfolded;
  EXPECT_NEAR(eoe_second_order(anchor_and_cluster(all), unfolded), std::log2(24.0), 1e-12);
}

TEST(Eoe2, NoValidPairsIsNaN) {
  const std::vector<Edge> close{{0, 0, 1, 1.0}, {5, 5, 3, 1.0}, {10, 0, 9, 2.0}};
  EXPECT_TRUE(std::isnan(eoe_second_order(close)));
  EXPECT_TRUE(std::isnan(eoe_second_order(std::vector<Edge>{})));
}

TEST(Eoe2, DistanceCutoffIsInclusive) {
  const std::vector<Edge> e{{0, 0, 0, 1.0}, {20, 0, 3, 1.0}, {12, 16, 5, 1.0}};
  const PairHistogram h = pair_histogram(e);
  // (0,0)-(20,0) and (0,0)-(12,16) are exactly 20 apart; the third pair is not.
  EXPECT_EQ(h.pairs, 2u);
}

TEST(PairKernel, MatchesNaiveOracle) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = seed == 0 ? 300 : 2 + (seed * 41) % 499;
    const auto e = random_edges(n, 60 + static_cast<int>(seed) * 20, seed);
    for (auto classes : {DifferenceClasses::Folded, DifferenceClasses::Unfolded}) {
      for (auto weighting : {PairWeighting::StrengthProduct, PairWeighting::Unweighted}) {
        const PairOptions o{20, classes, weighting};
        EXPECT_EQ(pair_histogram(e, o), reference::pair_histogram(e, o)) << n;
      }
    }
  }
}

TEST(PairKernel, LargeListMatchesOracle) {
  const auto e = random_edges(10000, 400, 77);
  const PairHistogram fast = pair_histogram(e);
  EXPECT_EQ(fast, reference::pair_histogram(e));
  EXPECT_GT(fast.pairs, 40000000u);
}

TEST(PairKernel, ThreadCountDoesNotMatter) {
  const auto e = random_edges(3000, 300, 8);
  const PairHistogram one = pair_histogram(e, {}, 1);
  EXPECT_EQ(pair_histogram(e, {}, 2), one);
  EXPECT_EQ(pair_histogram(e, {}, 8), one);
  EXPECT_EQ(eoe_second_order(e, {}, 8), eoe_second_order(e, {}, 1));
}

TEST(PairKernel, RotationRelabelInvariant) {
  auto e = random_edges(400, 150, 10);
  const double before = eoe_second_order(e);
  const PairHistogram h = pair_histogram(e);
  for (auto& v : e) v.orientation = (v.orientation + 5) % kOrientations;
  EXPECT_EQ(pair_histogram(e), h);
  EXPECT_EQ(eoe_second_order(e), before);
}

TEST(PairKernel, RejectsBadInput) {
  EXPECT_THROW(pair_histogram(std::vector<Edge>{{-1, 0, 0, 1.0}}), Error);
  EXPECT_THROW(pair_histogram(random_edges(4, 10, 1), PairOptions{0}), Error);
}

TEST(Eoe, SecondOrderWithinSlackOfFirst) {
  // Uniform-orientation synthetic fields: edges spread evenly over the bank.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto e = random_edges(1000, 300, seed + 20);
    EdgeField f;
    f.width = 300;
    f.height = 300;
    for (auto& r : f.response) r.assign(300 * 300, 0.0);
    for (const Edge& v : e) f.response[v.orientation][static_cast<std::size_t>(v.y) * 300 + v.x] += v.strength;
    f.strongest_edges = e;
    EXPECT_LE(eoe_second_order(f), eoe_first_order(f) + std::log2(24.0 / 13.0));
  }
}
