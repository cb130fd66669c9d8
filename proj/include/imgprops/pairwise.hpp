#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace imgprops::edges {

inline constexpr int kOrientations = 24;

/// One strong edge: pixel position, index into the 24-orientation bank, and
/// its (rectified) response strength.
struct Edge {
  int x = 0;
  int y = 0;
  int orientation = 0;
  double strength = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class DifferenceClasses {
  Folded,    ///< min(d, 24 - d): 13 classes, 0..180 deg in 15 deg steps
  Unfolded,  ///< d and 24 - d both credited: 24 classes
};

enum class PairWeighting { StrengthProduct, Unweighted };

struct PairOptions {
  /// Pairs closer than this (Euclidean, pixels) are skipped.
  int min_distance = 20;
  DifferenceClasses classes = DifferenceClasses::Folded;
  PairWeighting weighting = PairWeighting::StrengthProduct;
};

/// Integer pair-weight histogram. Strengths are quantized to 16 bits relative
/// to the strongest edge, so sums are exact and independent of the order in
/// which pairs are visited.
struct PairHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t pairs = 0;

  friend bool operator==(const PairHistogram&, const PairHistogram&) = default;
};

inline constexpr std::uint32_t kWeightScale = 1u << 16;
/// Largest edge list the exact 64-bit accumulation is guaranteed for.
inline constexpr std::size_t kMaxPairEdges = 65536;

[[nodiscard]] int class_count(DifferenceClasses classes) noexcept;

/// Quantized weights, one per edge.
std::vector<std::uint32_t> quantize_strengths(std::span<const Edge> edges, PairWeighting weighting);

/// Adds `weight` for one unordered pair with orientations (a, b).
void credit_pair(std::vector<std::uint64_t>& counts, int a, int b, std::uint64_t weight,
                 DifferenceClasses classes) noexcept;

/// Cell-grid pairwise kernel, parallel over grid cells with OpenMP.
/// `threads` <= 0 uses the OpenMP default. Output is identical for every
/// thread count.
PairHistogram pair_histogram(std::span<const Edge> edges, const PairOptions& options = {},
                             int threads = 0);

}  // namespace imgprops::edges
