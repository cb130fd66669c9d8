#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "imgprops/raster.hpp"

namespace imgprops::stats {

enum class StatsSpace { RGB, HSV, Lab };

/// Per-channel mean and population standard deviation.
struct ChannelStats {
  std::array<double, 3> mean{};
  std::array<double, 3> std{};
  StatsSpace space = StatsSpace::RGB;
};

/// Histogram bin count shared by the lightness and hue entropies.
inline constexpr int kEntropyBins = 256;

/// Shannon entropy in bits of a histogram; empty bins contribute 0.
double shannon_entropy_bits(std::span<const double> histogram);
double shannon_entropy_bits(std::span<const std::uint64_t> histogram);

/// Height plus width of the decoded original.
double image_size(const RasterImage& img);
/// Width over height.
double aspect_ratio(const RasterImage& img);

ChannelStats channel_stats(const RasterImage& img, StatsSpace space);

/// Population SD of Lab L*.
double rms_contrast(const RasterImage& img);

/// 256 equal bins of L* over [0,100].
double lightness_entropy(const RasterImage& img);

struct HueOptions {
  /// Achromatic pixels (S = 0) carry H = 0; when false they are left out of
  /// the hue histogram.
  bool include_achromatic = true;
};

/// 256 equal bins of HSV hue over [0,1).
double color_entropy(const RasterImage& img, HueOptions options = {});

/// Bin index of a value in [lo, hi] split into `bins` equal, left-closed bins;
/// the top edge falls into the last bin.
int bin_index(double value, double lo, double hi, int bins) noexcept;

}  // namespace imgprops::stats
