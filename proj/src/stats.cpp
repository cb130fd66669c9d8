#include "imgprops/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"

namespace imgprops::stats {

namespace {

void require_rgb8(const RasterImage& img, const char* op) {
  if (img.space() != ColorSpace::RGB8) {
    throw Error(ErrorCode::WrongColorSpace, std::string(op) + " expects RGB8");
  }
}

template <typename T>
double entropy_impl(std::span<const T> histogram) {
  double total = 0.0;
  for (T v : histogram) total += static_cast<double>(v);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (T v : histogram) {
    if (v <= T{}) continue;
    const double p = static_cast<double>(v) / total;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

struct MeanSd {
  double mean;
  double sd;
};

// Two-pass population statistics shifted by the first sample, so a constant
// sequence yields exactly its value and exactly zero spread.
MeanSd mean_sd(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  const double shift = v[0];
  double sum = 0.0;
  for (double x : v) sum += x - shift;
  const double offset = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) {
    const double d = x - shift - offset;
    sq += d * d;
  }
  return {shift + offset, std::sqrt(sq / static_cast<double>(v.size()))};
}

}  // namespace

double shannon_entropy_bits(std::span<const double> histogram) { return entropy_impl(histogram); }

double shannon_entropy_bits(std::span<const std::uint64_t> histogram) {
  return entropy_impl(histogram);
}

int bin_index(double value, double lo, double hi, int bins) noexcept {
  const double t = (value - lo) / (hi - lo) * bins;
  const int b = static_cast<int>(std::floor(t));
  return std::clamp(b, 0, bins - 1);
}

double image_size(const RasterImage& img) {
  return static_cast<double>(img.width()) + static_cast<double>(img.height());
}

double aspect_ratio(const RasterImage& img) {
  return static_cast<double>(img.width()) / static_cast<double>(img.height());
}

ChannelStats channel_stats(const RasterImage& img, StatsSpace space) {
  require_rgb8(img, "channel_stats");
  RasterImage converted;
  switch (space) {
    case StatsSpace::RGB: break;
    case StatsSpace::HSV: converted = rgb_to_hsv(img); break;
    case StatsSpace::Lab: converted = rgb_to_lab(img); break;
  }
  const RasterImage& src = space == StatsSpace::RGB ? img : converted;
  ChannelStats out;
  out.space = space;
  const std::size_t n = src.pixel_count();
  std::array<std::vector<double>, 3> ch;
  for (int k = 0; k < 3; ++k) ch[k].resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (int k = 0; k < 3; ++k) {
      ch[k][p] = is_integral(src.space()) ? src.bytes()[3 * p + k] : src.reals()[3 * p + k];
    }
  }
  for (int k = 0; k < 3; ++k) {
    const MeanSd m = mean_sd(ch[k]);
    out.mean[k] = m.mean;
    out.std[k] = m.sd;
  }
  return out;
}

double rms_contrast(const RasterImage& img) {
  require_rgb8(img, "rms_contrast");
  return mean_sd(lightness_plane(img).data).sd;
}

double lightness_entropy(const RasterImage& img) {
  require_rgb8(img, "lightness_entropy");
  // L* depends only on the RGB triple; the 256-bin histogram is filled
  // directly from per-pixel L*.
  std::vector<std::uint64_t> hist(kEntropyBins, 0);
  const auto src = img.bytes();
  for (std::size_t p = 0, n = img.pixel_count(); p < n; ++p) {
    const double l = srgb_to_lab(src[3 * p], src[3 * p + 1], src[3 * p + 2]).l;
    ++hist[bin_index(l, 0.0, 100.0, kEntropyBins)];
  }
  return shannon_entropy_bits(std::span<const std::uint64_t>(hist));
}

double color_entropy(const RasterImage& img, HueOptions options) {
  require_rgb8(img, "color_entropy");
  std::vector<std::uint64_t> hist(kEntropyBins, 0);
  const auto src = img.bytes();
  for (std::size_t p = 0, n = img.pixel_count(); p < n; ++p) {
    const Hsv hsv = srgb_to_hsv(src[3 * p], src[3 * p + 1], src[3 * p + 2]);
    if (!options.include_achromatic && hsv.s == 0.0) continue;
    ++hist[bin_index(hsv.h, 0.0, 1.0, kEntropyBins)];
  }
  return shannon_entropy_bits(std::span<const std::uint64_t>(hist));
}

}  // namespace imgprops::stats
