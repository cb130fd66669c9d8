#pragma once

#include <array>
#include <span>
#include <vector>

#include "imgprops/raster.hpp"

namespace imgprops::phog {

enum class GradientOperator { CentralDifference, Sobel };

/// Whether orientation bins cover the full circle or are folded mod 180 deg.
enum class OrientationSpan { Full360, Half180 };

/// Combined gradient image: per pixel, the strongest channel gradient.
struct GradientImage {
  int width = 0;
  int height = 0;
  std::vector<double> magnitude;
  /// Radians in [0, 2*pi); 0 where magnitude is 0.
  std::vector<double> orientation;
};

/// Gradient per channel (replicated borders); the channel with the largest
/// magnitude wins at each pixel (first channel on ties).
GradientImage gradient_image(std::span<const Plane> channels,
                             GradientOperator op = GradientOperator::CentralDifference);
/// RGB8 and Lab inputs use the three L*a*b* channels; gray inputs use one.
GradientImage gradient_image(const RasterImage& img,
                             GradientOperator op = GradientOperator::CentralDifference);

/// hist[level][section][bin]; level k has 4^k sections in row-major order
/// over a 2^k x 2^k grid. Uneven splits give the remainder to the last
/// row/column of sections.
struct HogPyramid {
  int bins = 16;
  OrientationSpan span = OrientationSpan::Full360;
  std::vector<std::vector<std::vector<double>>> hist;

  [[nodiscard]] int levels() const noexcept { return static_cast<int>(hist.size()); }
};

int orientation_bin(double radians, int bins, OrientationSpan span) noexcept;

HogPyramid hog_pyramid(const GradientImage& grad, int bins = 16,
                       OrientationSpan span = OrientationSpan::Full360, int max_level = 3);

/// Section [begin, end) along one axis of `extent` split into `parts`.
std::array<int, 2> section_range(int extent, int parts, int index) noexcept;

/// Sum of bin-wise minima. Inputs are expected to be unit-sum histograms.
double histogram_intersection(std::span<const double> a, std::span<const double> b);

/// Copy scaled to unit sum; all zeros stay zeros.
std::vector<double> normalized(std::span<const double> h);

enum class AnisotropyMode {
  Pooled,      ///< SD over all retained normalized bin values (default)
  PerSection,  ///< SD within each section, averaged over sections
};

struct PhogOptions {
  /// Total pixel count the image is area-normalized to before analysis;
  /// 0 keeps the input size.
  int normalize_pixels = 100000;
  int bins = 16;
  OrientationSpan span = OrientationSpan::Full360;
  GradientOperator op = GradientOperator::CentralDifference;
  /// Weights of pyramid levels 1..3 for self-similarity.
  std::array<double, 3> level_weights{1.0, 1.0, 1.0};
  AnisotropyMode anisotropy = AnisotropyMode::Pooled;
};

/// Mean combined gradient magnitude.
double phog_complexity(const RasterImage& img, const PhogOptions& options = {});
double phog_complexity(const GradientImage& grad);

/// Dispersion of the normalized level-3 section histograms. 0 when every
/// section is flat.
double phog_anisotropy(const RasterImage& img, const PhogOptions& options = {});
double phog_anisotropy(const HogPyramid& pyramid, AnisotropyMode mode = AnisotropyMode::Pooled);

/// Weighted mean over levels 1..3 of the mean HIK between each section and
/// the ground-level histogram. NaN if the image has no gradient at all.
double phog_self_similarity(const RasterImage& img, const PhogOptions& options = {});
double phog_self_similarity(const HogPyramid& pyramid, std::span<const double> level_weights);

/// Per-level mean HIK against the ground level, index 0 is level 1.
std::vector<double> level_similarities(const HogPyramid& pyramid);

}  // namespace imgprops::phog
