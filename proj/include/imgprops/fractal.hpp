#pragma once

#include <cstdint>
#include <vector>

#include "imgprops/raster.hpp"

namespace imgprops::fractal {

/// Binary mask, one byte per pixel (0 or 1), row-major.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  [[nodiscard]] std::uint8_t at(int x, int y) const noexcept {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
};

/// Box sizes (halving, largest first), box counts, and the fitted slope.
struct BoxCountSeries {
  std::vector<int> scales;
  std::vector<double> counts;
  double slope = 0.0;
};

/// 1 where value > mean, 0 otherwise (ties go to 0).
Mask binarize_mean(const Plane& gray);
Mask binarize_mean(const RasterImage& gray8);

/// Boundary pixels: those with at least one 4-neighbour of the other value.
Mask boundary(const Mask& mask);

/// Box sides side/2, side/4, ..., 2 for a square of `side` pixels.
std::vector<int> halving_scales(int side);

/// Boundary box counting on a square power-of-two mask. Counts are boxes
/// containing at least one boundary pixel; slope is log2 N vs log2(1/L).
BoxCountSeries box_count_2d(const Mask& square_mask);

/// Differential box counting on a square lightness surface in [0,100].
BoxCountSeries box_count_3d(const Plane& square_lightness);

/// 2d dimension: gray -> centered power-of-two crop -> mean threshold ->
/// boundary box counting. NaN for an all-0 or all-1 mask.
double fractal_dim_2d(const RasterImage& img);
double fractal_dim_2d(const Plane& gray);

/// 3d dimension of the L* surface over the largest centered square.
double fractal_dim_3d(const RasterImage& img);
double fractal_dim_3d(const Plane& lightness);

}  // namespace imgprops::fractal
