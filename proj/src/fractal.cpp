#include "imgprops/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "imgprops/error.hpp"
#include "imgprops/fourier.hpp"
#include "imgprops/imgcore.hpp"

namespace imgprops::fractal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_min_side(int width, int height) {
  if (std::min(width, height) < 4) throw Error(ErrorCode::TooSmall, "fractal dimension needs min side >= 4");
}

}  // namespace

Mask binarize_mean(const Plane& gray) {
  const double mean =
      std::accumulate(gray.data.begin(), gray.data.end(), 0.0) / static_cast<double>(gray.size());
  Mask out{gray.width, gray.height, std::vector<std::uint8_t>(gray.size())};
  for (std::size_t i = 0; i < gray.size(); ++i) out.bits[i] = gray.data[i] > mean ? 1 : 0;
  return out;
}

Mask binarize_mean(const RasterImage& gray8) {
  if (gray8.space() != ColorSpace::Gray8) {
    throw Error(ErrorCode::WrongColorSpace, "binarize_mean expects Gray8");
  }
  return binarize_mean(channel_plane(gray8, 0));
}

Mask boundary(const Mask& mask) {
  Mask out{mask.width, mask.height, std::vector<std::uint8_t>(mask.bits.size(), 0)};
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const auto v = mask.at(x, y);
      const bool edge = (x > 0 && mask.at(x - 1, y) != v) ||
                        (x + 1 < mask.width && mask.at(x + 1, y) != v) ||
                        (y > 0 && mask.at(x, y - 1) != v) ||
                        (y + 1 < mask.height && mask.at(x, y + 1) != v);
      out.bits[static_cast<std::size_t>(y) * mask.width + x] = edge ? 1 : 0;
    }
  }
  return out;
}

std::vector<int> halving_scales(int side) {
  std::vector<int> scales;
  for (int l = floor_pow2(side) / 2; l >= 2; l /= 2) scales.push_back(l);
  return scales;
}

BoxCountSeries box_count_2d(const Mask& square_mask) {
  const int side = square_mask.width;
  const Mask edges = boundary(square_mask);
  BoxCountSeries out;
  out.scales = halving_scales(side);
  // Occupancy at the finest scale, then OR-pooled upward.
  int n = side / 2;
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(n) * n, 0);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (edges.at(x, y)) occ[static_cast<std::size_t>(y / 2) * n + x / 2] = 1;
    }
  }
  std::vector<double> counts_fine_first;
  while (true) {
    counts_fine_first.push_back(static_cast<double>(std::count(occ.begin(), occ.end(), 1)));
    if (n <= 2) break;
    const int m = n / 2;
    std::vector<std::uint8_t> next(static_cast<std::size_t>(m) * m, 0);
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        if (occ[static_cast<std::size_t>(y) * n + x]) next[static_cast<std::size_t>(y / 2) * m + x / 2] = 1;
      }
    }
    occ.swap(next);
    n = m;
  }
  out.counts.assign(counts_fine_first.rbegin(), counts_fine_first.rend());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.scales.size(); ++i) {
    if (out.counts[i] <= 0.0) continue;
    lx.push_back(-std::log2(static_cast<double>(out.scales[i])));
    ly.push_back(std::log2(out.counts[i]));
  }
  out.slope = lx.size() >= 2 ? fourier::fit_line(lx, ly).slope : kNaN;
  return out;
}

BoxCountSeries box_count_3d(const Plane& square) {
  const int side = square.width;
  BoxCountSeries out;
  out.scales = halving_scales(side);
  std::vector<double> lx, ly;
  for (int l : out.scales) {
    // Box height in L* units so that boxes are cubes once the L* range
    // [0,100] is stretched to the image side.
    const double box_height = l * (100.0 / side);
    const int tiles = side / l;
    double total = 0.0;
    for (int ty = 0; ty < tiles; ++ty) {
      for (int tx = 0; tx < tiles; ++tx) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int y = ty * l; y < (ty + 1) * l; ++y) {
          for (int x = tx * l; x < (tx + 1) * l; ++x) {
            lo = std::min(lo, square.at(x, y));
            hi = std::max(hi, square.at(x, y));
          }
        }
        total += std::ceil((hi - lo) / box_height) + 1.0;
      }
    }
    out.counts.push_back(total);
    lx.push_back(std::log(1.0 / l));
    ly.push_back(std::log(total));
  }
  out.slope = lx.size() >= 2 ? fourier::fit_line(lx, ly).slope : kNaN;
  return out;
}

double fractal_dim_2d(const Plane& gray) {
  require_min_side(gray.width, gray.height);
  const Mask mask = binarize_mean(crop_center_square_pow2(gray));
  const auto ones = std::count(mask.bits.begin(), mask.bits.end(), 1);
  if (ones == 0 || ones == static_cast<std::ptrdiff_t>(mask.bits.size())) return kNaN;
  return box_count_2d(mask).slope;
}

double fractal_dim_2d(const RasterImage& img) { return fractal_dim_2d(gray_plane(img)); }

double fractal_dim_3d(const Plane& lightness) {
  require_min_side(lightness.width, lightness.height);
  return box_count_3d(crop_center_square(lightness)).slope;
}

double fractal_dim_3d(const RasterImage& img) { return fractal_dim_3d(lightness_plane(img)); }

}  // namespace imgprops::fractal
