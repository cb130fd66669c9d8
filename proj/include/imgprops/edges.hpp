#pragma once

#include <array>
#include <span>
#include <vector>

#include "imgprops/pairwise.hpp"
#include "imgprops/raster.hpp"

namespace imgprops::edges {

/// Odd-symmetric (sine-phase) Gabor parameters, in pixels.
///
/// Orientation k of the bank points along k * 15 deg, measured from +x
/// towards +y (image rows grow downwards). Kernel k responds positively to a
/// dark-to-bright transition along that direction; kernel k + 12 is its
/// exact negation, so the half-wave rectified pair separates edge polarity
/// and the bank spans the full 360 deg.
struct GaborParams {
  double wavelength = 8.0;
  double sigma = 4.0;
  /// Envelope aspect ratio: SD along the edge is sigma / aspect.
  double aspect = 0.5;
  /// Kernel half-width in units of the larger envelope SD.
  double extent = 2.0;
};

class GaborBank {
 public:
  explicit GaborBank(const GaborParams& params = {});

  [[nodiscard]] const GaborParams& params() const noexcept { return params_; }
  [[nodiscard]] int radius() const noexcept { return radius_; }
  [[nodiscard]] int side() const noexcept { return 2 * radius_ + 1; }
  /// Kernel k, row-major side() x side(), centre at (radius, radius).
  [[nodiscard]] std::span<const double> kernel(int k) const noexcept { return kernels_[k]; }
  [[nodiscard]] static double angle_radians(int k) noexcept;

 private:
  GaborParams params_;
  int radius_;
  std::array<std::vector<double>, kOrientations> kernels_;
};

/// Rectified responses of the whole bank plus the ranked strongest edges.
struct EdgeField {
  int width = 0;
  int height = 0;
  /// response[k][y * width + x] >= 0.
  std::array<std::vector<double>, kOrientations> response;
  /// Sorted by strength descending, then row, then column.
  std::vector<Edge> strongest_edges;
};

struct EdgeOptions {
  GaborParams gabor{};
  /// Pixel cap applied before filtering (MaxPixels policy, never upscales).
  int max_pixels = 120000;
  std::size_t max_edges = 10000;
};

/// Responses of `gray` (already at analysis size) against `bank`, reflect
/// padded, half-wave rectified.
EdgeField filter_responses(const Plane& gray, const GaborBank& bank, std::size_t max_edges = 10000);

/// Gray -> MaxPixels cap -> filter_responses.
EdgeField gabor_responses(const RasterImage& img, const EdgeOptions& options = {});

/// Mean over pixels of the summed responses of all 24 orientations.
double edge_density(const EdgeField& field);
/// The plain sum over pixels and orientations.
double edge_density_sum(const EdgeField& field);
double edge_density(const RasterImage& img, const EdgeOptions& options = {});

/// Response mass per orientation, summed over all pixels.
std::array<double, kOrientations> orientation_histogram(const EdgeField& field);

/// Entropy (bits) of the orientation histogram. NaN for an all-zero field.
double eoe_first_order(const EdgeField& field);

/// Entropy (bits) of the pairwise orientation-difference histogram of the
/// strongest edges. NaN when no pair is far enough apart.
double eoe_second_order(const EdgeField& field, const PairOptions& options = {}, int threads = 0);
double eoe_second_order(std::span<const Edge> edges, const PairOptions& options = {},
                        int threads = 0);

/// Entropy of an integer pair histogram; NaN when it is empty.
double pair_entropy(const PairHistogram& hist);

}  // namespace imgprops::edges
