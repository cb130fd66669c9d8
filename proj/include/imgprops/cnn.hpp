#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imgprops/imgcore.hpp"
#include "imgprops/raster.hpp"

namespace imgprops::cnn {

/// First-layer convolution weights: filters x channels x kernel_h x kernel_w,
/// stored [filter][channel][row][col], plus per-channel input means and a
/// bias per filter.
struct Conv1Weights {
  int filters = 96;
  int channels = 3;
  int kernel_h = 11;
  int kernel_w = 11;
  std::array<float, 3> means{};
  std::vector<float> weights;
  std::vector<float> bias;

  [[nodiscard]] std::size_t filter_stride() const noexcept {
    return static_cast<std::size_t>(channels) * kernel_h * kernel_w;
  }
  [[nodiscard]] float at(int k, int c, int r, int s) const noexcept {
    return weights[static_cast<std::size_t>(k) * filter_stride() +
                   (static_cast<std::size_t>(c) * kernel_h + r) * kernel_w + s];
  }
};

inline constexpr char kWeightMagic[4] = {'A', 'T', 'B', '1'};
inline constexpr int kConv1Filters = 96;
inline constexpr int kConv1Kernel = 11;

/// Weight file: "ATB1" | u32 filters | u32 channels | u32 kernel_h |
/// u32 kernel_w | 3 x f32 means | weights f32 | filters x f32 bias |
/// u32 CRC32 of every byte between the magic and the checksum. All values
/// little-endian. Files must describe 96 x 3 x 11 x 11 filters.
Conv1Weights parse_conv1_weights(std::span<const std::uint8_t> bytes);
Conv1Weights load_conv1_weights(const std::string& path);
std::vector<std::uint8_t> serialize_conv1_weights(const Conv1Weights& w);
void save_conv1_weights(const Conv1Weights& w, const std::string& path);

/// Deterministic 96-filter bank of oriented luminance Gabors and
/// colour-opponent filters; the bundled weight file is generated from it.
Conv1Weights synthetic_conv1_weights();

struct ForwardOptions {
  int input_side = 512;
  int stride = 4;
  bool rectify = true;
  ResizeFilter filter = ResizeFilter::Bilinear;
};

/// maps[k][y][x] for every filter, valid convolution at the given stride.
struct Conv1Responses {
  int filters = 0;
  int width = 0;
  int height = 0;
  std::vector<double> maps;

  [[nodiscard]] double at(int k, int x, int y) const noexcept {
    return maps[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
  /// Max over each cell of an n x n grid: result[k][gy][gx], flattened.
  /// Remainder rows/columns go to the last cell.
  [[nodiscard]] std::vector<double> pooled(int n) const;
};

/// Resizes `img` (RGB8) to input_side x input_side and returns the three
/// real-valued channel planes the network sees (before mean subtraction).
std::array<Plane, 3> prepare_input(const RasterImage& img, const ForwardOptions& options = {});

Conv1Responses conv1_forward(std::span<const Plane> channels, const Conv1Weights& w,
                             const ForwardOptions& options = {});
Conv1Responses conv1_forward(const RasterImage& img, const Conv1Weights& w,
                             const ForwardOptions& options = {});

struct CnnSymmetry {
  double left_right = 0.0;
  double up_down = 0.0;
  /// Mean of the left-right and up-down scores.
  double combined = 0.0;
};

inline constexpr double kSymmetryEpsilon = 1e-6;

/// Mean over filters and positions of 1 - |a - b| / max(a, b); positions
/// where both are below epsilon count as fully symmetric.
double response_symmetry(const Conv1Responses& a, const Conv1Responses& b,
                         double epsilon = kSymmetryEpsilon);

/// Compares the responses of the image with those of its mirror image at the
/// same grid positions, i.e. each filter against its mirrored twin at the
/// mirrored location.
CnnSymmetry cnn_symmetry(const RasterImage& img, const Conv1Weights& w,
                         const ForwardOptions& options = {});
/// Reuses an existing forward pass `base` of the prepared `planes`.
CnnSymmetry cnn_symmetry(std::span<const Plane> planes, const Conv1Responses& base,
                         const Conv1Weights& w, const ForwardOptions& options = {});

/// Median over an 8x8 grid of the HIK between each cell's max-pooled filter
/// histogram and the whole-map histogram. NaN when all responses are 0.
double cnn_self_similarity(const Conv1Responses& r, int grid = 8);
double cnn_self_similarity(const RasterImage& img, const Conv1Weights& w,
                           const ForwardOptions& options = {});

struct CnnVariances {
  double sparseness = 0.0;   ///< variance over all filters x cells
  double variability = 0.0;  ///< median over filters of per-filter variance
};

CnnVariances cnn_variances(const Conv1Responses& r, int n);
CnnVariances cnn_variances(const RasterImage& img, const Conv1Weights& w, int n,
                           const ForwardOptions& options = {});

/// Population variance via Welford's update; exactly 0 for identical values.
double population_variance(std::span<const double> values) noexcept;
/// Median; mean of the two middle values for even counts.
double median(std::vector<double> values);

}  // namespace imgprops::cnn
