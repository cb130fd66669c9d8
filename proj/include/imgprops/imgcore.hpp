#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imgprops/raster.hpp"

namespace imgprops {

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

/// Decodes a PNG or JPEG stream into RGB8. Grayscale sources are expanded to
/// three identical channels and alpha is dropped (not composited).
RasterImage decode_image(std::span<const std::uint8_t> bytes);
RasterImage decode_file(const std::string& path);

/// Number of successful decode_image calls in this process. Instrumentation
/// for the batch driver's decode-once contract.
std::uint64_t decode_count() noexcept;

std::vector<std::uint8_t> encode_png(const RasterImage& img);
std::vector<std::uint8_t> encode_jpeg(const RasterImage& img, int quality = 95);

// ---------------------------------------------------------------------------
// Color conversion
// ---------------------------------------------------------------------------

/// BT.601 luma weights used by every grayscale conversion.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

RasterImage to_grayscale(const RasterImage& img);

/// sRGB (D65) to CIELAB.
RasterImage rgb_to_lab(const RasterImage& img);
/// Hexcone HSV with H in [0,1). Achromatic pixels get H = 0.
RasterImage rgb_to_hsv(const RasterImage& img);
/// HSV back to RGB8, rounded per channel.
RasterImage hsv_to_rgb(const RasterImage& img);

struct Lab {
  double l, a, b;
};
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

struct Hsv {
  double h, s, v;
};
Hsv srgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

// ---------------------------------------------------------------------------
// Geometry and resampling
// ---------------------------------------------------------------------------

enum class ResizeFilter { Bilinear, NearestNeighbor };

struct ResizePolicy {
  enum class Mode { None, LongSideTo, MaxPixels, Exact };

  Mode mode = Mode::None;
  int n = 0;
  int width = 0;
  int height = 0;
  ResizeFilter filter = ResizeFilter::Bilinear;

  static ResizePolicy none() { return {}; }
  static ResizePolicy long_side_to(int n, ResizeFilter f = ResizeFilter::Bilinear);
  static ResizePolicy max_pixels(int n, ResizeFilter f = ResizeFilter::Bilinear);
  static ResizePolicy exact(int w, int h, ResizeFilter f = ResizeFilter::Bilinear);
  /// Exact size whose area is as close as possible to `pixels`, aspect kept.
  /// Scales up as well as down.
  static ResizePolicy area(int src_w, int src_h, int pixels,
                           ResizeFilter f = ResizeFilter::Bilinear);

  friend bool operator==(const ResizePolicy&, const ResizePolicy&) = default;
};

struct Size {
  int width;
  int height;
  friend bool operator==(const Size&, const Size&) = default;
};

/// Output dimensions `resize` would produce.
Size target_size(int width, int height, const ResizePolicy& policy);

RasterImage resize(const RasterImage& img, const ResizePolicy& policy);
Plane resize(const Plane& plane, int width, int height, ResizeFilter filter);

/// Gray8 in, Gray8 out: max(w,h) square, original centered, padding filled
/// with the rounded mean of the original pixels.
RasterImage pad_to_square_mean_gray(const RasterImage& img);
/// Largest centered power-of-two square. Throws TooSmall if min(w,h) < 2.
RasterImage crop_center_square_pow2(const RasterImage& img);
/// Largest centered square.
RasterImage crop_center_square(const RasterImage& img);
RasterImage crop(const RasterImage& img, int x0, int y0, int width, int height);

RasterImage rotate_hue(const RasterImage& img, double degrees);

RasterImage mirror_left_right(const RasterImage& img);
RasterImage mirror_up_down(const RasterImage& img);
RasterImage rotate_180(const RasterImage& img);
RasterImage rotate_90(const RasterImage& img);
RasterImage transpose(const RasterImage& img);

// ---------------------------------------------------------------------------
// Plane extraction
// ---------------------------------------------------------------------------

Plane channel_plane(const RasterImage& img, int channel);
/// Gray values: RGB8 goes through to_grayscale (rounded 8-bit luma), Gray8
/// and GrayF are taken as they are.
Plane gray_plane(const RasterImage& img);
/// Lab L* for RGB8 and Lab inputs; gray inputs are used as they are.
Plane lightness_plane(const RasterImage& img);

Plane crop_center_square_pow2(const Plane& plane);
Plane crop_center_square(const Plane& plane);

[[nodiscard]] constexpr bool is_pow2(int v) noexcept { return v > 0 && (v & (v - 1)) == 0; }
/// Largest power of two <= v, v >= 1.
[[nodiscard]] int floor_pow2(int v) noexcept;

}  // namespace imgprops
