#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace imgprops {

enum class ColorSpace { RGB8, Gray8, GrayF, Lab, HSV };

[[nodiscard]] constexpr int channel_count(ColorSpace space) noexcept {
  return (space == ColorSpace::Gray8 || space == ColorSpace::GrayF) ? 1 : 3;
}

[[nodiscard]] constexpr bool is_integral(ColorSpace space) noexcept {
  return space == ColorSpace::RGB8 || space == ColorSpace::Gray8;
}

/// Decoded pixel grid, row-major and channel-interleaved.
///
/// RGB8/Gray8 images store 8-bit samples; GrayF, Lab and HSV store doubles.
/// Lab keeps L in [0,100]; HSV keeps all three components in [0,1] with H
/// as a fraction of the full circle.
class RasterImage {
 public:
  RasterImage() = default;
  /// Zero-filled image.
  RasterImage(int width, int height, ColorSpace space);

  static RasterImage from_bytes(int width, int height, ColorSpace space,
                                std::vector<std::uint8_t> data);
  static RasterImage from_reals(int width, int height, ColorSpace space, std::vector<double> data);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] ColorSpace space() const noexcept { return space_; }
  [[nodiscard]] int channels() const noexcept { return channel_count(space_); }
  [[nodiscard]] std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  [[nodiscard]] bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  [[nodiscard]] std::span<std::uint8_t> bytes() noexcept { return bytes_; }
  [[nodiscard]] std::span<const double> reals() const noexcept { return reals_; }
  [[nodiscard]] std::span<double> reals() noexcept { return reals_; }

  [[nodiscard]] std::size_t index(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels()) +
           static_cast<std::size_t>(c);
  }

  /// Sample as double regardless of storage.
  [[nodiscard]] double value(int x, int y, int c = 0) const noexcept {
    const auto i = index(x, y, c);
    return is_integral(space_) ? static_cast<double>(bytes_[i]) : reals_[i];
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  ColorSpace space_ = ColorSpace::Gray8;
  std::vector<std::uint8_t> bytes_;
  std::vector<double> reals_;
};

/// Single real-valued channel; the working type of most metric kernels.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  [[nodiscard]] double& at(int x, int y) noexcept {
    return data[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x)];
  }
  [[nodiscard]] double at(int x, int y) const noexcept {
    return data[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x)];
  }
  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }
};

}  // namespace imgprops
