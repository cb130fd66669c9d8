#include <algorithm>
#include <array>
#include <cmath>

#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"

namespace imgprops {

namespace {

// sRGB primaries, D65.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// White point taken as the matrix row sums, so every neutral gray lands on
// a* = b* = 0. Normalized tristimulus values are written as green plus
// weighted offsets; for r == g == b the offsets vanish exactly.
constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

const std::array<double, 256>& linear_lut() {
  static const std::array<double, 256> lut = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return lut;
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

void require(const RasterImage& img, ColorSpace space, const char* op) {
  if (img.space() != space) {
    throw Error(ErrorCode::WrongColorSpace, std::string(op) + " expects a different color space");
  }
}

std::uint8_t to_u8(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

}  // namespace

Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const auto& lut = linear_lut();
  const double lr = lut[r], lg = lut[g], lb = lut[b];
  const double dr = lr - lg, db = lb - lg;
  const double x = lg + (kRgbToXyz[0][0] * dr + kRgbToXyz[0][2] * db) / kWhiteX;
  const double y = lg + (kRgbToXyz[1][0] * dr + kRgbToXyz[1][2] * db) / kWhiteY;
  const double z = lg + (kRgbToXyz[2][0] * dr + kRgbToXyz[2][2] * db) / kWhiteZ;
  const double fx = lab_f(x);
  const double fy = lab_f(y);
  const double fz = lab_f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Hsv srgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) noexcept {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out{0.0, mx > 0.0 ? delta / mx : 0.0, mx};
  if (delta > 0.0) {
    double h;
    if (mx == r) {
      h = (g - b) / delta;
      if (h < 0.0) h += 6.0;
    } else if (mx == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    out.h = h / 6.0;
    if (out.h >= 1.0) out.h -= 1.0;
  }
  return out;
}

RasterImage to_grayscale(const RasterImage& img) {
  require(img, ColorSpace::RGB8, "to_grayscale");
  const auto src = img.bytes();
  std::vector<std::uint8_t> out(img.pixel_count());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double y = kLumaR * src[3 * p] + kLumaG * src[3 * p + 1] + kLumaB * src[3 * p + 2];
    out[p] = to_u8(y);
  }
  return RasterImage::from_bytes(img.width(), img.height(), ColorSpace::Gray8, std::move(out));
}

RasterImage rgb_to_lab(const RasterImage& img) {
  require(img, ColorSpace::RGB8, "rgb_to_lab");
  const auto src = img.bytes();
  std::vector<double> out(src.size());
  for (std::size_t p = 0, n = img.pixel_count(); p < n; ++p) {
    const Lab lab = srgb_to_lab(src[3 * p], src[3 * p + 1], src[3 * p + 2]);
    out[3 * p] = lab.l;
    out[3 * p + 1] = lab.a;
    out[3 * p + 2] = lab.b;
  }
  return RasterImage::from_reals(img.width(), img.height(), ColorSpace::Lab, std::move(out));
}

RasterImage rgb_to_hsv(const RasterImage& img) {
  require(img, ColorSpace::RGB8, "rgb_to_hsv");
  const auto src = img.bytes();
  std::vector<double> out(src.size());
  for (std::size_t p = 0, n = img.pixel_count(); p < n; ++p) {
    const Hsv hsv = srgb_to_hsv(src[3 * p], src[3 * p + 1], src[3 * p + 2]);
    out[3 * p] = hsv.h;
    out[3 * p + 1] = hsv.s;
    out[3 * p + 2] = hsv.v;
  }
  return RasterImage::from_reals(img.width(), img.height(), ColorSpace::HSV, std::move(out));
}

RasterImage hsv_to_rgb(const RasterImage& img) {
  require(img, ColorSpace::HSV, "hsv_to_rgb");
  const auto src = img.reals();
  std::vector<std::uint8_t> out(src.size());
  for (std::size_t p = 0, n = img.pixel_count(); p < n; ++p) {
    double h = src[3 * p] - std::floor(src[3 * p]);
    const double s = src[3 * p + 1];
    const double v = src[3 * p + 2];
    double r = v, g = v, b = v;
    if (s > 0.0) {
      h *= 6.0;
      const int sector = static_cast<int>(h) % 6;
      const double f = h - std::floor(h);
      const double p0 = v * (1.0 - s);
      const double q = v * (1.0 - s * f);
      const double t = v * (1.0 - s * (1.0 - f));
      switch (sector) {
        case 0: r = v; g = t; b = p0; break;
        case 1: r = q; g = v; b = p0; break;
        case 2: r = p0; g = v; b = t; break;
        case 3: r = p0; g = q; b = v; break;
        case 4: r = t; g = p0; b = v; break;
        default: r = v; g = p0; b = q; break;
      }
    }
    out[3 * p] = to_u8(r * 255.0);
    out[3 * p + 1] = to_u8(g * 255.0);
    out[3 * p + 2] = to_u8(b * 255.0);
  }
  return RasterImage::from_bytes(img.width(), img.height(), ColorSpace::RGB8, std::move(out));
}

RasterImage rotate_hue(const RasterImage& img, double degrees) {
  require(img, ColorSpace::RGB8, "rotate_hue");
  RasterImage hsv = rgb_to_hsv(img);
  const double turn = degrees / 360.0;
  auto data = hsv.reals();
  for (std::size_t p = 0, n = hsv.pixel_count(); p < n; ++p) {
    const double h = data[3 * p] + turn;
    data[3 * p] = h - std::floor(h);
  }
  return hsv_to_rgb(hsv);
}

Plane channel_plane(const RasterImage& img, int channel) {
  if (channel < 0 || channel >= img.channels()) {
    throw Error(ErrorCode::InvalidArgument, "channel index out of range");
  }
  Plane out(img.width(), img.height());
  const int c = img.channels();
  if (is_integral(img.space())) {
    const auto src = img.bytes();
    for (std::size_t p = 0; p < out.size(); ++p) out.data[p] = src[p * c + channel];
  } else {
    const auto src = img.reals();
    for (std::size_t p = 0; p < out.size(); ++p) out.data[p] = src[p * c + channel];
  }
  return out;
}

Plane gray_plane(const RasterImage& img) {
  switch (img.space()) {
    case ColorSpace::RGB8: return channel_plane(to_grayscale(img), 0);
    case ColorSpace::Gray8:
    case ColorSpace::GrayF: return channel_plane(img, 0);
    default: throw Error(ErrorCode::WrongColorSpace, "gray_plane expects RGB8, Gray8 or GrayF");
  }
}

Plane lightness_plane(const RasterImage& img) {
  switch (img.space()) {
    case ColorSpace::RGB8: {
      Plane out(img.width(), img.height());
      const auto src = img.bytes();
      for (std::size_t p = 0; p < out.size(); ++p) {
        out.data[p] = srgb_to_lab(src[3 * p], src[3 * p + 1], src[3 * p + 2]).l;
      }
      return out;
    }
    case ColorSpace::Lab:
    case ColorSpace::Gray8:
    case ColorSpace::GrayF: return channel_plane(img, 0);
    default: throw Error(ErrorCode::WrongColorSpace, "lightness_plane does not accept HSV");
  }
}

}  // namespace imgprops
