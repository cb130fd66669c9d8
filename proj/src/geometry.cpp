#include <algorithm>
#include <cmath>
#include <string>

#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"

namespace imgprops {

namespace {

void check_positive(int v, const char* what) {
  if (v < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be >= 1");
}

struct Tap {
  int i0;
  int i1;
  double t;
};

// Pixel-center aligned source coordinates for one axis.
std::vector<Tap> axis_taps(int src, int dst, ResizeFilter filter) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    const double s = (i + 0.5) * scale - 0.5;
    if (filter == ResizeFilter::NearestNeighbor) {
      const int n = std::clamp(static_cast<int>(std::floor((i + 0.5) * scale)), 0, src - 1);
      taps[i] = {n, n, 0.0};
      continue;
    }
    const double c = std::clamp(s, 0.0, static_cast<double>(src - 1));
    const int i0 = static_cast<int>(std::floor(c));
    const int i1 = std::min(i0 + 1, src - 1);
    taps[i] = {i0, i1, c - i0};
  }
  return taps;
}

// a + t(b - a) returns a exactly when a == b, which keeps flat regions flat.
inline double lerp(double a, double b, double t) { return a + t * (b - a); }

template <typename Get, typename Put>
void resample(int sw, int sh, int dw, int dh, int channels, ResizeFilter filter, Get get,
              Put put) {
  const auto tx = axis_taps(sw, dw, filter);
  const auto ty = axis_taps(sh, dh, filter);
  for (int y = 0; y < dh; ++y) {
    const Tap& vy = ty[y];
    for (int x = 0; x < dw; ++x) {
      const Tap& vx = tx[x];
      for (int c = 0; c < channels; ++c) {
        const double top = lerp(get(vx.i0, vy.i0, c), get(vx.i1, vy.i0, c), vx.t);
        const double bottom = lerp(get(vx.i0, vy.i1, c), get(vx.i1, vy.i1, c), vx.t);
        put(x, y, c, lerp(top, bottom, vy.t));
      }
    }
  }
}

std::uint8_t to_u8(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

template <typename Map>
RasterImage remap(const RasterImage& img, int out_w, int out_h, Map map) {
  RasterImage out(out_w, out_h, img.space());
  const int c = img.channels();
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const auto [sx, sy] = map(x, y);
      for (int k = 0; k < c; ++k) {
        if (is_integral(img.space())) {
          out.bytes()[out.index(x, y, k)] = img.bytes()[img.index(sx, sy, k)];
        } else {
          out.reals()[out.index(x, y, k)] = img.reals()[img.index(sx, sy, k)];
        }
      }
    }
  }
  return out;
}

struct Point {
  int x;
  int y;
};

}  // namespace

int floor_pow2(int v) noexcept {
  int p = 1;
  while (p <= v / 2) p *= 2;
  return p;
}

ResizePolicy ResizePolicy::long_side_to(int n, ResizeFilter f) {
  check_positive(n, "LongSideTo n");
  return {Mode::LongSideTo, n, 0, 0, f};
}

ResizePolicy ResizePolicy::max_pixels(int n, ResizeFilter f) {
  check_positive(n, "MaxPixels n");
  return {Mode::MaxPixels, n, 0, 0, f};
}

ResizePolicy ResizePolicy::exact(int w, int h, ResizeFilter f) {
  check_positive(w, "Exact width");
  check_positive(h, "Exact height");
  return {Mode::Exact, 0, w, h, f};
}

ResizePolicy ResizePolicy::area(int src_w, int src_h, int pixels, ResizeFilter f) {
  check_positive(pixels, "area pixels");
  const double s = std::sqrt(static_cast<double>(pixels) / (static_cast<double>(src_w) * src_h));
  const int w = std::max(1, static_cast<int>(std::lround(src_w * s)));
  const int h = std::max(1, static_cast<int>(std::lround(src_h * s)));
  return exact(w, h, f);
}

Size target_size(int width, int height, const ResizePolicy& policy) {
  switch (policy.mode) {
    case ResizePolicy::Mode::None: return {width, height};
    case ResizePolicy::Mode::Exact: return {policy.width, policy.height};
    case ResizePolicy::Mode::LongSideTo: {
      if (width >= height) {
        const double s = static_cast<double>(policy.n) / width;
        return {policy.n, std::max(1, static_cast<int>(std::lround(height * s)))};
      }
      const double s = static_cast<double>(policy.n) / height;
      return {std::max(1, static_cast<int>(std::lround(width * s))), policy.n};
    }
    case ResizePolicy::Mode::MaxPixels: {
      const double area = static_cast<double>(width) * height;
      if (area <= policy.n) return {width, height};
      const double s = std::sqrt(policy.n / area);
      int w = std::max(1, static_cast<int>(std::floor(width * s)));
      int h = std::max(1, static_cast<int>(std::floor(height * s)));
      return {w, h};
    }
  }
  return {width, height};
}

RasterImage resize(const RasterImage& img, const ResizePolicy& policy) {
  const Size size = target_size(img.width(), img.height(), policy);
  if (size.width == img.width() && size.height == img.height()) return img;
  RasterImage out(size.width, size.height, img.space());
  const int c = img.channels();
  if (is_integral(img.space())) {
    const auto src = img.bytes();
    auto dst = out.bytes();
    resample(
        img.width(), img.height(), size.width, size.height, c, policy.filter,
        [&](int x, int y, int k) { return static_cast<double>(src[img.index(x, y, k)]); },
        [&](int x, int y, int k, double v) { dst[out.index(x, y, k)] = to_u8(v); });
  } else {
    const auto src = img.reals();
    auto dst = out.reals();
    resample(
        img.width(), img.height(), size.width, size.height, c, policy.filter,
        [&](int x, int y, int k) { return src[img.index(x, y, k)]; },
        [&](int x, int y, int k, double v) { dst[out.index(x, y, k)] = v; });
  }
  return out;
}

Plane resize(const Plane& plane, int width, int height, ResizeFilter filter) {
  check_positive(width, "resize width");
  check_positive(height, "resize height");
  if (width == plane.width && height == plane.height) return plane;
  Plane out(width, height);
  resample(
      plane.width, plane.height, width, height, 1, filter,
      [&](int x, int y, int) { return plane.at(x, y); },
      [&](int x, int y, int, double v) { out.at(x, y) = v; });
  return out;
}

RasterImage pad_to_square_mean_gray(const RasterImage& img) {
  if (img.space() != ColorSpace::Gray8) {
    throw Error(ErrorCode::WrongColorSpace, "pad_to_square_mean_gray expects Gray8");
  }
  if (img.width() == img.height()) return img;
  const auto src = img.bytes();
  std::uint64_t sum = 0;
  for (auto v : src) sum += v;
  const auto fill =
      static_cast<std::uint8_t>(std::lround(static_cast<double>(sum) / src.size()));
  const int side = std::max(img.width(), img.height());
  const int ox = (side - img.width()) / 2;
  const int oy = (side - img.height()) / 2;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(side) * side, fill);
  for (int y = 0; y < img.height(); ++y) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(img.index(0, y)), img.width(),
                out.begin() + static_cast<std::ptrdiff_t>((y + oy) * side + ox));
  }
  return RasterImage::from_bytes(side, side, ColorSpace::Gray8, std::move(out));
}

RasterImage crop(const RasterImage& img, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 1 || height < 1 || x0 + width > img.width() ||
      y0 + height > img.height()) {
    throw Error(ErrorCode::InvalidArgument, "crop window outside image");
  }
  return remap(img, width, height, [&](int x, int y) { return Point{x + x0, y + y0}; });
}

RasterImage crop_center_square_pow2(const RasterImage& img) {
  const int m = std::min(img.width(), img.height());
  if (m < 2) throw Error(ErrorCode::TooSmall, "power-of-two crop needs min side >= 2");
  const int side = floor_pow2(m);
  if (side == img.width() && side == img.height()) return img;
  return crop(img, (img.width() - side) / 2, (img.height() - side) / 2, side, side);
}

RasterImage crop_center_square(const RasterImage& img) {
  const int side = std::min(img.width(), img.height());
  if (side == img.width() && side == img.height()) return img;
  return crop(img, (img.width() - side) / 2, (img.height() - side) / 2, side, side);
}

namespace {

Plane crop_plane(const Plane& plane, int side) {
  const int ox = (plane.width - side) / 2;
  const int oy = (plane.height - side) / 2;
  Plane out(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) out.at(x, y) = plane.at(x + ox, y + oy);
  }
  return out;
}

}  // namespace

Plane crop_center_square_pow2(const Plane& plane) {
  const int m = std::min(plane.width, plane.height);
  if (m < 2) throw Error(ErrorCode::TooSmall, "power-of-two crop needs min side >= 2");
  const int side = floor_pow2(m);
  if (side == plane.width && side == plane.height) return plane;
  return crop_plane(plane, side);
}

Plane crop_center_square(const Plane& plane) {
  const int side = std::min(plane.width, plane.height);
  if (side == plane.width && side == plane.height) return plane;
  return crop_plane(plane, side);
}

RasterImage mirror_left_right(const RasterImage& img) {
  const int w = img.width();
  return remap(img, w, img.height(), [&](int x, int y) { return Point{w - 1 - x, y}; });
}

RasterImage mirror_up_down(const RasterImage& img) {
  const int h = img.height();
  return remap(img, img.width(), h, [&](int x, int y) { return Point{x, h - 1 - y}; });
}

RasterImage rotate_180(const RasterImage& img) {
  const int w = img.width();
  const int h = img.height();
  return remap(img, w, h, [&](int x, int y) { return Point{w - 1 - x, h - 1 - y}; });
}

RasterImage rotate_90(const RasterImage& img) {
  // Clockwise: output (x, y) comes from source (y, h - 1 - x).
  const int h = img.height();
  return remap(img, h, img.width(), [&](int x, int y) { return Point{y, h - 1 - x}; });
}

RasterImage transpose(const RasterImage& img) {
  return remap(img, img.height(), img.width(), [](int x, int y) { return Point{y, x}; });
}

}  // namespace imgprops
