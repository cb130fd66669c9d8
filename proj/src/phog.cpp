#include "imgprops/phog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"

namespace imgprops::phog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RasterImage prepared(const RasterImage& img, const PhogOptions& options) {
  if (options.normalize_pixels <= 0) return img;
  return resize(img, ResizePolicy::area(img.width(), img.height(), options.normalize_pixels));
}

void channel_gradient(const Plane& p, GradientOperator op, int x, int y, double& dx, double& dy) {
  const int w = p.width, h = p.height;
  const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
  const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
  if (op == GradientOperator::CentralDifference) {
    dx = (p.at(xp, y) - p.at(xm, y)) * 0.5;
    dy = (p.at(x, yp) - p.at(x, ym)) * 0.5;
    return;
  }
  dx = ((p.at(xp, ym) - p.at(xm, ym)) + 2.0 * (p.at(xp, y) - p.at(xm, y)) +
        (p.at(xp, yp) - p.at(xm, yp))) / 8.0;
  dy = ((p.at(xm, yp) - p.at(xm, ym)) + 2.0 * (p.at(x, yp) - p.at(x, ym)) +
        (p.at(xp, yp) - p.at(xp, ym))) / 8.0;
}

}  // namespace

GradientImage gradient_image(std::span<const Plane> channels, GradientOperator op) {
  if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "gradient needs at least one channel");
  const int w = channels[0].width, h = channels[0].height;
  GradientImage out{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0),
                    std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double best = -1.0, bdx = 0.0, bdy = 0.0;
      for (const Plane& ch : channels) {
        double dx, dy;
        channel_gradient(ch, op, x, y, dx, dy);
        const double m = std::sqrt(dx * dx + dy * dy);
        if (m > best) {
          best = m;
          bdx = dx;
          bdy = dy;
        }
      }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      out.magnitude[i] = best;
      if (best > 0.0) {
        double theta = std::atan2(bdy, bdx);
        if (theta < 0.0) theta += kTwoPi;
        if (theta >= kTwoPi) theta -= kTwoPi;
        out.orientation[i] = theta;
      }
    }
  }
  return out;
}

GradientImage gradient_image(const RasterImage& img, GradientOperator op) {
  switch (img.space()) {
    case ColorSpace::RGB8: {
      const RasterImage lab = rgb_to_lab(img);
      const std::array<Plane, 3> ch{channel_plane(lab, 0), channel_plane(lab, 1), channel_plane(lab, 2)};
      return gradient_image(ch, op);
    }
    case ColorSpace::Lab: {
      const std::array<Plane, 3> ch{channel_plane(img, 0), channel_plane(img, 1), channel_plane(img, 2)};
      return gradient_image(ch, op);
    }
    case ColorSpace::Gray8:
    case ColorSpace::GrayF: {
      const std::array<Plane, 1> ch{channel_plane(img, 0)};
      return gradient_image(ch, op);
    }
    default: throw Error(ErrorCode::WrongColorSpace, "gradient_image does not accept HSV");
  }
}

int orientation_bin(double radians, int bins, OrientationSpan span) noexcept {
  const double period = span == OrientationSpan::Full360 ? kTwoPi : std::numbers::pi;
  double t = std::fmod(radians, period);
  if (t < 0.0) t += period;
  const int b = static_cast<int>(std::floor(t / period * bins));
  return std::clamp(b, 0, bins - 1);
}

std::array<int, 2> section_range(int extent, int parts, int index) noexcept {
  const int base = extent / parts;
  const int begin = index * base;
  const int end = index == parts - 1 ? extent : begin + base;
  return {begin, end};
}

HogPyramid hog_pyramid(const GradientImage& grad, int bins, OrientationSpan span, int max_level) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bin count must be positive");
  if (max_level < 0) throw Error(ErrorCode::InvalidArgument, "pyramid level must be >= 0");
  HogPyramid out;
  out.bins = bins;
  out.span = span;
  // Bin once per pixel; every level reuses the same assignment.
  std::vector<int> bin_of(grad.magnitude.size());
  for (std::size_t i = 0; i < bin_of.size(); ++i) bin_of[i] = orientation_bin(grad.orientation[i], bins, span);
  for (int level = 0; level <= max_level; ++level) {
    const int n = 1 << level;
    std::vector<std::vector<double>> sections(static_cast<std::size_t>(n) * n, std::vector<double>(bins, 0.0));
    for (int sy = 0; sy < n; ++sy) {
      const auto [y0, y1] = section_range(grad.height, n, sy);
      for (int sx = 0; sx < n; ++sx) {
        const auto [x0, x1] = section_range(grad.width, n, sx);
        auto& h = sections[static_cast<std::size_t>(sy) * n + sx];
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * grad.width + x;
            h[bin_of[i]] += grad.magnitude[i];
          }
        }
      }
    }
    out.hist.push_back(std::move(sections));
  }
  return out;
}

double histogram_intersection(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "histogram sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::min(a[i], b[i]);
  return s;
}

std::vector<double> normalized(std::span<const double> h) {
  const double total = std::accumulate(h.begin(), h.end(), 0.0);
  std::vector<double> out(h.begin(), h.end());
  if (total > 0.0) {
    for (double& v : out) v /= total;
  }
  return out;
}

double phog_complexity(const GradientImage& grad) {
  if (grad.magnitude.empty()) return 0.0;
  return std::accumulate(grad.magnitude.begin(), grad.magnitude.end(), 0.0) /
         static_cast<double>(grad.magnitude.size());
}

double phog_complexity(const RasterImage& img, const PhogOptions& options) {
  return phog_complexity(gradient_image(prepared(img, options), options.op));
}

double phog_anisotropy(const HogPyramid& pyramid, AnisotropyMode mode) {
  const auto& finest = pyramid.hist.back();
  std::vector<double> pooled;
  double per_section_sum = 0.0;
  int retained = 0;
  for (const auto& h : finest) {
    const double total = std::accumulate(h.begin(), h.end(), 0.0);
    if (total <= 0.0) continue;
    const auto n = normalized(h);
    ++retained;
    if (mode == AnisotropyMode::Pooled) {
      pooled.insert(pooled.end(), n.begin(), n.end());
      continue;
    }
    const double mean = 1.0 / static_cast<double>(n.size());
    double sq = 0.0;
    for (double v : n) sq += (v - mean) * (v - mean);
    per_section_sum += std::sqrt(sq / static_cast<double>(n.size()));
  }
  if (retained == 0) return 0.0;
  if (mode == AnisotropyMode::PerSection) return per_section_sum / retained;
  const double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / static_cast<double>(pooled.size());
  double sq = 0.0;
  for (double v : pooled) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(pooled.size()));
}

double phog_anisotropy(const RasterImage& img, const PhogOptions& options) {
  const auto grad = gradient_image(prepared(img, options), options.op);
  return phog_anisotropy(hog_pyramid(grad, options.bins, options.span, 3), options.anisotropy);
}

std::vector<double> level_similarities(const HogPyramid& pyramid) {
  const auto ground = normalized(pyramid.hist.at(0).at(0));
  std::vector<double> out;
  for (int level = 1; level < pyramid.levels(); ++level) {
    double sum = 0.0;
    for (const auto& h : pyramid.hist[level]) {
      // A flat section has no orientation content to compare; count it as a match.
      const bool flat = std::accumulate(h.begin(), h.end(), 0.0) <= 0.0;
      sum += flat ? 1.0 : histogram_intersection(normalized(h), ground);
    }
    out.push_back(sum / static_cast<double>(pyramid.hist[level].size()));
  }
  return out;
}

double phog_self_similarity(const HogPyramid& pyramid, std::span<const double> level_weights) {
  if (static_cast<int>(level_weights.size()) != pyramid.levels() - 1) {
    throw Error(ErrorCode::InvalidArgument, "need one weight per pyramid level above ground");
  }
  double wsum = 0.0;
  for (double w : level_weights) {
    if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "level weights must be nonnegative");
    wsum += w;
  }
  if (wsum <= 0.0) throw Error(ErrorCode::InvalidArgument, "level weights must not all be zero");
  const auto& ground = pyramid.hist.at(0).at(0);
  if (std::accumulate(ground.begin(), ground.end(), 0.0) <= 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const auto sims = level_similarities(pyramid);
  double acc = 0.0;
  for (std::size_t i = 0; i < sims.size(); ++i) acc += level_weights[i] * sims[i];
  return acc / wsum;
}

double phog_self_similarity(const RasterImage& img, const PhogOptions& options) {
  const auto grad = gradient_image(prepared(img, options), options.op);
  return phog_self_similarity(hog_pyramid(grad, options.bins, options.span, 3), options.level_weights);
}

}  // namespace imgprops::phog
