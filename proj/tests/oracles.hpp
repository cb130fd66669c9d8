#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance runner. Each one is written directly from the metric definition
// without reusing library internals beyond the per-pixel colour conversions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "imgprops/cnn.hpp"
#include "imgprops/fractal.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/phog.hpp"
#include "imgprops/raster.hpp"
#include "imgprops/stats.hpp"

namespace oracle {

using imgprops::ColorSpace;
using imgprops::Hsv;
using imgprops::Lab;
using imgprops::Plane;
using imgprops::RasterImage;
using imgprops::stats::StatsSpace;

inline double entropy_oracle(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= c / total * std::log2(c / total);
  }
  return h;
}

// Two-pass mean and population SD of one converted channel.
inline std::pair<double, double> channel_oracle(const RasterImage& img, StatsSpace space, int c) {
  std::vector<double> v;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto r = img.bytes()[img.index(x, y, 0)], g = img.bytes()[img.index(x, y, 1)],
                 b = img.bytes()[img.index(x, y, 2)];
      if (space == StatsSpace::RGB) {
        v.push_back(img.value(x, y, c));
      } else if (space == StatsSpace::Lab) {
        const Lab lab = imgprops::srgb_to_lab(r, g, b);
        v.push_back(c == 0 ? lab.l : c == 1 ? lab.a : lab.b);
      } else {
        const Hsv hsv = imgprops::srgb_to_hsv(r, g, b);
        v.push_back(c == 0 ? hsv.h : c == 1 ? hsv.s : hsv.v);
      }
    }
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(v.size()))};
}

/// Entropy of 256 equal L* bins over [0,100].
inline double lightness_entropy_oracle(const RasterImage& rgb) {
  std::vector<double> counts(256, 0.0);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const auto b = rgb.bytes();
      const Lab lab = imgprops::srgb_to_lab(b[rgb.index(x, y, 0)], b[rgb.index(x, y, 1)], b[rgb.index(x, y, 2)]);
      counts[std::min(255, static_cast<int>(lab.l / 100.0 * 256.0))] += 1.0;
    }
  }
  return entropy_oracle(counts);
}

// One RGB triple per L* bin, found by scanning the cube.
inline std::vector<std::array<std::uint8_t, 3>> one_color_per_lightness_bin() {
  std::map<int, std::array<std::uint8_t, 3>> found;
  for (int r = 0; r < 256 && found.size() < 256; ++r) {
    for (int g = 0; g < 256 && found.size() < 256; ++g) {
      for (int b = 0; b < 256; b += 3) {
        const Lab lab = imgprops::srgb_to_lab(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                              static_cast<std::uint8_t>(b));
        const int bin = std::min(255, static_cast<int>(lab.l / 100.0 * 256.0));
        found.try_emplace(bin, std::array<std::uint8_t, 3>{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                                            static_cast<std::uint8_t>(b)});
      }
    }
  }
  std::vector<std::array<std::uint8_t, 3>> out;
  for (auto& [bin, rgb] : found) out.push_back(rgb);
  return out;
}

inline RasterImage image_from_colors(const std::vector<std::array<std::uint8_t, 3>>& colors, int repeats) {
  const int w = static_cast<int>(colors.size());
  std::vector<std::uint8_t> px;
  for (int y = 0; y < repeats; ++y) {
    for (const auto& c : colors) px.insert(px.end(), c.begin(), c.end());
  }
  return RasterImage::from_bytes(w, repeats, ColorSpace::RGB8, std::move(px));
}

// Per-pixel central differences on the three Lab channels, strongest wins.
inline imgprops::phog::GradientImage gradient_oracle(const RasterImage& rgb) {
  constexpr double kPi = std::numbers::pi;
  const int w = rgb.width(), h = rgb.height();
  std::vector<std::array<double, 3>> lab(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto b = rgb.bytes();
      const Lab v = imgprops::srgb_to_lab(b[rgb.index(x, y, 0)], b[rgb.index(x, y, 1)], b[rgb.index(x, y, 2)]);
      lab[static_cast<std::size_t>(y) * w + x] = {v.l, v.a, v.b};
    }
  }
  auto at = [&](int x, int y, int c) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return lab[static_cast<std::size_t>(y) * w + x][c];
  };
  imgprops::phog::GradientImage g{w, h, std::vector<double>(lab.size()), std::vector<double>(lab.size())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double best = -1.0, angle = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double dx = (at(x + 1, y, c) - at(x - 1, y, c)) / 2.0;
        const double dy = (at(x, y + 1, c) - at(x, y - 1, c)) / 2.0;
        const double m = std::hypot(dx, dy);
        if (m > best) {
          best = m;
          angle = std::atan2(dy, dx);
        }
      }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      g.magnitude[i] = best;
      g.orientation[i] = best > 0.0 ? (angle < 0.0 ? angle + 2.0 * kPi : angle) : 0.0;
    }
  }
  return g;
}

inline std::vector<double> section_hist_oracle(const imgprops::phog::GradientImage& g, int level, int sx, int sy,
                                               int bins) {
  constexpr double kPi = std::numbers::pi;
  const int n = 1 << level;
  const int bw = g.width / n, bh = g.height / n;
  const int x0 = sx * bw, x1 = sx == n - 1 ? g.width : x0 + bw;
  const int y0 = sy * bh, y1 = sy == n - 1 ? g.height : y0 + bh;
  std::vector<double> h(bins, 0.0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * g.width + x;
      const int b = std::min(bins - 1, static_cast<int>(g.orientation[i] / (2.0 * kPi) * bins));
      h[b] += g.magnitude[i];
    }
  }
  return h;
}

inline std::vector<double> unit_sum(std::vector<double> h) {
  double s = 0.0;
  for (double v : h) s += v;
  if (s > 0.0) {
    for (double& v : h) v /= s;
  }
  return h;
}

/// Equal-weight mean over levels 1..3 of the mean section-vs-ground HIK.
inline double phog_self_similarity_oracle(const imgprops::phog::GradientImage& g, int bins = 16) {
  const auto ground = unit_sum(section_hist_oracle(g, 0, 0, 0, bins));
  double total = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const int n = 1 << k;
    double level = 0.0;
    for (int sy = 0; sy < n; ++sy) {
      for (int sx = 0; sx < n; ++sx) {
        const auto h = unit_sum(section_hist_oracle(g, k, sx, sy, bins));
        for (int b = 0; b < bins; ++b) level += std::min(h[b], ground[b]);
      }
    }
    total += level / (n * n);
  }
  return total / 3.0;
}

// Boxes of side l containing a pixel whose 4-neighbour has the other value.
inline double boundary_boxes_oracle(const imgprops::fractal::Mask& m, int l) {
  double n = 0.0;
  for (int by = 0; by < m.height; by += l) {
    for (int bx = 0; bx < m.width; bx += l) {
      bool hit = false;
      for (int y = by; y < by + l && !hit; ++y) {
        for (int x = bx; x < bx + l && !hit; ++x) {
          const int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
          for (int k = 0; k < 4; ++k) {
            const int nx = x + dx[k], ny = y + dy[k];
            if (nx < 0 || ny < 0 || nx >= m.width || ny >= m.height) continue;
            if (m.at(nx, ny) != m.at(x, y)) hit = true;
          }
        }
      }
      n += hit ? 1.0 : 0.0;
    }
  }
  return n;
}

inline double score(double a, double b) { return a + b > 0.0 ? 100.0 * std::abs(a - b) / (a + b) : 0.0; }

// Region sums written from pixel-centre geometry.
inline std::array<double, 8> comparisons_oracle(const Plane& m) {
  const int w = m.width, h = m.height;
  double left = 0, right = 0, top = 0, bottom = 0, da = 0, db = 0, aa = 0, ab = 0;
  std::vector<double> col(w, 0.0), row(h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = m.at(x, y);
      col[x] += v;
      row[y] += v;
      if (2 * x + 1 < w) left += v;
      if (2 * x + 1 > w) right += v;
      if (2 * y + 1 < h) top += v;
      if (2 * y + 1 > h) bottom += v;
      const double u = (x + 0.5) / w, t = (y + 0.5) / h;
      if (u > t) da += v;
      if (u < t) db += v;
      if (u + t < 1.0) aa += v;
      if (u + t > 1.0) ab += v;
    }
  }
  auto outer_inner = [](const std::vector<double>& line) {
    const int n = static_cast<int>(line.size()), q = n / 2 / 2;
    double outer = 0, inner = 0;
    for (int i = 0; i < n; ++i) {
      const int d = std::min(i, n - 1 - i);  // distance from the nearer border
      if (2 * i + 1 == n) continue;
      if (d < q) outer += line[i];
      if (d >= n / 2 - q) inner += line[i];
    }
    return score(outer, inner);
  };
  auto pairs = [](const std::vector<double>& line) {
    const int n = static_cast<int>(line.size());
    double num = 0, den = 0;
    for (int i = 0; i < n / 2; ++i) {
      num += std::abs(line[i] - line[n - 1 - i]);
      den += line[i] + line[n - 1 - i];
    }
    return den > 0 ? 100.0 * num / den : 0.0;
  };
  return {score(left, right), score(top, bottom), score(da, db), score(aa, ab),
          outer_inner(col),   outer_inner(row),   pairs(col),    pairs(row)};
}

/// Centre-of-mass offset as a percentage of the half-diagonal.
inline double dcm_oracle(const Plane& m) {
  double t = 0, sx = 0, sy = 0;
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      t += m.at(x, y);
      sx += m.at(x, y) * x;
      sy += m.at(x, y) * y;
    }
  }
  const double cx = (m.width - 1) / 2.0, cy = (m.height - 1) / 2.0;
  return 100.0 * std::hypot(sx / t - cx, sy / t - cy) / std::hypot(cx, cy);
}

// Max pooling with explicit cell bounds, remainder to the last cell.
inline std::vector<double> pooled_oracle(const imgprops::cnn::Conv1Responses& r, int n) {
  std::vector<double> out;
  for (int k = 0; k < r.filters; ++k) {
    for (int gy = 0; gy < n; ++gy) {
      for (int gx = 0; gx < n; ++gx) {
        const int x0 = gx * (r.width / n), x1 = gx == n - 1 ? r.width : x0 + r.width / n;
        const int y0 = gy * (r.height / n), y1 = gy == n - 1 ? r.height : y0 + r.height / n;
        double m = -1e300;
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) m = std::max(m, r.at(k, x, y));
        }
        out.push_back(m);
      }
    }
  }
  return out;
}

inline double variance_oracle(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

inline double median_oracle(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Sparseness and variability from the pooled grid.
inline std::pair<double, double> cnn_variances_oracle(const imgprops::cnn::Conv1Responses& r, int n) {
  const auto pooled = pooled_oracle(r, n);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<double> per_filter;
  for (int k = 0; k < r.filters; ++k) {
    per_filter.push_back(variance_oracle(std::vector<double>(pooled.begin() + static_cast<std::ptrdiff_t>(k * cells),
                                                             pooled.begin() + static_cast<std::ptrdiff_t>((k + 1) * cells))));
  }
  return {variance_oracle(pooled), median_oracle(per_filter)};
}

}  // namespace oracle
