#include "imgprops/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/phog.hpp"
#include "imgprops/stats.hpp"

namespace imgprops::balance {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double reflection_term(const Plane& g, auto reflect) {
  double diff = 0.0;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const auto [rx, ry] = reflect(x, y);
      diff += std::abs(g.at(x, y) - g.at(rx, ry));
    }
  }
  return 100.0 * (1.0 - diff / (255.0 * static_cast<double>(g.size())));
}

double paired_score(double a, double b) {
  const double total = a + b;
  return total > 0.0 ? 100.0 * std::abs(a - b) / total : 0.0;
}

struct Pt {
  int x;
  int y;
};

// First moment about the centre from mirrored pairs of marginal sums, so a
// mass that is symmetric along the axis gives exactly 0.
double centred_moment(const std::vector<double>& marginal) {
  const int n = static_cast<int>(marginal.size());
  const double c = (n - 1) / 2.0;
  double moment = 0.0;
  for (int i = 0; i < n / 2; ++i) moment += (marginal[i] - marginal[n - 1 - i]) * (i - c);
  return moment;
}

}  // namespace

MirrorTerms mirror_terms(const Plane& g) {
  const int w = g.width, h = g.height;
  MirrorTerms t;
  t.vertical = reflection_term(g, [w](int x, int y) { return Pt{w - 1 - x, y}; });
  t.horizontal = reflection_term(g, [h](int x, int y) { return Pt{x, h - 1 - y}; });
  if (w == h) {
    t.diagonal = reflection_term(g, [](int x, int y) { return Pt{y, x}; });
    t.anti_diagonal = reflection_term(g, [w](int x, int y) { return Pt{w - 1 - y, w - 1 - x}; });
  } else {
    t.diagonal = t.anti_diagonal = kNaN;
  }
  return t;
}

double mirror_symmetry(const Plane& g) {
  const MirrorTerms t = mirror_terms(g);
  if (g.width == g.height) return (t.vertical + t.horizontal + t.diagonal + t.anti_diagonal) / 4.0;
  return (t.vertical + t.horizontal) / 2.0;
}

double mirror_symmetry(const RasterImage& img) { return mirror_symmetry(gray_plane(img)); }

Plane perceptual_mass(const RasterImage& img) {
  Plane g = gray_plane(img);
  for (double& v : g.data) v = (255.0 - v) / 255.0;
  return g;
}

std::array<double, 8> balance_comparisons(const Plane& m) {
  const int w = m.width, h = m.height;
  const long long W = w, H = h;
  const int pairs_x = w / 2, pairs_y = h / 2;
  const int qx = pairs_x / 2, qy = pairs_y / 2;

  std::vector<double> col(static_cast<std::size_t>(w), 0.0), row(static_cast<std::size_t>(h), 0.0);
  double diag_a = 0.0, diag_b = 0.0, anti_a = 0.0, anti_b = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = m.at(x, y);
      col[x] += v;
      row[y] += v;
      const long long s = (2LL * x + 1) * H - (2LL * y + 1) * W;
      if (s > 0) diag_a += v;
      if (s < 0) diag_b += v;
      const long long t = (2LL * x + 1) * H + (2LL * y + 1) * W - 2 * W * H;
      if (t < 0) anti_a += v;
      if (t > 0) anti_b += v;
    }
  }

  auto halves = [](const std::vector<double>& line) {
    const int n = static_cast<int>(line.size());
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n / 2; ++i) a += line[i];
    for (int i = (n + 1) / 2; i < n; ++i) b += line[i];
    return paired_score(a, b);
  };
  // Outer: the q mirror pairs farthest from the centre; inner: the q pairs
  // nearest to it (centre line excluded).
  auto outer_inner = [](const std::vector<double>& line, int pairs, int q) {
    const int n = static_cast<int>(line.size());
    double outer = 0.0, inner = 0.0;
    for (int i = 0; i < q; ++i) outer += line[i] + line[n - 1 - i];
    for (int i = pairs - q; i < pairs; ++i) inner += line[i] + line[n - 1 - i];
    return paired_score(outer, inner);
  };
  auto mirror_pairs = [](const std::vector<double>& line) {
    const int n = static_cast<int>(line.size());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n / 2; ++i) {
      num += std::abs(line[i] - line[n - 1 - i]);
      den += line[i] + line[n - 1 - i];
    }
    return den > 0.0 ? 100.0 * num / den : 0.0;
  };

  std::array<double, 8> out{};
  out[kLeftRight] = halves(col);
  out[kTopBottom] = halves(row);
  out[kMainDiagonal] = paired_score(diag_a, diag_b);
  out[kAntiDiagonal] = paired_score(anti_a, anti_b);
  out[kOuterInnerColumns] = outer_inner(col, pairs_x, qx);
  out[kOuterInnerRows] = outer_inner(row, pairs_y, qy);
  out[kColumnPairs] = mirror_pairs(col);
  out[kRowPairs] = mirror_pairs(row);
  return out;
}

double balance_score(const Plane& mass) {
  const auto c = balance_comparisons(mass);
  double s = 0.0;
  for (double v : c) s += v;
  return s / 8.0;
}

double balance_score(const RasterImage& img) { return balance_score(perceptual_mass(img)); }

double dcm(const Plane& m) {
  std::vector<double> cols(m.width, 0.0), rows(m.height, 0.0);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const double v = m.at(x, y);
      cols[x] += v;
      rows[y] += v;
    }
  }
  double total = 0.0;
  for (double r : rows) total += r;
  if (total <= 0.0) return kNaN;
  const double cx = (m.width - 1) / 2.0, cy = (m.height - 1) / 2.0;
  const double half_diag = std::hypot(cx, cy);
  if (half_diag == 0.0) return 0.0;
  return 100.0 * std::hypot(centred_moment(cols) / total, centred_moment(rows) / total) / half_diag;
}

double dcm(const RasterImage& img) { return dcm(perceptual_mass(img)); }

int otsu_threshold(const std::array<std::uint64_t, 256>& hist) {
  double total = 0.0, total_sum = 0.0;
  int levels = 0;
  for (int v = 0; v < 256; ++v) {
    total += static_cast<double>(hist[v]);
    total_sum += static_cast<double>(hist[v]) * v;
    if (hist[v] > 0) ++levels;
  }
  if (levels < 2) return -1;
  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_t = -1;
  for (int t = 0; t < 255; ++t) {
    w0 += static_cast<double>(hist[t]);
    sum0 += static_cast<double>(hist[t]) * t;
    const double w1 = total - w0;
    if (w0 <= 0.0 || w1 <= 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (total_sum - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

double homogeneity_of_mask(const std::vector<std::uint8_t>& black, int width, int height) {
  constexpr int kGrid = 10;
  if (std::min(width, height) < kGrid) throw Error(ErrorCode::TooSmall, "homogeneity needs min side >= 10");
  std::array<double, kGrid> rows{}, cols{};
  for (int gy = 0; gy < kGrid; ++gy) {
    const auto [y0, y1] = phog::section_range(height, kGrid, gy);
    for (int gx = 0; gx < kGrid; ++gx) {
      const auto [x0, x1] = phog::section_range(width, kGrid, gx);
      double n = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) n += black[static_cast<std::size_t>(y) * width + x];
      }
      rows[gy] += n;
      cols[gx] += n;
    }
  }
  double total = 0.0;
  for (double v : rows) total += v;
  if (total <= 0.0) return kNaN;
  const double hmax = std::log2(static_cast<double>(kGrid));
  const double hr = stats::shannon_entropy_bits(std::span<const double>(rows)) / hmax;
  const double hc = stats::shannon_entropy_bits(std::span<const double>(cols)) / hmax;
  return 100.0 * (hr + hc) / 2.0;
}

double homogeneity(const RasterImage& img) {
  if (std::min(img.width(), img.height()) < 10) throw Error(ErrorCode::TooSmall, "homogeneity needs min side >= 10");
  const Plane g = gray_plane(img);
  std::array<std::uint64_t, 256> hist{};
  for (double v : g.data) ++hist[static_cast<int>(std::clamp(std::round(v), 0.0, 255.0))];
  const int t = otsu_threshold(hist);
  if (t < 0) return kNaN;
  std::vector<std::uint8_t> black(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) black[i] = std::round(g.data[i]) <= t ? 1 : 0;
  return homogeneity_of_mask(black, g.width, g.height);
}

}  // namespace imgprops::balance
