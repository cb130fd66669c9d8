#include "imgprops/edges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fft.hpp"
#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/stats.hpp"

namespace imgprops::edges {

namespace {

constexpr int kHalf = kOrientations / 2;

// numpy-style "reflect": d c b | a b c d | c b a
int reflect_index(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace

double GaborBank::angle_radians(int k) noexcept {
  return k * (2.0 * std::numbers::pi / kOrientations);
}

GaborBank::GaborBank(const GaborParams& params) : params_(params) {
  if (params.wavelength <= 0.0 || params.sigma <= 0.0 || params.aspect <= 0.0 || params.extent <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "Gabor parameters must be positive");
  }
  const double sd_max = params.sigma / std::min(params.aspect, 1.0);
  radius_ = std::max(1, static_cast<int>(std::ceil(params.extent * sd_max)));
  const int s = side();
  for (int k = 0; k < kHalf; ++k) {
    const double theta = angle_radians(k);
    const double c = std::cos(theta), sn = std::sin(theta);
    std::vector<double> g(static_cast<std::size_t>(s) * s);
    for (int y = -radius_; y <= radius_; ++y) {
      for (int x = -radius_; x <= radius_; ++x) {
        const double xr = x * c + y * sn;
        const double yr = -x * sn + y * c;
        const double env = std::exp(-(xr * xr + params.aspect * params.aspect * yr * yr) /
                                    (2.0 * params.sigma * params.sigma));
        g[static_cast<std::size_t>(y + radius_) * s + (x + radius_)] =
            env * std::sin(2.0 * std::numbers::pi * xr / params.wavelength);
      }
    }
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double l1 = 0.0;
    for (double& v : g) {
      v -= mean;
      l1 += std::abs(v);
    }
    for (double& v : g) v /= l1;
    std::vector<double> twin(g.size());
    std::transform(g.begin(), g.end(), twin.begin(), [](double v) { return -v; });
    kernels_[k] = std::move(g);
    kernels_[k + kHalf] = std::move(twin);
  }
}

EdgeField filter_responses(const Plane& gray, const GaborBank& bank, std::size_t max_edges) {
  const int w = gray.width, h = gray.height;
  const int r = bank.radius();
  const int pw = w + 2 * r, ph = h + 2 * r;
  // The kernels are DC-free, so removing the mean changes nothing except
  // keeping flat images exactly zero through the FFT.
  const double mean = std::accumulate(gray.data.begin(), gray.data.end(), 0.0) / static_cast<double>(gray.data.size());
  Plane padded(pw, ph);
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < pw; ++x) padded.at(x, y) = gray.at(reflect_index(x - r, w), reflect_index(y - r, h)) - mean;
  }
  const detail::HalfSpectrum image_spec = detail::forward_fft(padded);

  EdgeField field;
  field.width = w;
  field.height = h;
  const std::size_t npix = static_cast<std::size_t>(w) * h;
  for (auto& resp : field.response) resp.assign(npix, 0.0);

#pragma omp parallel for schedule(static)
  for (int k = 0; k < kHalf; ++k) {
    Plane embedded(pw, ph);
    const auto g = bank.kernel(k);
    const int s = bank.side();
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        embedded.at((dx + pw) % pw, (dy + ph) % ph) = g[static_cast<std::size_t>(dy + r) * s + (dx + r)];
      }
    }
    detail::HalfSpectrum prod = detail::forward_fft(embedded);
    for (int ky = 0; ky < ph; ++ky) {
      for (int kx = 0; kx < prod.half_width(); ++kx) {
        prod.at(kx, ky) = image_spec.at(kx, ky) * std::conj(prod.at(kx, ky));
      }
    }
    const Plane corr = detail::inverse_fft(std::move(prod));
    auto& pos = field.response[k];
    auto& neg = field.response[k + kHalf];
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = corr.at(x + r, y + r);
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        pos[i] = v > 0.0 ? v : 0.0;
        neg[i] = v < 0.0 ? -v : 0.0;
      }
    }
  }

  std::vector<Edge> candidates;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      int best = 0;
      for (int k = 1; k < kOrientations; ++k) {
        if (field.response[k][i] > field.response[best][i]) best = k;
      }
      const double s = field.response[best][i];
      if (s > 0.0) candidates.push_back({x, y, best, s});
    }
  }
  auto stronger = [](const Edge& a, const Edge& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  };
  if (candidates.size() > max_edges) {
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(max_edges),
                     candidates.end(), stronger);
    candidates.resize(max_edges);
  }
  std::sort(candidates.begin(), candidates.end(), stronger);
  field.strongest_edges = std::move(candidates);
  return field;
}

EdgeField gabor_responses(const RasterImage& img, const EdgeOptions& options) {
  Plane gray = gray_plane(img);
  const Size size = target_size(gray.width, gray.height, ResizePolicy::max_pixels(options.max_pixels));
  gray = resize(gray, size.width, size.height, ResizeFilter::Bilinear);
  const GaborBank bank(options.gabor);
  return filter_responses(gray, bank, options.max_edges);
}

double edge_density_sum(const EdgeField& field) {
  double total = 0.0;
  for (const auto& resp : field.response) total += std::accumulate(resp.begin(), resp.end(), 0.0);
  return total;
}

double edge_density(const EdgeField& field) {
  const double npix = static_cast<double>(field.width) * field.height;
  return npix > 0.0 ? edge_density_sum(field) / npix : 0.0;
}

double edge_density(const RasterImage& img, const EdgeOptions& options) {
  return edge_density(gabor_responses(img, options));
}

std::array<double, kOrientations> orientation_histogram(const EdgeField& field) {
  std::array<double, kOrientations> hist{};
  for (int k = 0; k < kOrientations; ++k) {
    hist[k] = std::accumulate(field.response[k].begin(), field.response[k].end(), 0.0);
  }
  return hist;
}

double eoe_first_order(const EdgeField& field) {
  const auto hist = orientation_histogram(field);
  if (std::accumulate(hist.begin(), hist.end(), 0.0) <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return stats::shannon_entropy_bits(std::span<const double>(hist));
}

double pair_entropy(const PairHistogram& hist) {
  std::uint64_t total = 0;
  for (auto c : hist.counts) total += c;
  if (total == 0) return std::numeric_limits<double>::quiet_NaN();
  return stats::shannon_entropy_bits(std::span<const std::uint64_t>(hist.counts));
}

double eoe_second_order(std::span<const Edge> edges, const PairOptions& options, int threads) {
  return pair_entropy(pair_histogram(edges, options, threads));
}

double eoe_second_order(const EdgeField& field, const PairOptions& options, int threads) {
  return eoe_second_order(field.strongest_edges, options, threads);
}

}  // namespace imgprops::edges
