#include "imgprops/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "imgprops/error.hpp"

namespace imgprops::fourier {

namespace {

void require_min_side(int width, int height) {
  if (std::min(width, height) < 2) {
    throw Error(ErrorCode::TooSmall, "slope estimation needs min side >= 2");
  }
}

SlopeFit make_fit(std::span<const double> x, std::span<const double> y, SlopeMethod method) {
  const LineFit line = fit_line(x, y);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    ss += r * r;
  }
  SlopeFit out;
  out.slope = -line.slope;
  out.intercept = line.intercept;
  out.sigma = ss / static_cast<double>(x.size());
  out.points_used = static_cast<int>(x.size());
  out.method = method;
  return out;
}

Plane pad_to_square(const Plane& plane, bool round_fill) {
  if (plane.width == plane.height) return plane;
  const double mean =
      std::accumulate(plane.data.begin(), plane.data.end(), 0.0) / static_cast<double>(plane.size());
  const double fill = round_fill ? std::round(mean) : mean;
  const int side = std::max(plane.width, plane.height);
  Plane out(side, side, fill);
  const int ox = (side - plane.width) / 2;
  const int oy = (side - plane.height) / 2;
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) out.at(x + ox, y + oy) = plane.at(x, y);
  }
  return out;
}

}  // namespace

RadialSpectrum radial_spectrum(const Plane& square, SpectrumKind kind) {
  if (square.width != square.height) {
    throw Error(ErrorCode::NotSquare, "radial spectrum needs a square input");
  }
  if (!is_pow2(square.width) || square.width < 2) {
    throw Error(ErrorCode::SideNotPow2, "radial spectrum needs a power-of-two side");
  }
  const int side = square.width;
  const int rmax = side / 2;
  const detail::HalfSpectrum spec = detail::forward_fft(square);

  std::vector<double> sum(static_cast<std::size_t>(rmax) + 1, 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(rmax) + 1, 0);
  for (int ky = 0; ky < side; ++ky) {
    const int fy = ky <= side / 2 ? ky : ky - side;
    for (int kx = 0; kx < side; ++kx) {
      const int fx = kx <= side / 2 ? kx : kx - side;
      const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(fx * fx + fy * fy))));
      if (r < 1 || r > rmax) continue;
      const double a = std::abs(spec.full(kx, ky));
      sum[r] += kind == SpectrumKind::Amplitude ? a : a * a;
      ++count[r];
    }
  }
  RadialSpectrum out;
  out.kind = kind;
  for (int r = 1; r <= rmax; ++r) {
    out.radii.push_back(r);
    out.counts.push_back(count[r]);
    out.magnitude.push_back(count[r] > 0 ? sum[r] / static_cast<double>(count[r]) : 0.0);
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "line fit needs at least two points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw Error(ErrorCode::InvalidArgument, "line fit needs distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::vector<double> cooks_distance(std::span<const double> x, std::span<const double> y,
                                   const LineFit& fit) {
  const std::size_t n = x.size();
  constexpr double p = 2.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sse = 0.0;
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    resid[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += resid[i] * resid[i];
  }
  std::vector<double> d(n, 0.0);
  if (n <= 2 || sse <= 0.0) return d;
  const double s2 = sse / (static_cast<double>(n) - p);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = 1.0 / static_cast<double>(n) + (x[i] - mx) * (x[i] - mx) / sxx;
    const double one_minus_h = 1.0 - h;
    d[i] = resid[i] * resid[i] / (p * s2) * h / (one_minus_h * one_minus_h);
  }
  return d;
}

SlopeFit slope_spehar(const Plane& gray, const SpeharOptions& options) {
  require_min_side(gray.width, gray.height);
  const Plane square = crop_center_square_pow2(gray);
  const RadialSpectrum spec = radial_spectrum(square, SpectrumKind::Amplitude);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < spec.radii.size(); ++i) {
    if (spec.magnitude[i] <= 0.0) continue;
    x.push_back(std::log(static_cast<double>(spec.radii[i])));
    y.push_back(std::log(spec.magnitude[i]));
  }
  if (x.size() < 2) throw Error(ErrorCode::TooSmall, "spectrum has fewer than two usable radii");
  const LineFit first = fit_line(x, y);
  const auto d = cooks_distance(x, y, first);
  const double n = static_cast<double>(x.size());
  const double cut = options.threshold == CookThreshold::FourOverN ? 4.0 / n : n / 4.0;
  std::vector<double> kx, ky;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d[i] > cut) continue;
    kx.push_back(x[i]);
    ky.push_back(y[i]);
  }
  if (kx.size() < 2) return make_fit(x, y, SlopeMethod::Spehar);
  return make_fit(kx, ky, SlopeMethod::Spehar);
}

SlopeFit slope_redies(const Plane& gray, bool round_fill, const RediesOptions& options) {
  require_min_side(gray.width, gray.height);
  if (options.bins < 2 || options.min_frequency < 1 || options.max_frequency <= options.min_frequency ||
      options.max_frequency > options.side / 2) {
    throw Error(ErrorCode::InvalidArgument, "invalid Redies frequency band or bin count");
  }
  const Plane square = resize(pad_to_square(gray, round_fill), options.side, options.side,
                              options.filter);
  const RadialSpectrum spec = radial_spectrum(square, SpectrumKind::Power);
  const double lo = std::log(static_cast<double>(options.min_frequency));
  const double hi = std::log(static_cast<double>(options.max_frequency));
  std::vector<double> bx(options.bins, 0.0), by(options.bins, 0.0);
  std::vector<int> bn(options.bins, 0);
  for (std::size_t i = 0; i < spec.radii.size(); ++i) {
    const int r = spec.radii[i];
    if (r < options.min_frequency || r > options.max_frequency || spec.magnitude[i] <= 0.0) continue;
    const double lx = std::log(static_cast<double>(r));
    const int b = std::clamp(static_cast<int>((lx - lo) / (hi - lo) * options.bins), 0,
                             options.bins - 1);
    bx[b] += lx;
    by[b] += std::log(spec.magnitude[i]);
    ++bn[b];
  }
  std::vector<double> x, y;
  for (int b = 0; b < options.bins; ++b) {
    if (bn[b] == 0) continue;
    x.push_back(bx[b] / bn[b]);
    y.push_back(by[b] / bn[b]);
  }
  if (x.size() < 2) throw Error(ErrorCode::TooSmall, "fewer than two populated frequency bins");
  return make_fit(x, y, SlopeMethod::Redies);
}

SlopeFit slope_mather(const Plane& lightness, const MatherOptions& options) {
  require_min_side(lightness.width, lightness.height);
  const Plane cropped = crop_center_square_pow2(lightness);
  const Plane square = resize(cropped, options.side, options.side, options.filter);
  const RadialSpectrum spec = radial_spectrum(square, SpectrumKind::Amplitude);
  // Quartiles by count of radius values.
  const std::size_t n = spec.radii.size();
  const std::size_t q = n / 4;
  std::vector<double> x, y;
  for (std::size_t i = q; i < n - q; ++i) {
    if (spec.magnitude[i] <= 0.0) continue;
    x.push_back(std::log(static_cast<double>(spec.radii[i])));
    y.push_back(std::log(spec.magnitude[i]));
  }
  if (x.size() < 2) throw Error(ErrorCode::TooSmall, "fewer than two radii after quartile trim");
  return make_fit(x, y, SlopeMethod::Mather);
}

SlopeFit slope_spehar(const RasterImage& img, const SpeharOptions& options) {
  return slope_spehar(gray_plane(img), options);
}

SlopeFit slope_redies(const RasterImage& img, const RediesOptions& options) {
  return slope_redies(gray_plane(img), img.space() != ColorSpace::GrayF, options);
}

SlopeFit slope_mather(const RasterImage& img, const MatherOptions& options) {
  return slope_mather(lightness_plane(img), options);
}

}  // namespace imgprops::fourier
