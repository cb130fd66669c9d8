#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imgprops/imgcore.hpp"
#include "imgprops/raster.hpp"

namespace imgprops::fourier {

enum class SpectrumKind { Amplitude, Power };

/// Ring-averaged Fourier magnitudes at integer radii 1..side/2 (cycles per
/// image). The DC term and the corner coefficients beyond side/2 are left out.
struct RadialSpectrum {
  std::vector<int> radii;
  std::vector<double> magnitude;
  /// Coefficients averaged into each ring.
  std::vector<std::size_t> counts;
  SpectrumKind kind = SpectrumKind::Amplitude;
};

/// `square` must be square with a power-of-two side (NotSquare, SideNotPow2).
RadialSpectrum radial_spectrum(const Plane& square, SpectrumKind kind);

enum class SlopeMethod { Spehar, Redies, Mather };

/// Log-log fit of a radial spectrum. `slope` is reported as the positive
/// exponent alpha of a 1/f^alpha decay; `sigma` is the mean squared residual
/// over the points that entered the final fit.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sigma = 0.0;
  int points_used = 0;
  SlopeMethod method = SlopeMethod::Spehar;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Cook's distance of every point for the straight-line fit `fit`.
std::vector<double> cooks_distance(std::span<const double> x, std::span<const double> y,
                                   const LineFit& fit);

enum class CookThreshold {
  FourOverN,  ///< conventional 4/n cut-off (default)
  NOverFour,  ///< the literal n/4 reading
};

struct SpeharOptions {
  CookThreshold threshold = CookThreshold::FourOverN;
};

struct RediesOptions {
  int side = 1024;
  int min_frequency = 10;
  int max_frequency = 256;
  int bins = 30;
  ResizeFilter filter = ResizeFilter::Bilinear;
};

struct MatherOptions {
  int side = 1024;
  ResizeFilter filter = ResizeFilter::Bilinear;
};

/// Gray -> centered power-of-two crop -> amplitude spectrum -> OLS over all
/// radii -> one refit without Cook's-distance outliers.
SlopeFit slope_spehar(const RasterImage& img, const SpeharOptions& options = {});
/// Gray -> pad to square with mean gray -> resize -> power spectrum ->
/// radii in [min, max] -> log-spaced binning -> OLS. Returns the power slope.
SlopeFit slope_redies(const RasterImage& img, const RediesOptions& options = {});
/// L* -> centered power-of-two crop -> resize -> amplitude spectrum ->
/// drop the lowest and highest quartile of radii -> OLS.
SlopeFit slope_mather(const RasterImage& img, const MatherOptions& options = {});

/// Plane-level entry points used by the image overloads above.
SlopeFit slope_spehar(const Plane& gray, const SpeharOptions& options = {});
SlopeFit slope_redies(const Plane& gray, bool round_fill, const RediesOptions& options = {});
SlopeFit slope_mather(const Plane& lightness, const MatherOptions& options = {});

}  // namespace imgprops::fourier
