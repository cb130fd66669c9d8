#include "imgprops/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fft.hpp"
#include "imgprops/error.hpp"

namespace imgprops::synth {

Plane random_phase_plane(int side, const AmplitudeProfile& amplitude, std::uint64_t seed) {
  if (side < 2) throw Error(ErrorCode::TooSmall, "synthetic image side must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // The phases of a real white-noise field are uniform and already
  // Hermitian-consistent; only the magnitudes are replaced.
  Plane noise(side, side);
  for (double& v : noise.data) v = normal(rng);
  detail::HalfSpectrum spec = detail::forward_fft(noise);
  for (int ky = 0; ky < side; ++ky) {
    const int fy = ky <= side / 2 ? ky : ky - side;
    for (int kx = 0; kx < spec.half_width(); ++kx) {
      const double r = std::sqrt(static_cast<double>(kx * kx + fy * fy));
      auto& c = spec.at(kx, ky);
      if (r == 0.0) {
        c = 0.0;
        continue;
      }
      const double mag = std::abs(c);
      c = mag > 0.0 ? c * (amplitude(r) / mag) : std::complex<double>(amplitude(r), 0.0);
    }
  }
  Plane field = detail::inverse_fft(std::move(spec));
  const auto [mn, mx] = std::minmax_element(field.data.begin(), field.data.end());
  const double lo = *mn;
  const double span = *mx - *mn;
  for (double& v : field.data) v = span > 0.0 ? (v - lo) / span * 255.0 : 127.5;
  return field;
}

Plane random_phase_plane(int side, double alpha, std::uint64_t seed) {
  return random_phase_plane(side, [alpha](double r) { return std::pow(r, -alpha); }, seed);
}

RasterImage to_grayf(const Plane& plane) {
  return RasterImage::from_reals(plane.width, plane.height, ColorSpace::GrayF, plane.data);
}

RasterImage to_rgb8(const Plane& plane) {
  std::vector<std::uint8_t> out(plane.size() * 3);
  for (std::size_t p = 0; p < plane.size(); ++p) {
    const auto v = static_cast<std::uint8_t>(std::clamp(std::round(plane.data[p]), 0.0, 255.0));
    out[3 * p] = out[3 * p + 1] = out[3 * p + 2] = v;
  }
  return RasterImage::from_bytes(plane.width, plane.height, ColorSpace::RGB8, std::move(out));
}

RasterImage random_phase_rgb8(int side, double alpha, std::uint64_t seed) {
  return to_rgb8(random_phase_plane(side, alpha, seed));
}

}  // namespace imgprops::synth
