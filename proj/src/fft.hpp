#pragma once

// Thin RAII layer over FFTW for real 2-D transforms.

#include <complex>
#include <cstddef>
#include <memory>

#include <fftw3.h>

#include "imgprops/raster.hpp"

namespace imgprops::detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

/// Half-plane spectrum of a real width x height field: height rows of
/// width/2 + 1 complex coefficients (FFTW r2c layout, unnormalized).
class HalfSpectrum {
 public:
  HalfSpectrum(int width, int height);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int half_width() const noexcept { return width_ / 2 + 1; }

  [[nodiscard]] std::complex<double>& at(int kx, int ky) noexcept {
    return reinterpret_cast<std::complex<double>*>(data_.get())[static_cast<std::size_t>(ky) *
                                                                    half_width() +
                                                                kx];
  }
  [[nodiscard]] std::complex<double> at(int kx, int ky) const noexcept {
    return reinterpret_cast<const std::complex<double>*>(
        data_.get())[static_cast<std::size_t>(ky) * half_width() + kx];
  }
  /// Any coefficient of the full plane, using Hermitian symmetry.
  [[nodiscard]] std::complex<double> full(int kx, int ky) const noexcept {
    if (kx < half_width()) return at(kx, ky);
    return std::conj(at((width_ - kx) % width_, (height_ - ky) % height_));
  }

  [[nodiscard]] fftw_complex* raw() noexcept { return data_.get(); }

 private:
  int width_;
  int height_;
  FftwBuffer<fftw_complex> data_;
};

HalfSpectrum forward_fft(const Plane& plane);
/// Inverse transform scaled by 1/(width*height), so inverse(forward(p)) == p.
Plane inverse_fft(HalfSpectrum spectrum);

}  // namespace imgprops::detail
