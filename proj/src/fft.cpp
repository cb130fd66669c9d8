#include "fft.hpp"

#include <algorithm>
#include <mutex>
#include <new>

namespace imgprops::detail {

namespace {

// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
FftwBuffer<T> allocate(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

HalfSpectrum::HalfSpectrum(int width, int height)
    : width_(width),
      height_(height),
      data_(allocate<fftw_complex>(static_cast<std::size_t>(height) * (width / 2 + 1))) {}

HalfSpectrum forward_fft(const Plane& plane) {
  HalfSpectrum out(plane.width, plane.height);
  auto in = allocate<double>(plane.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_2d(plane.height, plane.width, in.get(), out.raw(), FFTW_ESTIMATE);
  }
  std::copy(plane.data.begin(), plane.data.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

Plane inverse_fft(HalfSpectrum spectrum) {
  Plane out(spectrum.width(), spectrum.height());
  auto buf = allocate<double>(out.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    // c2r destroys its input, which is why the spectrum is taken by value.
    plan = fftw_plan_dft_c2r_2d(spectrum.height(), spectrum.width(), spectrum.raw(), buf.get(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = buf[i] * scale;
  return out;
}

}  // namespace imgprops::detail
