#pragma once

#include <cstdint>
#include <functional>

#include "imgprops/raster.hpp"

/// Random-phase test images with a prescribed radial amplitude spectrum.
namespace imgprops::synth {

/// Amplitude as a function of radial frequency (cycles per image, > 0).
using AmplitudeProfile = std::function<double(double radius)>;

/// Uniform random phases, Hermitian-symmetric spectrum with |F| given by
/// `amplitude` (DC = 0), inverse FFT, then linear rescale to [0,255].
Plane random_phase_plane(int side, const AmplitudeProfile& amplitude, std::uint64_t seed);
/// |F|(r) = r^-alpha.
Plane random_phase_plane(int side, double alpha, std::uint64_t seed);

RasterImage to_grayf(const Plane& plane);
/// Rounds and clamps into [0,255] and replicates into three channels.
RasterImage to_rgb8(const Plane& plane);

RasterImage random_phase_rgb8(int side, double alpha, std::uint64_t seed);

}  // namespace imgprops::synth
