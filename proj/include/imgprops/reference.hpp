#pragma once

// Straightforward serial implementations of the parallel kernels. They are
// used by the tests as oracles and by the benchmarks as the baseline.

#include <span>

#include "imgprops/cnn.hpp"
#include "imgprops/pairwise.hpp"
#include "imgprops/raster.hpp"

namespace imgprops::reference {

/// All n(n-1)/2 pairs, each tested against the minimum distance.
edges::PairHistogram pair_histogram(std::span<const edges::Edge> edges, const edges::PairOptions& options = {});

/// Direct correlation of `gray` with a square kernel of the given radius,
/// reflect-padded at the borders.
Plane correlate(const Plane& gray, std::span<const double> kernel, int radius);

/// Direct nested-loop conv1 on already prepared planes.
cnn::Conv1Responses conv1_forward(std::span<const Plane> channels, const cnn::Conv1Weights& w,
                                  const cnn::ForwardOptions& options = {});

}  // namespace imgprops::reference
