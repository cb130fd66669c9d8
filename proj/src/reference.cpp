#include "imgprops/reference.hpp"

#include "imgprops/error.hpp"

namespace imgprops::reference {

namespace {

int reflect(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

}  // namespace

edges::PairHistogram pair_histogram(std::span<const edges::Edge> edges, const edges::PairOptions& options) {
  const int nclass = edges::class_count(options.classes);
  edges::PairHistogram out{std::vector<std::uint64_t>(nclass, 0), 0};
  const auto q = edges::quantize_strengths(edges, options.weighting);
  const long long dmin2 = static_cast<long long>(options.min_distance) * options.min_distance;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const long long dx = edges[i].x - edges[j].x;
      const long long dy = edges[i].y - edges[j].y;
      if (dx * dx + dy * dy < dmin2) continue;
      edges::credit_pair(out.counts, edges[i].orientation, edges[j].orientation,
                         static_cast<std::uint64_t>(q[i]) * q[j], options.classes);
      ++out.pairs;
    }
  }
  return out;
}

Plane correlate(const Plane& gray, std::span<const double> kernel, int radius) {
  const int side = 2 * radius + 1;
  if (kernel.size() != static_cast<std::size_t>(side) * side) {
    throw Error(ErrorCode::DimMismatch, "kernel size does not match radius");
  }
  Plane out(gray.width, gray.height);
  for (int y = 0; y < gray.height; ++y) {
    for (int x = 0; x < gray.width; ++x) {
      double acc = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          acc += kernel[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] *
                 gray.at(reflect(x + dx, gray.width), reflect(y + dy, gray.height));
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

cnn::Conv1Responses conv1_forward(std::span<const Plane> channels, const cnn::Conv1Weights& w,
                                  const cnn::ForwardOptions& options) {
  if (static_cast<int>(channels.size()) != w.channels) {
    throw Error(ErrorCode::DimMismatch, "channel count does not match weights");
  }
  cnn::Conv1Responses out;
  out.filters = w.filters;
  out.width = (channels[0].width - w.kernel_w) / options.stride + 1;
  out.height = (channels[0].height - w.kernel_h) / options.stride + 1;
  out.maps.assign(static_cast<std::size_t>(out.filters) * out.width * out.height, 0.0);
  for (int k = 0; k < w.filters; ++k) {
    for (int oy = 0; oy < out.height; ++oy) {
      for (int ox = 0; ox < out.width; ++ox) {
        double acc = 0.0;
        for (int c = 0; c < w.channels; ++c) {
          for (int r = 0; r < w.kernel_h; ++r) {
            for (int s = 0; s < w.kernel_w; ++s) {
              const double v = channels[c].at(ox * options.stride + s, oy * options.stride + r) - w.means[c];
              acc += v * static_cast<double>(w.at(k, c, r, s));
            }
          }
        }
        acc += w.bias[static_cast<std::size_t>(k)];
        if (options.rectify && acc < 0.0) acc = 0.0;
        out.maps[(static_cast<std::size_t>(k) * out.height + oy) * out.width + ox] = acc;
      }
    }
  }
  return out;
}

}  // namespace imgprops::reference
