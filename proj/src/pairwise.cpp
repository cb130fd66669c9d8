#include "imgprops/pairwise.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "imgprops/error.hpp"

namespace imgprops::edges {

int class_count(DifferenceClasses classes) noexcept {
  return classes == DifferenceClasses::Folded ? kOrientations / 2 + 1 : kOrientations;
}

std::vector<std::uint32_t> quantize_strengths(std::span<const Edge> edges, PairWeighting weighting) {
  std::vector<std::uint32_t> q(edges.size(), 1);
  if (weighting == PairWeighting::Unweighted || edges.empty()) return q;
  double top = 0.0;
  for (const Edge& e : edges) top = std::max(top, e.strength);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    q[i] = top > 0.0 ? static_cast<std::uint32_t>(std::lround(edges[i].strength / top * kWeightScale)) : 0;
  }
  return q;
}

void credit_pair(std::vector<std::uint64_t>& counts, int a, int b, std::uint64_t weight,
                 DifferenceClasses classes) noexcept {
  const int d = ((a - b) % kOrientations + kOrientations) % kOrientations;
  if (classes == DifferenceClasses::Folded) {
    counts[std::min(d, kOrientations - d)] += weight;
  } else {
    counts[d] += weight;
    counts[(kOrientations - d) % kOrientations] += weight;
  }
}

namespace {

struct Grid {
  int cols = 0;
  int rows = 0;
  int cell = 1;
  // Edge indices sorted by cell, with offsets per cell.
  std::vector<std::size_t> order;
  std::vector<std::size_t> start;
};

Grid build_grid(std::span<const Edge> edges, int cell) {
  Grid g;
  g.cell = cell;
  int max_x = 0, max_y = 0;
  for (const Edge& e : edges) {
    max_x = std::max(max_x, e.x);
    max_y = std::max(max_y, e.y);
  }
  g.cols = max_x / cell + 1;
  g.rows = max_y / cell + 1;
  const std::size_t ncell = static_cast<std::size_t>(g.cols) * g.rows;
  g.start.assign(ncell + 1, 0);
  for (const Edge& e : edges) ++g.start[static_cast<std::size_t>(e.y / cell) * g.cols + e.x / cell + 1];
  for (std::size_t c = 0; c < ncell; ++c) g.start[c + 1] += g.start[c];
  g.order.resize(edges.size());
  std::vector<std::size_t> fill(g.start.begin(), g.start.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    g.order[fill[static_cast<std::size_t>(e.y / cell) * g.cols + e.x / cell]++] = i;
  }
  return g;
}

}  // namespace

PairHistogram pair_histogram(std::span<const Edge> edges, const PairOptions& options, int threads) {
  if (edges.size() > kMaxPairEdges) {
    throw Error(ErrorCode::InvalidArgument, "too many edges for exact pair accumulation");
  }
  if (options.min_distance < 1) throw Error(ErrorCode::InvalidArgument, "min_distance must be >= 1");
  for (const Edge& e : edges) {
    if (e.orientation < 0 || e.orientation >= kOrientations) {
      throw Error(ErrorCode::InvalidArgument, "edge orientation index out of range");
    }
    if (e.x < 0 || e.y < 0) throw Error(ErrorCode::InvalidArgument, "edge coordinates must be >= 0");
  }
  const int nclass = class_count(options.classes);
  PairHistogram out{std::vector<std::uint64_t>(nclass, 0), 0};
  if (edges.size() < 2) return out;

  const auto q = quantize_strengths(edges, options.weighting);
  // Cells as wide as the exclusion distance: points two or more cells apart
  // along either axis are always at least min_distance apart.
  const Grid g = build_grid(edges, options.min_distance);
  const long long ncell = static_cast<long long>(g.cols) * g.rows;
  const long long dmin2 = static_cast<long long>(options.min_distance) * options.min_distance;

  using Bins = std::array<std::uint64_t, kOrientations>;
  std::vector<Bins> weight(static_cast<std::size_t>(ncell), Bins{});
  std::vector<std::uint64_t> count(static_cast<std::size_t>(ncell), 0);
  for (long long c = 0; c < ncell; ++c) {
    for (std::size_t k = g.start[c]; k < g.start[c + 1]; ++k) {
      const std::size_t i = g.order[k];
      weight[c][edges[i].orientation] += q[i];
      ++count[c];
    }
  }
  // Suffix sums over the linear cell order: everything in cells after c.
  std::vector<Bins> suffix(static_cast<std::size_t>(ncell) + 1, Bins{});
  std::vector<std::uint64_t> suffix_count(static_cast<std::size_t>(ncell) + 1, 0);
  for (long long c = ncell - 1; c >= 0; --c) {
    for (int o = 0; o < kOrientations; ++o) suffix[c][o] = suffix[c + 1][o] + weight[c][o];
    suffix_count[c] = suffix_count[c + 1] + count[c];
  }

  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(nthreads),
                                                  std::vector<std::uint64_t>(nclass, 0));
  std::vector<std::uint64_t> partial_pairs(static_cast<std::size_t>(nthreads), 0);

#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 4)
  for (long long c = 0; c < ncell; ++c) {
    if (count[c] == 0) continue;
    auto& hist = partial[omp_get_thread_num()];
    auto& npairs = partial_pairs[omp_get_thread_num()];
    const int cx = static_cast<int>(c % g.cols);
    const int cy = static_cast<int>(c / g.cols);

    // Far cells after c: all later cells minus the later neighbours.
    Bins far = suffix[c + 1];
    std::uint64_t far_count = suffix_count[c + 1];
    for (int ny = cy; ny <= std::min(cy + 1, g.rows - 1); ++ny) {
      for (int nx = std::max(cx - 1, 0); nx <= std::min(cx + 1, g.cols - 1); ++nx) {
        const long long n = static_cast<long long>(ny) * g.cols + nx;
        if (n <= c) continue;
        for (int o = 0; o < kOrientations; ++o) far[o] -= weight[n][o];
        far_count -= count[n];
      }
    }
    for (int a = 0; a < kOrientations; ++a) {
      if (weight[c][a] == 0) continue;
      for (int b = 0; b < kOrientations; ++b) {
        if (far[b] == 0) continue;
        credit_pair(hist, a, b, weight[c][a] * far[b], options.classes);
      }
    }
    npairs += count[c] * far_count;

    // Same and adjacent later cells: explicit distance test.
    for (int ny = cy; ny <= std::min(cy + 1, g.rows - 1); ++ny) {
      for (int nx = std::max(cx - 1, 0); nx <= std::min(cx + 1, g.cols - 1); ++nx) {
        const long long n = static_cast<long long>(ny) * g.cols + nx;
        if (n < c) continue;
        for (std::size_t ki = g.start[c]; ki < g.start[c + 1]; ++ki) {
          const std::size_t i = g.order[ki];
          const std::size_t kj0 = n == c ? ki + 1 : g.start[n];
          for (std::size_t kj = kj0; kj < g.start[n + 1]; ++kj) {
            const std::size_t j = g.order[kj];
            const long long dx = edges[i].x - edges[j].x;
            const long long dy = edges[i].y - edges[j].y;
            if (dx * dx + dy * dy < dmin2) continue;
            credit_pair(hist, edges[i].orientation, edges[j].orientation,
                        static_cast<std::uint64_t>(q[i]) * q[j], options.classes);
            ++npairs;
          }
        }
      }
    }
  }

  for (int t = 0; t < nthreads; ++t) {
    for (int k = 0; k < nclass; ++k) out.counts[k] += partial[t][k];
    out.pairs += partial_pairs[t];
  }
  return out;
}

}  // namespace imgprops::edges
