// Parallel kernels against their serial reference implementations.
//
//   imgprops_bench --benchmark_filter=Pair
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "imgprops/cnn.hpp"
#include "imgprops/edges.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/pairwise.hpp"
#include "imgprops/reference.hpp"
#include "imgprops/synth.hpp"

using namespace imgprops;

namespace {

std::vector<edges::Edge> random_edges(std::size_t n, int side) {
  std::mt19937_64 rng(n);
  std::vector<edges::Edge> out(n);
  for (auto& e : out) {
    e.x = static_cast<int>(rng() % side);
    e.y = static_cast<int>(rng() % side);
    e.orientation = static_cast<int>(rng() % edges::kOrientations);
    e.strength = 1.0 + static_cast<double>(rng() % 10000) / 100.0;
  }
  return out;
}

const cnn::Conv1Weights& conv_weights() {
  static const cnn::Conv1Weights w = cnn::synthetic_conv1_weights();
  return w;
}

void BM_PairHistogram(benchmark::State& state) {
  const auto list = random_edges(static_cast<std::size_t>(state.range(0)), 350);
  for (auto _ : state) benchmark::DoNotOptimize(edges::pair_histogram(list));
  state.SetComplexityN(state.range(0));
}

void BM_PairHistogramReference(benchmark::State& state) {
  const auto list = random_edges(static_cast<std::size_t>(state.range(0)), 350);
  for (auto _ : state) benchmark::DoNotOptimize(reference::pair_histogram(list));
  state.SetComplexityN(state.range(0));
}

void BM_Conv1(benchmark::State& state) {
  cnn::ForwardOptions o;
  o.input_side = static_cast<int>(state.range(0));
  const auto planes = cnn::prepare_input(synth::random_phase_rgb8(256, 1.2, 3), o);
  for (auto _ : state) benchmark::DoNotOptimize(cnn::conv1_forward(planes, conv_weights(), o));
}

void BM_Conv1Reference(benchmark::State& state) {
  cnn::ForwardOptions o;
  o.input_side = static_cast<int>(state.range(0));
  const auto planes = cnn::prepare_input(synth::random_phase_rgb8(256, 1.2, 3), o);
  for (auto _ : state) benchmark::DoNotOptimize(reference::conv1_forward(planes, conv_weights(), o));
}

void BM_GaborBank(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Plane gray = synth::random_phase_plane(side, 1.0, 9);
  const edges::GaborBank bank;
  for (auto _ : state) benchmark::DoNotOptimize(edges::filter_responses(gray, bank));
}

void BM_GaborBankReference(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Plane gray = synth::random_phase_plane(side, 1.0, 9);
  const edges::GaborBank bank;
  for (auto _ : state) {
    for (int k = 0; k < edges::kOrientations; ++k) {
      benchmark::DoNotOptimize(reference::correlate(gray, bank.kernel(k), bank.radius()));
    }
  }
}

}  // namespace

BENCHMARK(BM_PairHistogram)->Arg(1000)->Arg(4000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairHistogramReference)->Arg(1000)->Arg(4000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1)->Arg(227)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1Reference)->Arg(227)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaborBank)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaborBankReference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
