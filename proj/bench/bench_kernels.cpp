#include <benchmark/benchmark.h>

#include <algorithm>

#include "admire/kernels.hpp"
#include "admire/rng.hpp"

using namespace admire;
using namespace admire::kernels;

namespace {

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m{rows, cols, std::vector<double>(rows * cols)};
  for (auto& v : m.values) v = rng.uniform01() * 100.0;
  return m;
}

struct CountInput {
  std::vector<EncodedSet> transactions;
  std::vector<EncodedSet> candidates;
};

CountInput random_counts(std::size_t n_tx, std::size_t items) {
  Rng rng(2);
  CountInput in;
  for (std::size_t i = 0; i < n_tx; ++i) {
    EncodedSet t;
    for (std::uint32_t j = 0; j < items; ++j) {
      if (rng.uniform01() < 0.3) t.push_back(j);
    }
    in.transactions.push_back(std::move(t));
  }
  for (std::uint32_t a = 0; a < items; ++a) {
    for (std::uint32_t b = a + 1; b < items; ++b) in.candidates.push_back({a, b});
  }
  return in;
}

template <void (*Kernel)(const DenseMatrix&, const DenseMatrix&, std::span<std::uint32_t>, std::span<double>)>
void BM_assign_nearest(benchmark::State& state) {
  Rng rng(1);
  const auto points = random_matrix(rng, static_cast<std::size_t>(state.range(0)), 8);
  const auto centroids = random_matrix(rng, 16, 8);
  std::vector<std::uint32_t> labels(points.rows);
  std::vector<double> dist2(points.rows);
  for (auto _ : state) {
    Kernel(points, centroids, labels, dist2);
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Kernel)(std::span<const EncodedSet>, std::span<const EncodedSet>, std::span<std::uint64_t>)>
void BM_count_subsets(benchmark::State& state) {
  const auto in = random_counts(static_cast<std::size_t>(state.range(0)), 40);
  std::vector<std::uint64_t> counts(in.candidates.size());
  for (auto _ : state) {
    Kernel(in.transactions, in.candidates, counts);
    benchmark::DoNotOptimize(counts.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_assign_nearest, serial::assign_nearest)->Arg(10000)->Arg(200000);
BENCHMARK_TEMPLATE(BM_assign_nearest, omp::assign_nearest)->Arg(10000)->Arg(200000);
BENCHMARK_TEMPLATE(BM_count_subsets, serial::count_subsets)->Arg(2000)->Arg(20000);
BENCHMARK_TEMPLATE(BM_count_subsets, omp::count_subsets)->Arg(2000)->Arg(20000);

BENCHMARK_MAIN();
