#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP variant; both must produce bit-identical output, which the tests
// check and the benchmark compares for speed.
namespace admire::kernels {

// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

// Transaction or itemset over encoded item ids, ascending.
using EncodedSet = std::vector<std::uint32_t>;

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    d += t * t;
  }
  return d;
}

namespace serial {

// labels[i] = index of nearest centroid (ties to the lower index),
// dist2[i] = its squared distance.
void assign_nearest(const DenseMatrix& points, const DenseMatrix& centroids, std::span<std::uint32_t> labels,
                    std::span<double> dist2);

// counts[c] = number of transactions containing candidates[c].
void count_subsets(std::span<const EncodedSet> transactions, std::span<const EncodedSet> candidates,
                   std::span<std::uint64_t> counts);

}  // namespace serial

namespace omp {

void assign_nearest(const DenseMatrix& points, const DenseMatrix& centroids, std::span<std::uint32_t> labels,
                    std::span<double> dist2);

void count_subsets(std::span<const EncodedSet> transactions, std::span<const EncodedSet> candidates,
                   std::span<std::uint64_t> counts);

}  // namespace omp

enum class Policy { serial, parallel };

void assign_nearest(Policy policy, const DenseMatrix& points, const DenseMatrix& centroids,
                    std::span<std::uint32_t> labels, std::span<double> dist2);
void count_subsets(Policy policy, std::span<const EncodedSet> transactions, std::span<const EncodedSet> candidates,
                   std::span<std::uint64_t> counts);

}  // namespace admire::kernels
