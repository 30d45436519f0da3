#include <algorithm>

#include "admire/kernels.hpp"

namespace admire::kernels::serial {

void assign_nearest(const DenseMatrix& points, const DenseMatrix& centroids, std::span<std::uint32_t> labels,
                    std::span<double> dist2) {
  for (std::size_t i = 0; i < points.rows; ++i) {
    const auto p = points.row(i);
    std::uint32_t best = 0;
    double best_d = squared_distance(p, centroids.row(0));
    for (std::size_t c = 1; c < centroids.rows; ++c) {
      const double d = squared_distance(p, centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(c);
      }
    }
    labels[i] = best;
    dist2[i] = best_d;
  }
}

void count_subsets(std::span<const EncodedSet> transactions, std::span<const EncodedSet> candidates,
                   std::span<std::uint64_t> counts) {
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::uint64_t n = 0;
    for (const auto& tx : transactions) {
      if (std::includes(tx.begin(), tx.end(), candidates[c].begin(), candidates[c].end())) ++n;
    }
    counts[c] = n;
  }
}

}  // namespace admire::kernels::serial
