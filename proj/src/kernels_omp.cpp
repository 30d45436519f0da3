#include <algorithm>

#include "admire/kernels.hpp"

namespace admire::kernels {

namespace omp {

// Each iteration writes only its own output slot, so results do not depend
// on the schedule.
void assign_nearest(const DenseMatrix& points, const DenseMatrix& centroids, std::span<std::uint32_t> labels,
                    std::span<double> dist2) {
  const auto n = static_cast<std::int64_t>(points.rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto p = points.row(static_cast<std::size_t>(i));
    std::uint32_t best = 0;
    double best_d = squared_distance(p, centroids.row(0));
    for (std::size_t c = 1; c < centroids.rows; ++c) {
      const double d = squared_distance(p, centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist2[static_cast<std::size_t>(i)] = best_d;
  }
}

void count_subsets(std::span<const EncodedSet> transactions, std::span<const EncodedSet> candidates,
                   std::span<std::uint64_t> counts) {
  const auto m = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t c = 0; c < m; ++c) {
    const auto& cand = candidates[static_cast<std::size_t>(c)];
    std::uint64_t n = 0;
    for (const auto& tx : transactions) {
      if (std::includes(tx.begin(), tx.end(), cand.begin(), cand.end())) ++n;
    }
    counts[static_cast<std::size_t>(c)] = n;
  }
}

}  // namespace omp

void assign_nearest(Policy policy, const DenseMatrix& points, const DenseMatrix& centroids,
                    std::span<std::uint32_t> labels, std::span<double> dist2) {
  if (policy == Policy::parallel) {
    omp::assign_nearest(points, centroids, labels, dist2);
  } else {
    serial::assign_nearest(points, centroids, labels, dist2);
  }
}

void count_subsets(Policy policy, std::span<const EncodedSet> transactions, std::span<const EncodedSet> candidates,
                   std::span<std::uint64_t> counts) {
  if (policy == Policy::parallel) {
    omp::count_subsets(transactions, candidates, counts);
  } else {
    serial::count_subsets(transactions, candidates, counts);
  }
}

}  // namespace admire::kernels
