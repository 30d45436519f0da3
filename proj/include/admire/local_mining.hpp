#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "admire/kernels.hpp"
#include "admire/models.hpp"
#include "admire/table.hpp"

// Site-local mining. Every function here reads one partition and returns
// sufficient statistics that the knowledge map can merge exactly.
namespace admire::mining {

using Point = std::vector<double>;

// All columns numeric and no missing cells, else non-numeric-data.
kernels::DenseMatrix to_dense(const Table& t);

// Lloyd assignment step on one partition. Rows go to the nearest centroid by
// squared Euclidean distance, ties to the lowest index; sums are accumulated
// in row order.
CentroidSums kmeans_assign_and_sum(const Table& partition, std::span<const Point> centroids,
                                   kernels::Policy policy = kernels::Policy::parallel);

// One transaction per row: the set of "column=value" items over categorical
// cells; numeric and missing cells contribute nothing.
std::vector<Transaction> transactions_from_table(const Table& t);

std::string make_item(std::string_view column, std::string_view value);

ItemsetCounts apriori_count(std::span<const Transaction> partition, std::span<const Itemset> candidates,
                            kernels::Policy policy = kernels::Policy::parallel);

// Join on the first k-1 items, then prune candidates with an infrequent
// k-subset. Output sorted and duplicate-free. Throws mixed-sizes.
std::vector<Itemset> apriori_gen(std::span<const Itemset> frequent_k);

// Throws unknown-column, missing-label, type-error (label not categorical).
BayesCounts bayes_fit(const Table& partition, std::string_view label_column);

struct Prediction {
  std::string label;
  std::map<std::string, double> log_scores;
};

inline constexpr double kLaplaceAlpha = 1.0;
inline constexpr double kVarianceFloor = 1e-9;

// Row is aligned with `schema`; columns absent from the model (including the
// label) are ignored, as are missing cells. Throws empty-model.
Prediction bayes_predict(const BayesCounts& model, const Schema& schema, const Row& row);

}  // namespace admire::mining
