#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "admire/table.hpp"

namespace admire {

using Item = std::string;
// Items in ascending lexicographic order, no duplicates.
using Itemset = std::vector<Item>;
using Transaction = Itemset;

struct ClusterSums {
  std::vector<double> vector_sum;
  std::uint64_t count = 0;
  double sse_partial = 0.0;

  friend bool operator==(const ClusterSums&, const ClusterSums&) = default;
};

// Local k-means statistics for one site.
struct CentroidSums {
  std::size_t k = 0;
  std::size_t dimension = 0;
  std::vector<ClusterSums> clusters;

  friend bool operator==(const CentroidSums&, const CentroidSums&) = default;
};

// Candidate support counts for one site (or, merged, for all sites).
struct ItemsetCounts {
  std::map<Itemset, std::uint64_t> counts;
  std::uint64_t transaction_count = 0;

  friend bool operator==(const ItemsetCounts&, const ItemsetCounts&) = default;
};

struct NumericMoments {
  double sum = 0.0;
  double sum_of_squares = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const NumericMoments&, const NumericMoments&) = default;
};

// Naive Bayes sufficient statistics.
struct BayesCounts {
  std::string label_column;
  // Feature columns (every column except the label), schema order.
  Schema features;
  std::map<std::string, std::uint64_t> class_counts;
  // (class, column, category) -> count
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> categorical;
  // (class, column) -> moments
  std::map<std::pair<std::string, std::string>, NumericMoments> numeric;

  std::uint64_t total() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [_, c] : class_counts) n += c;
    return n;
  }

  friend bool operator==(const BayesCounts&, const BayesCounts&) = default;
};

struct ClusteringModel {
  std::vector<std::vector<double>> centroids;
  double total_sse = 0.0;
  std::vector<std::uint64_t> counts;

  friend bool operator==(const ClusteringModel&, const ClusteringModel&) = default;
};

struct FrequentItemset {
  Itemset items;
  std::uint64_t count = 0;
  double support = 0.0;

  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

struct AssociationRule {
  Itemset antecedent;
  Itemset consequent;
  double support = 0.0;
  double confidence = 0.0;

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct RulesModel {
  std::uint64_t transaction_count = 0;
  // Sorted by itemset (lexicographic on the item vectors).
  std::vector<FrequentItemset> itemsets;
  // Sorted by (antecedent, consequent).
  std::vector<AssociationRule> rules;

  friend bool operator==(const RulesModel&, const RulesModel&) = default;
};

struct ClassifierModel {
  BayesCounts counts;

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

using GlobalModel = std::variant<ClusteringModel, RulesModel, ClassifierModel>;

std::string_view model_variant_name(const GlobalModel& m) noexcept;

}  // namespace admire
