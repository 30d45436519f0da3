#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "admire/kernels.hpp"
#include "admire/local_mining.hpp"
#include "admire/models.hpp"
#include "admire/repositories.hpp"
#include "admire/table.hpp"

// Integration of site-local statistics into global models. Merges fold
// partials in ascending site order so results do not depend on arrival order.
namespace admire::knowledge {

template <typename T>
struct SitePartial {
  std::size_t site = 0;
  T value;
};

struct MergedClusters {
  std::vector<mining::Point> centroids;
  double total_sse = 0.0;
  std::vector<std::uint64_t> counts;
};

// centroid = Σ sums / Σ counts; a cluster with no rows keeps its entry from
// `previous`. Throws shape-mismatch.
MergedClusters merge_kmeans(std::vector<SitePartial<CentroidSums>> partials,
                            std::span<const mining::Point> previous);

struct KMeansRun {
  ClusteringModel model;
  // Centroids after each iteration.
  std::vector<std::vector<mining::Point>> trajectory;
  std::size_t iterations = 0;
};

// Iterates local assignment per partition and a global merge until the
// largest centroid displacement (Euclidean) falls below `tol` or `max_iter`
// is reached. The reported SSE and counts come from a final assignment pass
// against the returned centroids. Throws empty-data, bad-k.
KMeansRun distributed_kmeans(std::span<const Table> partitions, std::size_t k, std::span<const mining::Point> init,
                             std::size_t max_iter, double tol, kernels::Policy policy = kernels::Policy::parallel);

// First k pairwise-distinct rows of the concatenated partitions. Throws bad-k.
std::vector<mining::Point> first_distinct_rows(std::span<const Table> partitions, std::size_t k);

ItemsetCounts merge_apriori(std::vector<SitePartial<ItemsetCounts>> level_counts);

struct AprioriRun {
  RulesModel model;
  // Candidate levels counted (the last one may yield nothing frequent).
  std::size_t levels = 0;
};

// Count-distribution Apriori: every level's candidates are counted at each
// site and the counts summed before the frequency test. Throws
// invalid-threshold.
AprioriRun drive_apriori(std::span<const std::vector<Transaction>> partitions, double minsup, double minconf,
                         kernels::Policy policy = kernels::Policy::parallel);

// Throws schema-mismatch.
BayesCounts merge_bayes(std::vector<SitePartial<BayesCounts>> partials);

// bayes_fit on every partition, then merge_bayes.
BayesCounts distributed_bayes(std::span<const Table> partitions, std::string_view label_column);

// Shape of the data a task will see, used for strategy selection.
struct DataSummary {
  Schema columns;
  std::optional<std::string> label;
};

DataSummary summarize(const Table& t, std::optional<std::string> label = std::nullopt);

// Clustering needs all-numeric data, association rules at least one
// categorical column, classification a categorical label. Throws
// data-incompatible.
void check_compatibility(TaskKind kind, const DataSummary& summary);

// Among the algorithms of the kind, the smallest id wins. Throws
// no-algorithm, data-incompatible.
AlgorithmDescriptor select_strategy(TaskKind kind, const DataSummary& summary, const Repository& repo);

// Name of the implementation shipped for each kind, used when a job asks for
// "auto" and nothing of that kind has been published.
std::string_view builtin_algorithm(TaskKind kind) noexcept;

// Throws duplicate-entry.
KnowledgeEntry emit_knowledge(Repository& repo, const std::string& job, const std::string& task, GlobalModel model,
                              std::map<std::string, double> metrics);

}  // namespace admire::knowledge
