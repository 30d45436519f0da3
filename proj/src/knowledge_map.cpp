#include "admire/knowledge_map.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>

#include "admire/error.hpp"

namespace admire::knowledge {

namespace {

template <typename T>
void sort_by_site(std::vector<SitePartial<T>>& partials) {
  std::stable_sort(partials.begin(), partials.end(),
                   [](const SitePartial<T>& a, const SitePartial<T>& b) { return a.site < b.site; });
}

// Runs fn(site) for every site, in parallel under Policy::parallel. Each call
// writes only its own slot; the first exception is rethrown on the caller.
template <typename Fn>
void for_each_site(std::size_t n, kernels::Policy policy, Fn fn) {
  std::exception_ptr error;
  if (policy == kernels::Policy::parallel) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t s = 0; s < count; ++s) {
      try {
        fn(static_cast<std::size_t>(s));
      } catch (...) {
#pragma omp critical(admire_site_error)
        if (!error) error = std::current_exception();
      }
    }
  } else {
    for (std::size_t s = 0; s < n; ++s) fn(s);
  }
  if (error) std::rethrow_exception(error);
}

std::vector<SitePartial<CentroidSums>> local_kmeans(std::span<const Table> partitions,
                                                    std::span<const mining::Point> centroids,
                                                    kernels::Policy policy) {
  std::vector<SitePartial<CentroidSums>> partials(partitions.size());
  for_each_site(partitions.size(), policy, [&](std::size_t s) {
    partials[s] = {s, mining::kmeans_assign_and_sum(partitions[s], centroids, policy)};
  });
  return partials;
}

}  // namespace

MergedClusters merge_kmeans(std::vector<SitePartial<CentroidSums>> partials, std::span<const mining::Point> previous) {
  if (partials.empty()) throw Error(Errc::empty_data, "no partials to merge");
  sort_by_site(partials);
  const auto k = partials.front().value.k;
  const auto dim = partials.front().value.dimension;
  for (const auto& p : partials) {
    if (p.value.k != k || p.value.dimension != dim || p.value.clusters.size() != k) {
      throw Error(Errc::shape_mismatch, "site " + std::to_string(p.site) + " has k=" + std::to_string(p.value.k) +
                                            ", dim=" + std::to_string(p.value.dimension));
    }
  }
  if (previous.size() != k) throw Error(Errc::shape_mismatch, "previous centroids do not match k");

  MergedClusters out;
  out.centroids.resize(k);
  out.counts.assign(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> sum(dim, 0.0);
    std::uint64_t count = 0;
    for (const auto& p : partials) {
      const auto& cl = p.value.clusters[c];
      for (std::size_t j = 0; j < dim; ++j) sum[j] += cl.vector_sum[j];
      count += cl.count;
    }
    if (count == 0) {
      if (previous[c].size() != dim) throw Error(Errc::shape_mismatch, "previous centroid dimension");
      out.centroids[c] = previous[c];
    } else {
      for (auto& v : sum) v /= static_cast<double>(count);
      out.centroids[c] = std::move(sum);
    }
    out.counts[c] = count;
  }
  for (const auto& p : partials) {
    for (const auto& cl : p.value.clusters) out.total_sse += cl.sse_partial;
  }
  return out;
}

KMeansRun distributed_kmeans(std::span<const Table> partitions, std::size_t k, std::span<const mining::Point> init,
                             std::size_t max_iter, double tol, kernels::Policy policy) {
  if (k < 1 || init.size() != k) {
    throw Error(Errc::bad_k, "k=" + std::to_string(k) + " with " + std::to_string(init.size()) + " initial centroids");
  }
  if (max_iter < 1) throw Error(Errc::invalid_argument, "max_iter must be >= 1");
  if (!(tol >= 0.0)) throw Error(Errc::invalid_argument, "tol must be >= 0");
  std::size_t rows = 0;
  for (const auto& p : partitions) rows += p.row_count();
  if (rows == 0) throw Error(Errc::empty_data, "no rows to cluster");

  KMeansRun run;
  std::vector<mining::Point> centroids(init.begin(), init.end());
  for (std::size_t it = 0; it < max_iter; ++it) {
    // Barrier: every site's partial must be in before the merge.
    auto merged = merge_kmeans(local_kmeans(partitions, centroids, policy), centroids);
    double displacement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      displacement = std::max(displacement, std::sqrt(kernels::squared_distance(centroids[c], merged.centroids[c])));
    }
    centroids = std::move(merged.centroids);
    run.trajectory.push_back(centroids);
    ++run.iterations;
    if (displacement < tol) break;
  }
  auto final_pass = merge_kmeans(local_kmeans(partitions, centroids, policy), centroids);
  run.model.centroids = std::move(centroids);
  run.model.total_sse = final_pass.total_sse;
  run.model.counts = std::move(final_pass.counts);
  return run;
}

std::vector<mining::Point> first_distinct_rows(std::span<const Table> partitions, std::size_t k) {
  std::vector<mining::Point> picked;
  for (const auto& part : partitions) {
    const auto m = mining::to_dense(part);
    for (std::size_t i = 0; i < m.rows && picked.size() < k; ++i) {
      mining::Point p(m.row(i).begin(), m.row(i).end());
      if (std::find(picked.begin(), picked.end(), p) == picked.end()) picked.push_back(std::move(p));
    }
  }
  if (picked.size() < k || k == 0) {
    throw Error(Errc::bad_k, "need " + std::to_string(k) + " distinct rows, found " + std::to_string(picked.size()));
  }
  return picked;
}

ItemsetCounts merge_apriori(std::vector<SitePartial<ItemsetCounts>> level_counts) {
  sort_by_site(level_counts);
  ItemsetCounts out;
  for (const auto& p : level_counts) {
    out.transaction_count += p.value.transaction_count;
    for (const auto& [set, n] : p.value.counts) out.counts[set] += n;
  }
  return out;
}

AprioriRun drive_apriori(std::span<const std::vector<Transaction>> partitions, double minsup, double minconf,
                         kernels::Policy policy) {
  if (!(minsup > 0.0 && minsup <= 1.0)) throw Error(Errc::invalid_threshold, "minsup " + std::to_string(minsup));
  if (!(minconf > 0.0 && minconf <= 1.0)) throw Error(Errc::invalid_threshold, "minconf " + std::to_string(minconf));

  AprioriRun run;
  std::uint64_t total = 0;
  for (const auto& p : partitions) total += p.size();
  run.model.transaction_count = total;
  if (total == 0) return run;

  // Level 1: the union of site vocabularies.
  std::set<Item> vocab;
  for (const auto& p : partitions) {
    for (const auto& tx : p) vocab.insert(tx.begin(), tx.end());
  }
  std::vector<Itemset> candidates;
  for (const auto& item : vocab) candidates.push_back({item});

  std::map<Itemset, std::uint64_t> frequent_counts;
  const auto n = static_cast<double>(total);
  while (!candidates.empty()) {
    std::vector<SitePartial<ItemsetCounts>> partials(partitions.size());
    for_each_site(partitions.size(), policy, [&](std::size_t s) {
      partials[s] = {s, mining::apriori_count(partitions[s], candidates, policy)};
    });
    const auto global = merge_apriori(std::move(partials));
    ++run.levels;

    std::vector<Itemset> frequent;
    for (const auto& [set, count] : global.counts) {
      if (static_cast<double>(count) / n >= minsup) {
        frequent.push_back(set);
        frequent_counts[set] = count;
      }
    }
    candidates = mining::apriori_gen(frequent);
  }

  for (const auto& [set, count] : frequent_counts) {
    run.model.itemsets.push_back({set, count, static_cast<double>(count) / n});
  }

  for (const auto& [z, z_count] : frequent_counts) {
    if (z.size() < 2) continue;
    const std::size_t m = z.size();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
      Itemset lhs;
      Itemset rhs;
      for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1 ? lhs : rhs).push_back(z[i]);
      const auto lhs_count = frequent_counts.at(lhs);  // downward closure
      const double confidence = static_cast<double>(z_count) / static_cast<double>(lhs_count);
      if (confidence >= minconf) {
        run.model.rules.push_back({std::move(lhs), std::move(rhs), static_cast<double>(z_count) / n, confidence});
      }
    }
  }
  std::sort(run.model.rules.begin(), run.model.rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
  });
  return run;
}

BayesCounts merge_bayes(std::vector<SitePartial<BayesCounts>> partials) {
  if (partials.empty()) throw Error(Errc::empty_data, "no partials to merge");
  sort_by_site(partials);
  BayesCounts out;
  out.label_column = partials.front().value.label_column;
  out.features = partials.front().value.features;
  for (const auto& p : partials) {
    const auto& b = p.value;
    if (b.label_column != out.label_column || b.features != out.features) {
      throw Error(Errc::schema_mismatch, "site " + std::to_string(p.site) + " has a different label or feature set");
    }
    for (const auto& [cls, n] : b.class_counts) out.class_counts[cls] += n;
    for (const auto& [key, n] : b.categorical) out.categorical[key] += n;
    for (const auto& [key, m] : b.numeric) {
      auto& acc = out.numeric[key];
      acc.sum += m.sum;
      acc.sum_of_squares += m.sum_of_squares;
      acc.count += m.count;
    }
  }
  return out;
}

BayesCounts distributed_bayes(std::span<const Table> partitions, std::string_view label_column) {
  std::vector<SitePartial<BayesCounts>> partials(partitions.size());
  for_each_site(partitions.size(), kernels::Policy::parallel,
                [&](std::size_t s) { partials[s] = {s, mining::bayes_fit(partitions[s], label_column)}; });
  return merge_bayes(std::move(partials));
}

DataSummary summarize(const Table& t, std::optional<std::string> label) { return {t.schema(), std::move(label)}; }

void check_compatibility(TaskKind kind, const DataSummary& summary) {
  auto incompatible = [&](const std::string& reason) {
    return Error(Errc::data_incompatible, std::string(task_kind_name(kind)) + ": " + reason);
  };
  const auto& cols = summary.columns;
  switch (kind) {
    case TaskKind::clustering:
      for (const auto& c : cols) {
        if (c.type != ColumnType::num) throw incompatible("column '" + c.name + "' is categorical");
      }
      if (cols.empty()) throw incompatible("no columns");
      break;
    case TaskKind::association_rules:
      if (std::none_of(cols.begin(), cols.end(), [](const Column& c) { return c.type == ColumnType::cat; })) {
        throw incompatible("no categorical column");
      }
      break;
    case TaskKind::classification: {
      if (!summary.label) throw incompatible("no label column given");
      auto it = std::find_if(cols.begin(), cols.end(), [&](const Column& c) { return c.name == *summary.label; });
      if (it == cols.end()) throw incompatible("label '" + *summary.label + "' not in data");
      if (it->type != ColumnType::cat) throw incompatible("label '" + *summary.label + "' is not categorical");
      break;
    }
    default:
      break;
  }
}

AlgorithmDescriptor select_strategy(TaskKind kind, const DataSummary& summary, const Repository& repo) {
  auto algorithms = repo.query_by_kind(kind);
  if (algorithms.empty()) throw Error(Errc::no_algorithm, std::string(task_kind_name(kind)));
  check_compatibility(kind, summary);
  return algorithms.front();
}

std::string_view builtin_algorithm(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::preprocessing: return "clean_impute";
    case TaskKind::data_distribution: return "horizontal";
    case TaskKind::clustering: return "kmeans";
    case TaskKind::association_rules: return "apriori";
    case TaskKind::classification: return "naive-bayes";
    case TaskKind::evaluation: return "evaluate";
  }
  return "?";
}

namespace {

void check_model(const GlobalModel& model) {
  auto bad = [](const std::string& why) { return Error(Errc::invalid_argument, "invalid model: " + why); };
  if (const auto* c = std::get_if<ClusteringModel>(&model)) {
    if (c->counts.size() != c->centroids.size()) throw bad("counts and centroids differ in length");
  } else if (const auto* r = std::get_if<RulesModel>(&model)) {
    for (const auto& f : r->itemsets) {
      if (f.support < 0.0 || f.support > 1.0) throw bad("support out of range");
    }
    for (const auto& rule : r->rules) {
      if (rule.support < 0.0 || rule.support > 1.0 || rule.confidence < 0.0 || rule.confidence > 1.0) {
        throw bad("rule support/confidence out of range");
      }
    }
  }
}

}  // namespace

KnowledgeEntry emit_knowledge(Repository& repo, const std::string& job, const std::string& task, GlobalModel model,
                              std::map<std::string, double> metrics) {
  check_model(model);
  return repo.add_knowledge(KnowledgeEntry{job, task, std::move(model), std::move(metrics), 0});
}

}  // namespace admire::knowledge
