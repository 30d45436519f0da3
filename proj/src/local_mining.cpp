#include "admire/local_mining.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "admire/error.hpp"

namespace admire {

std::string_view model_variant_name(const GlobalModel& m) noexcept {
  switch (m.index()) {
    case 0: return "clustering";
    case 1: return "rules";
    default: return "classifier";
  }
}

}  // namespace admire

namespace admire::mining {

kernels::DenseMatrix to_dense(const Table& t) {
  kernels::DenseMatrix m;
  m.rows = t.row_count();
  m.cols = t.column_count();
  for (const auto& c : t.schema()) {
    if (c.type != ColumnType::num) throw Error(Errc::non_numeric_data, "column '" + c.name + "' is categorical");
  }
  m.values.reserve(m.rows * m.cols);
  for (std::size_t i = 0; i < t.row_count(); ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      const auto* v = std::get_if<double>(&t.row(i)[j]);
      if (!v) {
        throw Error(Errc::non_numeric_data,
                    "missing cell at row " + std::to_string(i) + ", column '" + t.schema()[j].name + "'");
      }
      m.values.push_back(*v);
    }
  }
  return m;
}

CentroidSums kmeans_assign_and_sum(const Table& partition, std::span<const Point> centroids,
                                   kernels::Policy policy) {
  if (centroids.empty()) throw Error(Errc::bad_k, "no centroids");
  const std::size_t dim = partition.column_count();
  kernels::DenseMatrix cm;
  cm.rows = centroids.size();
  cm.cols = dim;
  for (const auto& c : centroids) {
    if (c.size() != dim) {
      throw Error(Errc::dimension_mismatch,
                  "centroid has " + std::to_string(c.size()) + " dims, table has " + std::to_string(dim));
    }
    cm.values.insert(cm.values.end(), c.begin(), c.end());
  }
  const auto points = to_dense(partition);

  std::vector<std::uint32_t> labels(points.rows);
  std::vector<double> dist2(points.rows);
  kernels::assign_nearest(policy, points, cm, labels, dist2);

  CentroidSums out;
  out.k = centroids.size();
  out.dimension = dim;
  out.clusters.assign(out.k, ClusterSums{std::vector<double>(dim, 0.0), 0, 0.0});
  for (std::size_t i = 0; i < points.rows; ++i) {
    auto& cl = out.clusters[labels[i]];
    const auto p = points.row(i);
    for (std::size_t j = 0; j < dim; ++j) cl.vector_sum[j] += p[j];
    ++cl.count;
    cl.sse_partial += dist2[i];
  }
  return out;
}

std::string make_item(std::string_view column, std::string_view value) {
  std::string s(column);
  s += '=';
  s += value;
  return s;
}

std::vector<Transaction> transactions_from_table(const Table& t) {
  std::vector<Transaction> out;
  out.reserve(t.row_count());
  for (const auto& row : t.rows()) {
    Transaction tx;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (const auto* s = std::get_if<std::string>(&row[c])) tx.push_back(make_item(t.schema()[c].name, *s));
    }
    std::sort(tx.begin(), tx.end());
    tx.erase(std::unique(tx.begin(), tx.end()), tx.end());
    out.push_back(std::move(tx));
  }
  return out;
}

ItemsetCounts apriori_count(std::span<const Transaction> partition, std::span<const Itemset> candidates,
                            kernels::Policy policy) {
  // Encode only items that occur in some candidate; ids follow lexicographic
  // order so encoded sets stay sorted.
  std::vector<Item> vocab;
  for (const auto& c : candidates) vocab.insert(vocab.end(), c.begin(), c.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  auto encode = [&](const Itemset& s, bool skip_unknown) {
    kernels::EncodedSet e;
    e.reserve(s.size());
    for (const auto& item : s) {
      auto it = std::lower_bound(vocab.begin(), vocab.end(), item);
      if (it != vocab.end() && *it == item) {
        e.push_back(static_cast<std::uint32_t>(it - vocab.begin()));
      } else if (!skip_unknown) {
        e.push_back(~std::uint32_t{0});
      }
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
  };

  std::vector<kernels::EncodedSet> tx;
  tx.reserve(partition.size());
  for (const auto& t : partition) tx.push_back(encode(t, true));
  std::vector<kernels::EncodedSet> cand;
  cand.reserve(candidates.size());
  for (const auto& c : candidates) cand.push_back(encode(c, false));

  std::vector<std::uint64_t> counts(cand.size());
  kernels::count_subsets(policy, tx, cand, counts);

  ItemsetCounts out;
  out.transaction_count = partition.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Itemset key = candidates[i];
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    out.counts[key] = counts[i];
  }
  return out;
}

std::vector<Itemset> apriori_gen(std::span<const Itemset> frequent_k) {
  if (frequent_k.empty()) return {};
  const std::size_t k = frequent_k.front().size();
  for (const auto& s : frequent_k) {
    if (s.size() != k) throw Error(Errc::mixed_sizes, "itemsets of sizes " + std::to_string(k) + " and " +
                                                          std::to_string(s.size()));
  }
  if (k == 0) return {};
  std::set<Itemset> frequent(frequent_k.begin(), frequent_k.end());
  std::vector<Itemset> sorted(frequent.begin(), frequent.end());

  std::set<Itemset> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const auto& a = sorted[i];
      const auto& b = sorted[j];
      // Sorted order groups equal (k-1)-prefixes together.
      if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;
      Itemset cand = a;
      cand.push_back(b.back());
      bool all_frequent = true;
      for (std::size_t drop = 0; drop < cand.size() && all_frequent; ++drop) {
        Itemset sub;
        sub.reserve(k);
        for (std::size_t x = 0; x < cand.size(); ++x) {
          if (x != drop) sub.push_back(cand[x]);
        }
        all_frequent = frequent.count(sub) > 0;
      }
      if (all_frequent) out.insert(std::move(cand));
    }
  }
  return {out.begin(), out.end()};
}

BayesCounts bayes_fit(const Table& partition, std::string_view label_column) {
  const auto label_idx = partition.column_index(label_column);
  if (partition.schema()[label_idx].type != ColumnType::cat) {
    throw Error(Errc::type_error, "label column '" + std::string(label_column) + "' must be categorical");
  }
  BayesCounts out;
  out.label_column = std::string(label_column);
  for (std::size_t c = 0; c < partition.column_count(); ++c) {
    if (c != label_idx) out.features.push_back(partition.schema()[c]);
  }
  for (std::size_t r = 0; r < partition.row_count(); ++r) {
    const auto& row = partition.row(r);
    const auto* label = std::get_if<std::string>(&row[label_idx]);
    if (!label) throw Error(Errc::missing_label, "row " + std::to_string(r));
    ++out.class_counts[*label];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == label_idx || is_missing(row[c])) continue;
      const auto& name = partition.schema()[c].name;
      if (const auto* s = std::get_if<std::string>(&row[c])) {
        ++out.categorical[{*label, name, *s}];
      } else {
        const double v = std::get<double>(row[c]);
        auto& m = out.numeric[{*label, name}];
        m.sum += v;
        m.sum_of_squares += v * v;
        ++m.count;
      }
    }
  }
  return out;
}

Prediction bayes_predict(const BayesCounts& model, const Schema& schema, const Row& row) {
  const auto total = model.total();
  if (model.class_counts.empty() || total == 0) throw Error(Errc::empty_model, "classifier has no classes");
  if (row.size() != schema.size()) throw Error(Errc::shape_mismatch, "row does not match schema");

  // Category vocabulary and per-class observed totals for each categorical feature.
  std::map<std::string, std::set<std::string>> vocab;
  std::map<std::pair<std::string, std::string>, std::uint64_t> observed;
  for (const auto& [key, n] : model.categorical) {
    const auto& [cls, col, cat] = key;
    vocab[col].insert(cat);
    observed[{cls, col}] += n;
  }

  Prediction pred;
  for (const auto& [cls, n] : model.class_counts) {
    double score = std::log(static_cast<double>(n) / static_cast<double>(total));
    for (const auto& feature : model.features) {
      std::optional<std::size_t> idx;
      for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].name == feature.name) idx = i;
      }
      if (!idx || is_missing(row[*idx])) continue;
      if (feature.type == ColumnType::cat) {
        const auto* value = std::get_if<std::string>(&row[*idx]);
        if (!value) continue;
        auto it = model.categorical.find({cls, feature.name, *value});
        const double hits = it == model.categorical.end() ? 0.0 : static_cast<double>(it->second);
        auto ob = observed.find({cls, feature.name});
        const double seen = ob == observed.end() ? 0.0 : static_cast<double>(ob->second);
        const double v = static_cast<double>(vocab[feature.name].size());
        score += std::log((hits + kLaplaceAlpha) / (seen + kLaplaceAlpha * v));
      } else {
        const auto* x = std::get_if<double>(&row[*idx]);
        auto it = model.numeric.find({cls, feature.name});
        if (!x || it == model.numeric.end() || it->second.count == 0) continue;
        const double cnt = static_cast<double>(it->second.count);
        const double mean = it->second.sum / cnt;
        const double var = std::max(it->second.sum_of_squares / cnt - mean * mean, kVarianceFloor);
        const double d = *x - mean;
        score += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
      }
    }
    pred.log_scores[cls] = score;
  }
  // Map order is lexicographic; strict > keeps the smallest class on ties.
  bool first = true;
  double best = 0;
  for (const auto& [cls, s] : pred.log_scores) {
    if (first || s > best) {
      best = s;
      pred.label = cls;
      first = false;
    }
  }
  return pred;
}

}  // namespace admire::mining
