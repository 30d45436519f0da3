#include "admire/results_eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "admire/error.hpp"
#include "admire/kernels.hpp"
#include "admire/local_mining.hpp"

namespace admire::eval {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(Errc::length_mismatch, std::to_string(a) + " predictions vs " + std::to_string(b) + " labels");
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join_items(const Itemset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s[i];
  return out + "}";
}

}  // namespace

double accuracy(std::span<const std::string> predictions, std::span<const std::string> truth) {
  check_lengths(predictions.size(), truth.size());
  if (predictions.empty()) throw Error(Errc::empty_input, "no predictions");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) hits += predictions[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double clustering_sse(const ClusteringModel& model, const Table& data) {
  if (model.centroids.empty()) throw Error(Errc::dimension_mismatch, "model has no centroids");
  for (const auto& c : model.centroids) {
    if (c.size() != data.column_count()) {
      throw Error(Errc::dimension_mismatch, "centroid has " + std::to_string(c.size()) + " dims, data has " +
                                                std::to_string(data.column_count()));
    }
  }
  const auto points = mining::to_dense(data);
  double sse = 0.0;
  for (std::size_t i = 0; i < points.rows; ++i) {
    double best = kernels::squared_distance(points.row(i), model.centroids[0]);
    for (std::size_t c = 1; c < model.centroids.size(); ++c) {
      best = std::min(best, kernels::squared_distance(points.row(i), model.centroids[c]));
    }
    sse += best;
  }
  return sse;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> predictions, std::span<const std::string> truth) {
  check_lengths(predictions.size(), truth.size());
  ConfusionMatrix m;
  for (std::size_t i = 0; i < predictions.size(); ++i) ++m[truth[i]][predictions[i]];
  return m;
}

std::string render_model(const GlobalModel& model) {
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };

  if (const auto* c = std::get_if<ClusteringModel>(&model)) {
    line("clustering k=" + std::to_string(c->centroids.size()) + " total_sse=" + fixed6(c->total_sse));
    for (std::size_t i = 0; i < c->centroids.size(); ++i) {
      std::string coords;
      for (std::size_t j = 0; j < c->centroids[i].size(); ++j) coords += (j ? ", " : "") + fixed6(c->centroids[i][j]);
      const auto count = i < c->counts.size() ? c->counts[i] : 0;
      line("centroid " + std::to_string(i) + " count=" + std::to_string(count) + " [" + coords + "]");
    }
  } else if (const auto* r = std::get_if<RulesModel>(&model)) {
    line("rules count=" + std::to_string(r->rules.size()) + " transactions=" + std::to_string(r->transaction_count));
    auto rules = r->rules;
    std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
      if (a.confidence != b.confidence) return a.confidence > b.confidence;
      if (a.support != b.support) return a.support > b.support;
      return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
    });
    for (const auto& rule : rules) {
      line(join_items(rule.antecedent) + " => " + join_items(rule.consequent) + " confidence=" +
           fixed6(rule.confidence) + " support=" + fixed6(rule.support));
    }
  } else {
    const auto& b = std::get<ClassifierModel>(model).counts;
    const auto total = b.total();
    line("classifier label=" + b.label_column + " classes=" + std::to_string(b.class_counts.size()) +
         " rows=" + std::to_string(total));
    for (const auto& [cls, n] : b.class_counts) {
      line("prior " + cls + " " + fixed6(total ? static_cast<double>(n) / static_cast<double>(total) : 0.0) +
           " count=" + std::to_string(n));
    }
    auto features = b.features;
    std::sort(features.begin(), features.end(), [](const Column& x, const Column& y) { return x.name < y.name; });
    for (const auto& f : features) {
      line("feature " + f.name + " (" + std::string(column_type_name(f.type)) + ")");
      if (f.type == ColumnType::cat) {
        for (const auto& [key, n] : b.categorical) {
          const auto& [cls, col, cat] = key;
          if (col == f.name) line("  " + cls + " " + cat + " count=" + std::to_string(n));
        }
      } else {
        for (const auto& [key, m] : b.numeric) {
          if (key.second != f.name || m.count == 0) continue;
          const double mean = m.sum / static_cast<double>(m.count);
          const double var = m.sum_of_squares / static_cast<double>(m.count) - mean * mean;
          line("  " + key.first + " mean=" + fixed6(mean) + " variance=" + fixed6(std::max(var, 0.0)) +
               " count=" + std::to_string(m.count));
        }
      }
    }
  }
  return out;
}

std::string render_metrics(const std::map<std::string, double>& metrics) {
  std::string out;
  for (const auto& [key, v] : metrics) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += key + " = " + buf + "\n";
  }
  return out;
}

}  // namespace admire::eval
