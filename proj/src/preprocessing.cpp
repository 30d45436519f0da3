#include "admire/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "admire/error.hpp"
#include "admire/rng.hpp"

namespace admire::preprocessing {

namespace {

bool row_has_missing(const Row& r) {
  return std::any_of(r.begin(), r.end(), [](const Cell& c) { return is_missing(c); });
}

std::vector<std::size_t> numeric_targets(const Table& t, const std::vector<std::string>& columns) {
  std::vector<std::size_t> idx;
  for (const auto& name : columns) {
    const auto i = t.column_index(name);
    if (t.schema()[i].type != ColumnType::num) throw Error(Errc::non_numeric_column, name);
    idx.push_back(i);
  }
  return idx;
}

template <typename Fn>
Table map_column(const Table& t, std::size_t col, Fn fn) {
  std::vector<Row> rows = t.rows();
  for (auto& r : rows) {
    if (auto* d = std::get_if<double>(&r[col])) *d = fn(*d);
  }
  return Table(t.schema(), std::move(rows));
}

}  // namespace

std::vector<std::string> numeric_columns(const Table& t) {
  std::vector<std::string> out;
  for (const auto& c : t.schema()) {
    if (c.type == ColumnType::num) out.push_back(c.name);
  }
  return out;
}

Table clean_missing(const Table& t, MissingPolicy policy) {
  if (policy == MissingPolicy::drop_row) {
    Table out(t.schema());
    for (const auto& r : t.rows()) {
      if (!row_has_missing(r)) out.add_row(r);
    }
    return out;
  }

  // Replacement value per column; absent when the column has no observed cells.
  std::vector<std::optional<Cell>> fill(t.column_count());
  for (std::size_t c = 0; c < t.column_count(); ++c) {
    const auto stats = column_stats(t, t.schema()[c].name);
    if (auto* num = std::get_if<NumericStats>(&stats)) {
      if (num->mean) fill[c] = Cell(*num->mean);
    } else {
      const auto& hist = std::get<CategoricalStats>(stats).category_histogram;
      // std::map iterates lexicographically, so strict > keeps the smallest
      // category among equal counts.
      const std::string* best = nullptr;
      std::size_t best_count = 0;
      for (const auto& [cat, n] : hist) {
        if (n > best_count) {
          best = &cat;
          best_count = n;
        }
      }
      if (best) fill[c] = Cell(*best);
    }
  }

  Table out(t.schema());
  for (Row r : t.rows()) {
    bool keep = true;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (!is_missing(r[c])) continue;
      if (fill[c]) {
        r[c] = *fill[c];
      } else {
        keep = false;
      }
    }
    if (keep) out.add_row(std::move(r));
  }
  return out;
}

Table zscore(const Table& t, const std::vector<std::string>& columns) {
  const auto targets = numeric_targets(t, columns);
  Table out = t;
  for (const auto col : targets) {
    const auto stats = std::get<NumericStats>(column_stats(out, out.schema()[col].name));
    if (!stats.population_variance || !(*stats.population_variance > 0.0)) {
      throw Error(Errc::constant_column, out.schema()[col].name);
    }
    const double mean = *stats.mean;
    const double sd = std::sqrt(*stats.population_variance);
    out = map_column(out, col, [&](double x) { return (x - mean) / sd; });
  }
  return out;
}

Table minmax(const Table& t, const std::vector<std::string>& columns) {
  const auto targets = numeric_targets(t, columns);
  Table out = t;
  for (const auto col : targets) {
    const auto stats = std::get<NumericStats>(column_stats(out, out.schema()[col].name));
    if (!stats.min || !(*stats.max > *stats.min)) throw Error(Errc::constant_column, out.schema()[col].name);
    const double lo = *stats.min;
    const double span = *stats.max - lo;
    out = map_column(out, col, [&](double x) { return (x - lo) / span; });
  }
  return out;
}

Table sample(const Table& t, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::invalid_fraction, "fraction must be in (0, 1], got " + std::to_string(fraction));
  }
  const auto n = t.row_count();
  // The epsilon absorbs representation error such as 0.3 * 10 = 3.0000000000000004.
  auto m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  m = std::min(m, n);
  Rng rng(seed);
  const auto order = rng.permutation(n);
  Table out(t.schema());
  for (std::size_t i = 0; i < m; ++i) out.add_row(t.row(order[i]));
  return out;
}

}  // namespace admire::preprocessing
