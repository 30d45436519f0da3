#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace admire {

enum class ColumnType { num, cat };

std::string_view column_type_name(ColumnType t) noexcept;
std::optional<ColumnType> parse_column_type(std::string_view s) noexcept;

struct Column {
  std::string name;
  ColumnType type = ColumnType::num;

  friend bool operator==(const Column&, const Column&) = default;
};

using Schema = std::vector<Column>;

struct Missing {
  friend bool operator==(Missing, Missing) { return true; }
  friend bool operator<(Missing, Missing) { return false; }
};

// A cell is a number, a category string, or missing.
using Cell = std::variant<Missing, double, std::string>;
using Row = std::vector<Cell>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<Missing>(c); }

// Typed tabular dataset. Immutable once built; rows are validated against the
// schema on construction.
class Table {
 public:
  Table() = default;
  explicit Table(Schema schema);
  Table(Schema schema, std::vector<Row> rows);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t column_count() const noexcept { return schema_.size(); }
  const Row& row(std::size_t i) const { return rows_.at(i); }

  // Throws unknown-column.
  std::size_t column_index(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const noexcept;

  void add_row(Row row);

  friend bool operator==(const Table&, const Table&) = default;

 private:
  void check_row(const Row& row) const;

  Schema schema_;
  std::vector<Row> rows_;
};

// Table file dialect: header line of names, a line of types (num|cat), then
// rows. `?` or an empty field is missing. No quoting.
Table load_table(const std::filesystem::path& path);
Table parse_table(std::string_view text);
std::string format_table(const Table& t);
void write_table(const Table& t, const std::filesystem::path& path);

// Seeded shuffle followed by round-robin dealing; sizes differ by at most one.
std::vector<Table> horizontal_partition(const Table& t, std::size_t k, std::uint64_t seed);

// Rows of all parts in order. Schemas must agree.
Table concatenate(std::span<const Table> parts);

struct NumericStats {
  std::size_t count = 0;
  std::size_t missing_count = 0;
  std::optional<double> mean;
  std::optional<double> population_variance;
  std::optional<double> min;
  std::optional<double> max;
};

struct CategoricalStats {
  std::size_t count = 0;
  std::size_t missing_count = 0;
  std::map<std::string, std::size_t> category_histogram;
};

using ColumnStats = std::variant<NumericStats, CategoricalStats>;

ColumnStats column_stats(const Table& t, std::string_view column);

// Order-independent digest of the row multiset (and schema).
std::uint64_t row_multiset_digest(const Table& t);

}  // namespace admire
