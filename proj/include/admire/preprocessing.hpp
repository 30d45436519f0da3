#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "admire/table.hpp"

// Per-site data preparation. Every operation reads only the table it is given;
// statistics (means, modes, ranges) are local to that table.
namespace admire::preprocessing {

enum class MissingPolicy { drop_row, impute };

Table clean_missing(const Table& t, MissingPolicy policy);

// (x - mean) / population_std on each named numeric column.
Table zscore(const Table& t, const std::vector<std::string>& columns);

// (x - min) / (max - min) on each named numeric column.
Table minmax(const Table& t, const std::vector<std::string>& columns);

// ceil(fraction * n) rows drawn without replacement.
Table sample(const Table& t, double fraction, std::uint64_t seed);

// Names of all numeric columns, in schema order.
std::vector<std::string> numeric_columns(const Table& t);

}  // namespace admire::preprocessing
