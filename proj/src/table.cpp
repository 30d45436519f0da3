#include "admire/table.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "admire/error.hpp"
#include "admire/rng.hpp"

namespace admire {

std::string_view column_type_name(ColumnType t) noexcept {
  return t == ColumnType::num ? "num" : "cat";
}

std::optional<ColumnType> parse_column_type(std::string_view s) noexcept {
  if (s == "num") return ColumnType::num;
  if (s == "cat") return ColumnType::cat;
  return std::nullopt;
}

Table::Table(Schema schema) : schema_(std::move(schema)) {
  std::set<std::string> names;
  for (const auto& c : schema_) {
    if (!names.insert(c.name).second) {
      throw Error(Errc::parse_error, "duplicate column name '" + c.name + "'");
    }
  }
}

Table::Table(Schema schema, std::vector<Row> rows) : Table(std::move(schema)) {
  rows_.reserve(rows.size());
  for (auto& r : rows) add_row(std::move(r));
}

std::optional<std::size_t> Table::find_column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw Error(Errc::unknown_column, std::string(name));
}

void Table::check_row(const Row& row) const {
  if (row.size() != schema_.size()) {
    throw Error(Errc::shape_mismatch, "row has " + std::to_string(row.size()) + " cells, schema has " +
                                          std::to_string(schema_.size()));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (is_missing(row[i])) continue;
    const bool ok = schema_[i].type == ColumnType::num ? std::holds_alternative<double>(row[i])
                                                       : std::holds_alternative<std::string>(row[i]);
    if (!ok) throw Error(Errc::type_error, "column '" + schema_[i].name + "'");
  }
}

void Table::add_row(Row row) {
  check_row(row);
  rows_.push_back(std::move(row));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::string parse_msg(std::size_t line, const std::string& reason) {
  return "line " + std::to_string(line) + ": " + reason;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Table parse_table(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      if (start < text.size()) lines.push_back(trim_cr(text.substr(start)));
      break;
    }
    lines.push_back(trim_cr(text.substr(start, pos - start)));
    start = pos + 1;
  }
  if (lines.empty() || lines[0].empty()) throw Error(Errc::parse_error, parse_msg(1, "missing header"));
  if (lines.size() < 2) throw Error(Errc::parse_error, parse_msg(2, "missing type row"));

  const auto names = split_fields(lines[0]);
  const auto types = split_fields(lines[1]);
  if (names.size() != types.size()) {
    throw Error(Errc::parse_error, parse_msg(2, "type row has " + std::to_string(types.size()) +
                                                    " fields, header has " + std::to_string(names.size())));
  }
  Schema schema;
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw Error(Errc::parse_error, parse_msg(1, "empty column name"));
    if (!seen.insert(names[i]).second) {
      throw Error(Errc::parse_error, parse_msg(1, "duplicate column '" + std::string(names[i]) + "'"));
    }
    auto type = parse_column_type(types[i]);
    if (!type) throw Error(Errc::parse_error, parse_msg(2, "unknown type '" + std::string(types[i]) + "'"));
    schema.push_back({std::string(names[i]), *type});
  }

  Table table(schema);
  for (std::size_t ln = 2; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    const auto fields = split_fields(lines[ln]);
    if (fields.size() != schema.size()) {
      throw Error(Errc::parse_error, parse_msg(line_no, "expected " + std::to_string(schema.size()) +
                                                            " fields, got " + std::to_string(fields.size())));
    }
    Row row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = fields[c];
      if (f.empty() || f == "?") {
        row.emplace_back(Missing{});
      } else if (schema[c].type == ColumnType::cat) {
        row.emplace_back(std::string(f));
      } else {
        double v = 0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
          throw Error(Errc::type_error, "line " + std::to_string(line_no) + ", column '" + schema[c].name +
                                            "': '" + std::string(f) + "' is not a number");
        }
        row.emplace_back(v);
      }
    }
    table.add_row(std::move(row));
  }
  return table;
}

Table load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str());
}

std::string format_table(const Table& t) {
  std::string out;
  const auto& schema = t.schema();
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (i) out += ',';
    out += schema[i].name;
  }
  out += '\n';
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (i) out += ',';
    out += column_type_name(schema[i].type);
  }
  out += '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (is_missing(row[i])) {
        out += '?';
      } else if (auto* d = std::get_if<double>(&row[i])) {
        out += format_number(*d);
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

void write_table(const Table& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << format_table(t);
}

std::vector<Table> horizontal_partition(const Table& t, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error(Errc::invalid_k, "k must be >= 1");
  Rng rng(seed);
  const auto order = rng.permutation(t.row_count());
  std::vector<Table> parts(k, Table(t.schema()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    parts[i % k].add_row(t.row(order[i]));
  }
  return parts;
}

Table concatenate(std::span<const Table> parts) {
  if (parts.empty()) return Table{};
  Table out(parts.front().schema());
  for (const auto& p : parts) {
    if (p.schema() != out.schema()) throw Error(Errc::schema_mismatch, "partitions disagree on schema");
    for (const auto& r : p.rows()) out.add_row(r);
  }
  return out;
}

ColumnStats column_stats(const Table& t, std::string_view column) {
  const auto idx = t.column_index(column);
  if (t.schema()[idx].type == ColumnType::cat) {
    CategoricalStats s;
    for (const auto& row : t.rows()) {
      if (is_missing(row[idx])) {
        ++s.missing_count;
      } else {
        ++s.count;
        ++s.category_histogram[std::get<std::string>(row[idx])];
      }
    }
    return s;
  }
  NumericStats s;
  double sum = 0;
  double lo = 0;
  double hi = 0;
  for (const auto& row : t.rows()) {
    if (is_missing(row[idx])) {
      ++s.missing_count;
      continue;
    }
    const double v = std::get<double>(row[idx]);
    if (s.count == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    sum += v;
    ++s.count;
  }
  if (s.count == 0) return s;
  const double mean = sum / static_cast<double>(s.count);
  // Second pass about the mean; the one-pass E[x^2]-E[x]^2 form loses
  // precision on offset data.
  double ss = 0;
  for (const auto& row : t.rows()) {
    if (is_missing(row[idx])) continue;
    const double d = std::get<double>(row[idx]) - mean;
    ss += d * d;
  }
  s.mean = mean;
  s.population_variance = ss / static_cast<double>(s.count);
  s.min = lo;
  s.max = hi;
  return s;
}

std::uint64_t row_multiset_digest(const Table& t) {
  std::uint64_t schema_hash = 0xcbf29ce484222325ULL;
  for (const auto& c : t.schema()) {
    schema_hash = fnv1a(c.name, schema_hash);
    schema_hash = fnv1a(column_type_name(c.type), schema_hash);
    schema_hash = fnv1a(std::string_view("\x1f", 1), schema_hash);
  }
  std::uint64_t acc = mix64(schema_hash);
  for (const auto& row : t.rows()) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& cell : row) {
      if (is_missing(cell)) {
        h = fnv1a(std::string_view("M", 1), h);
      } else if (auto* d = std::get_if<double>(&cell)) {
        const double v = *d == 0.0 ? 0.0 : *d;  // fold -0.0 into 0.0
        const auto bits = std::bit_cast<std::uint64_t>(v);
        h = fnv1a(std::string_view("N", 1), h);
        h = fnv1a(std::string_view(reinterpret_cast<const char*>(&bits), sizeof bits), h);
      } else {
        const auto& s = std::get<std::string>(cell);
        const auto len = static_cast<std::uint64_t>(s.size());
        h = fnv1a(std::string_view("S", 1), h);
        h = fnv1a(std::string_view(reinterpret_cast<const char*>(&len), sizeof len), h);
        h = fnv1a(s, h);
      }
    }
    // Wrapping sum of mixed row hashes: commutative, so row order is irrelevant.
    acc += mix64(h);
  }
  return acc;
}

}  // namespace admire
