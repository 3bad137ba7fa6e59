#include "bcpr/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "bcpr/error.hpp"

namespace bcpr {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool blank(std::string_view cell) { return trim(cell).empty(); }

bool needs_quotes(const std::string& cell) {
  return cell.find_first_of(",\"\r\n") != std::string::npos;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  return std::nullopt;
}

CsvTable parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line.
    if (!(record.size() == 1 && record.front().empty())) records.push_back(std::move(record));
    record.clear();
  };

  char c = 0;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) {
          throw ParseError(records.size(), "", "stray quote on line " + std::to_string(line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError(records.size(), "", "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) fail(ErrorCode::EmptyFile, "no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = std::string(trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw ParseError(r, "", "expected " + std::to_string(table.header.size()) + " fields, found " +
                                  std::to_string(records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::Io, "cannot open " + path.string());
  return parse_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  const auto write_record = [&](const std::vector<std::string>& rec) {
    for (std::size_t c = 0; c < rec.size(); ++c) {
      if (c) out << ',';
      if (needs_quotes(rec[c])) {
        out << '"';
        for (char ch : rec[c]) {
          if (ch == '"') out << '"';
          out << ch;
        }
        out << '"';
      } else {
        out << rec[c];
      }
    }
    out << '\n';
  };
  write_record(table.header);
  for (const auto& row : table.rows) write_record(row);
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::Io, "cannot write " + path.string());
  write_csv(out, table);
  require(out.good(), ErrorCode::Io, "write failed for " + path.string());
}

std::vector<std::string> EncodingMap::feature_names() const {
  std::vector<std::string> names;
  for (const auto& col : columns) {
    if (!col.categorical) {
      names.push_back(col.name);
      continue;
    }
    for (const auto& cat : col.categories) names.push_back(col.name + "=" + cat);
  }
  return names;
}

Index EncodingMap::width() const {
  Index w = 0;
  for (const auto& col : columns) w += col.categorical ? static_cast<Index>(col.categories.size()) : 1;
  return w;
}

namespace {

struct Layout {
  std::vector<std::size_t> source;  // table column for each map column
  std::size_t label = 0;
};

Layout locate(const EncodingMap& map, const CsvTable& raw, bool need_label) {
  Layout layout;
  for (const auto& col : map.columns) {
    const auto idx = raw.column(col.name);
    require(idx.has_value(), ErrorCode::UnknownColumn, "column '" + col.name + "' missing from input");
    layout.source.push_back(*idx);
  }
  if (need_label) {
    const auto idx = raw.column(map.label_column);
    require(idx.has_value(), ErrorCode::MissingLabelColumn, "label column '" + map.label_column + "' missing");
    layout.label = *idx;
  }
  return layout;
}

// Writes one encoded row; false when a numeric cell is blank.
bool encode_row(const EncodingMap& map, const Layout& layout, const std::vector<std::string>& row,
                std::size_t row_number, Eigen::Ref<Eigen::RowVectorXd> out) {
  out.setZero();
  Index pos = 0;
  for (std::size_t c = 0; c < map.columns.size(); ++c) {
    const auto& col = map.columns[c];
    const std::string& cell = row[layout.source[c]];
    if (col.categorical) {
      const std::string_view value = trim(cell);
      for (std::size_t k = 0; k < col.categories.size(); ++k) {
        if (col.categories[k] == value) out[pos + static_cast<Index>(k)] = 1.0;
      }
      pos += static_cast<Index>(col.categories.size());
      continue;
    }
    if (blank(cell)) return false;
    const auto v = parse_number(cell);
    if (!v) throw ParseError(row_number, col.name, "'" + cell + "' is not a finite number");
    out[pos++] = (*v - col.shift) / col.scale;
  }
  return true;
}

int map_label(const std::string& cell, const std::string& positive, std::size_t row_number, const std::string& column) {
  const std::string_view v = trim(cell);
  if (v.empty()) throw ParseError(row_number, column, "missing label");
  return v == positive ? 1 : -1;
}

}  // namespace

LoadedCsv build_dataset(const CsvTable& table, const CsvSchema& schema) {
  if (table.rows.empty()) fail(ErrorCode::EmptyFile, "no data rows");
  const auto label_idx = table.column(schema.label_column);
  require(label_idx.has_value(), ErrorCode::MissingLabelColumn,
          "label column '" + schema.label_column + "' not in header");

  std::set<std::string> declared;
  if (schema.categorical_columns) {
    for (const auto& name : *schema.categorical_columns) {
      require(table.column(name).has_value(), ErrorCode::UnknownColumn, "categorical column '" + name + "' not in header");
      declared.insert(name);
    }
  }

  EncodingMap map;
  map.label_column = schema.label_column;
  map.positive_label = schema.positive_label;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == *label_idx) continue;
    ColumnEncoding col;
    col.name = table.header[c];
    if (schema.categorical_columns) {
      col.categorical = declared.contains(col.name);
    } else {
      for (const auto& row : table.rows) {
        if (!blank(row[c]) && !parse_number(row[c])) {
          col.categorical = true;
          break;
        }
      }
    }
    map.columns.push_back(std::move(col));
    feature_cols.push_back(c);
  }
  require(!map.columns.empty(), ErrorCode::SchemaViolation, "no feature columns besides the label");

  // Rows with a blank numeric cell are dropped before categories are collected.
  LoadSummary summary;
  summary.rows_read = table.rows.size();
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    bool missing = false;
    for (std::size_t c = 0; c < map.columns.size(); ++c) {
      if (!map.columns[c].categorical && blank(table.rows[r][feature_cols[c]])) missing = true;
    }
    if (missing) {
      ++summary.rows_rejected;
    } else {
      kept.push_back(r);
    }
  }
  if (kept.empty()) fail(ErrorCode::EmptyFile, "every row has a missing numeric value");

  for (std::size_t c = 0; c < map.columns.size(); ++c) {
    auto& col = map.columns[c];
    if (!col.categorical) continue;
    std::set<std::string, std::less<>> seen;
    for (std::size_t r : kept) {
      const std::string value(trim(table.rows[r][feature_cols[c]]));
      if (value.empty()) continue;
      if (seen.insert(value).second) col.categories.push_back(value);
    }
  }

  const Layout layout{feature_cols, *label_idx};
  RowMatrix<double> X(static_cast<Index>(kept.size()), map.width());
  Labels y(static_cast<Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto& row = table.rows[kept[k]];
    encode_row(map, layout, row, kept[k] + 1, X.row(static_cast<Index>(k)));
    y[static_cast<Index>(k)] = map_label(row[*label_idx], schema.positive_label, kept[k] + 1, schema.label_column);
  }
  const bool has_pos = (y.array() == 1).any();
  const bool has_neg = (y.array() == -1).any();
  require(has_pos && has_neg, ErrorCode::SingleClassAfterMapping,
          "labels map to a single class with positive label '" + schema.positive_label + "'");

  if (schema.standardize) {
    map.standardized = true;
    Index pos = 0;
    for (auto& col : map.columns) {
      if (col.categorical) {
        pos += static_cast<Index>(col.categories.size());
        continue;
      }
      auto column = X.col(pos);
      const double mean = column.mean();
      const double var = (column.array() - mean).square().mean();
      col.shift = mean;
      col.scale = var > 0.0 ? std::sqrt(var) : 1.0;
      column = (column.array() - col.shift) / col.scale;
      ++pos;
    }
  }

  auto names = map.feature_names();
  return LoadedCsv{Dataset(std::move(X), std::move(y), std::move(names)), std::move(map), summary, std::move(kept)};
}

LoadedCsv load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  return build_dataset(read_csv_table(path), schema);
}

RowMatrix<double> apply_encoding(const EncodingMap& map, const CsvTable& raw) {
  const Layout layout = locate(map, raw, false);
  RowMatrix<double> X(static_cast<Index>(raw.rows.size()), map.width());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    if (!encode_row(map, layout, raw.rows[r], r + 1, X.row(static_cast<Index>(r)))) {
      throw ParseError(r + 1, "", "missing numeric value");
    }
  }
  return X;
}

Dataset encode_dataset(const EncodingMap& map, const CsvTable& raw) {
  RowMatrix<double> X = apply_encoding(map, raw);
  const Layout layout = locate(map, raw, true);
  Labels y(static_cast<Index>(raw.rows.size()));
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    y[static_cast<Index>(r)] = map_label(raw.rows[r][layout.label], map.positive_label, r + 1, map.label_column);
  }
  return Dataset(std::move(X), std::move(y), map.feature_names());
}

Dataset load_numeric_csv(const std::filesystem::path& path, const std::string& label_column) {
  const CsvTable table = read_csv_table(path);
  if (table.rows.empty()) fail(ErrorCode::EmptyFile, "no data rows in " + path.string());
  const auto label_idx = table.column(label_column);
  require(label_idx.has_value(), ErrorCode::MissingLabelColumn, "label column '" + label_column + "' not in header");
  const auto width = static_cast<Index>(table.header.size()) - 1;
  require(width >= 1, ErrorCode::SchemaViolation, "no feature columns besides the label");
  RowMatrix<double> X(static_cast<Index>(table.rows.size()), width);
  Labels y(static_cast<Index>(table.rows.size()));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != *label_idx) names.push_back(table.header[c]);
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Index pos = 0;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const auto v = parse_number(table.rows[r][c]);
      if (!v) throw ParseError(r + 1, table.header[c], "'" + table.rows[r][c] + "' is not a finite number");
      if (c == *label_idx) {
        require(*v == 1.0 || *v == -1.0 || *v == 0.0, ErrorCode::InvalidArgument,
                "row " + std::to_string(r + 1) + ": label must be -1, 0 or 1");
        y[static_cast<Index>(r)] = *v > 0.0 ? 1 : -1;
      } else {
        X(static_cast<Index>(r), pos++) = *v;
      }
    }
  }
  return Dataset(std::move(X), std::move(y), std::move(names));
}

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

CsvTable dataset_to_table(const Dataset& d) {
  CsvTable t;
  for (Index k = 0; k < d.cols(); ++k) {
    t.header.push_back(d.feature_names().empty() ? "f" + std::to_string(k) : d.feature_names()[k]);
  }
  t.header.push_back("label");
  t.rows.reserve(static_cast<std::size_t>(d.rows()));
  for (Index i = 0; i < d.rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(static_cast<std::size_t>(d.cols()) + 1);
    for (Index k = 0; k < d.cols(); ++k) row.push_back(format_double(d.samples()(i, k)));
    row.push_back(d.labels()[i] == 1 ? "1" : "-1");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace bcpr
