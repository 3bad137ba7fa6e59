#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bcpr/dataset.hpp"

namespace bcpr {

/// Header plus string cells, as read from an RFC 4180 file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv_table(const std::filesystem::path& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Every column except the label becomes a feature. Categorical columns expand
/// into one 0/1 column per category, named "col=value".
struct CsvSchema {
  std::string label_column = "label";
  std::string positive_label = "1";
  std::optional<std::vector<std::string>> categorical_columns;  // unset: auto-detect
  bool standardize = false;
};

struct ColumnEncoding {
  std::string name;
  bool categorical = false;
  std::vector<std::string> categories;  // first-appearance order
  double shift = 0.0;                   // numeric: x -> (x - shift) / scale
  double scale = 1.0;
};

struct EncodingMap {
  std::string label_column;
  std::string positive_label;
  bool standardized = false;
  std::vector<ColumnEncoding> columns;  // input order, label excluded

  std::vector<std::string> feature_names() const;
  Index width() const;
};

struct LoadSummary {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;  // missing numeric values
};

struct LoadedCsv {
  Dataset dataset;
  EncodingMap encoding;
  LoadSummary summary;
  std::vector<std::size_t> source_rows;  // table row behind each dataset row
};

/// Encodes a table. Cells that are empty in a numeric column drop the row and are
/// counted in the summary; cells that do not parse are an error. An empty
/// categorical cell encodes as all zeros.
LoadedCsv build_dataset(const CsvTable& table, const CsvSchema& schema);
LoadedCsv load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Encodes rows with an existing map. Categories not in the map encode as all
/// zeros in their group. The table may carry extra columns, in any order.
RowMatrix<double> apply_encoding(const EncodingMap& map, const CsvTable& raw);

/// apply_encoding plus the label column of `raw`.
Dataset encode_dataset(const EncodingMap& map, const CsvTable& raw);

/// Reads a numeric-only CSV whose label column holds -1/+1 (or 0/1).
Dataset load_numeric_csv(const std::filesystem::path& path, const std::string& label_column = "label");

/// Columns f0..f{p-1} (or the dataset's feature names) followed by `label`.
CsvTable dataset_to_table(const Dataset& d);

}  // namespace bcpr
