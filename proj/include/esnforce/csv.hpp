#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esnforce {

/// Minimal comma-separated table with a header row. Cells are kept as text;
/// numeric access parses on demand.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::invalid_argument naming the
  /// column if absent.
  std::size_t column(const std::string& name) const;

  /// One column parsed as doubles (non-numeric cells become NaN).
  std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace esnforce
