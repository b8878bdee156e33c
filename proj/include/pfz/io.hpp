#pragma once

// Minimal CSV reading and writing for numeric tables. Header row mandatory;
// fields are separated by commas and may be double-quoted.

#include <string>
#include <vector>

namespace pfz::io {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or -1.
  int column(const std::string& name) const;
  /// Parses every cell of the given column as a double. Throws
  /// Error(invalid_spec) on malformed numbers.
  std::vector<double> numeric_column(int index) const;
};

/// Throws Error(invalid_spec) on missing file, empty file or ragged rows.
Table read_csv(const std::string& path);
Table parse_csv(const std::string& text);

std::string to_csv(const Table& table);
void write_text(const std::string& path, const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace pfz::io
