#pragma once

#include "psp/types.hpp"

#include <string>
#include <vector>

namespace psp {

struct CsvTable {
  std::vector<std::string> header;  // empty when the file had no header row
  Matrix values;
};

/// Reads a rectangular numeric CSV. Errors carry 1-based row/column
/// coordinates (rows counted as physical file lines).
CsvTable read_csv(const std::string& path, bool has_header);

/// Reads a CSV, treating the first row as a header iff any of its cells does
/// not parse as a finite number.
CsvTable read_csv_auto(const std::string& path);

/// Writes header (when non-empty) and rows; the file appears atomically via
/// a temp-file rename, so failures never leave partial output behind.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values);

/// Shortest-ish round-trip formatting used for all numeric output.
std::string format_double(double v);

}  // namespace psp
