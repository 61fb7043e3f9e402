#include "psp/csv.hpp"

#include <charconv>
#include <cstring>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace psp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_cell(const std::string& raw, double& out) {
  const std::string cell = trim(raw);
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

CsvTable parse_table(const std::string& path, const std::vector<std::string>& lines,
                     bool has_header) {
  if (lines.empty() || (has_header && lines.size() == 1)) {
    throw ValidationError(path + ": no data rows");
  }
  CsvTable table;
  std::size_t first_data = 0;
  if (has_header) {
    table.header = split_line(lines[0]);
    for (auto& h : table.header) h = trim(h);
    first_data = 1;
  }
  const std::size_t cols = split_line(lines[first_data]).size();
  if (has_header && table.header.size() != cols) {
    throw ValidationError(path + ": header has " + std::to_string(table.header.size()) +
                          " columns but row " + std::to_string(first_data + 1) + " has " +
                          std::to_string(cols));
  }
  const std::size_t rows = lines.size() - first_data;
  table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto cells = split_line(lines[first_data + r]);
    if (cells.size() != cols) {
      throw ValidationError(path + ": row " + std::to_string(first_data + r + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!parse_cell(cells[c], v)) {
        throw ValidationError(path + ": row " + std::to_string(first_data + r + 1) +
                              ", column " + std::to_string(c + 1) +
                              ": cannot parse '" + trim(cells[c]) + "' as a finite number");
      }
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return table;
}

}  // namespace

CsvTable read_csv(const std::string& path, bool has_header) {
  return parse_table(path, read_lines(path), has_header);
}

CsvTable read_csv_auto(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ValidationError(path + ": no data rows");
  bool header = false;
  double tmp = 0.0;
  for (const auto& cell : split_line(lines[0])) {
    if (!parse_cell(cell, tmp)) {
      header = true;
      break;
    }
  }
  return parse_table(path, lines, header);
}

std::string format_double(double v) {
  // shortest representation that parses back to the same double
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    const auto [ptr, ec] = std::from_chars(buf, buf + std::strlen(buf), back);
    if (ec == std::errc{} && ptr == buf + std::strlen(buf) && back == v) break;
  }
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    if (!header.empty()) {
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
      }
      out << '\n';
    }
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      for (Eigen::Index c = 0; c < values.cols(); ++c) {
        if (c) out << ',';
        out << format_double(values(r, c));
      }
      out << '\n';
    }
    if (!out.good()) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot replace " + path + ": " + ec.message());
  }
}

}  // namespace psp
