// Minimal two-column numeric CSV reading and writing.  Parse failures name
// the offending row and column.  Values are written with 17 significant
// digits so files round-trip doubles exactly.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semicop {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  std::vector<std::string_view>& fields) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}
}  // namespace detail

/// Read the first two numeric columns.  A single leading non-numeric line
/// is treated as a header and skipped.
inline std::pair<std::vector<double>, std::vector<double>> read_xy_csv(std::istream& is) {
  std::vector<double> xs, ys;
  std::vector<std::string_view> fields;
  std::string line;
  int row = 0;
  bool saw_data = false;
  while (std::getline(is, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    detail::split_fields(line, fields);
    if (fields.size() < 2)
      throw CsvError("row " + std::to_string(row) + ": need at least two columns");
    double x = 0.0, y = 0.0;
    const bool okx = detail::parse_double(fields[0], x);
    const bool oky = detail::parse_double(fields[1], y);
    if (!okx || !oky) {
      if (!saw_data && row == 1) continue;  // header line
      throw CsvError("row " + std::to_string(row) + ", column " +
                     std::to_string(okx ? 2 : 1) + ": not a number");
    }
    xs.push_back(x);
    ys.push_back(y);
    saw_data = true;
  }
  if (xs.size() < 2) throw CsvError("need at least two data rows");
  return {std::move(xs), std::move(ys)};
}

inline std::pair<std::vector<double>, std::vector<double>> read_xy_csv_file(
    const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CsvError("cannot open " + path);
  return read_xy_csv(is);
}

inline std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_uv_csv(std::ostream& os,
                         const std::vector<std::pair<double, double>>& pairs) {
  os << "u,v\n";
  for (const auto& [u, v] : pairs)
    os << format_full(u) << ',' << format_full(v) << '\n';
}

inline void write_uv_csv_file(const std::string& path,
                              const std::vector<std::pair<double, double>>& pairs) {
  std::ofstream os(path);
  if (!os) throw CsvError("cannot open " + path + " for writing");
  write_uv_csv(os, pairs);
}

}  // namespace semicop
