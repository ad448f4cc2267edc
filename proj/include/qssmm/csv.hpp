#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qssmm {

/// Numeric CSV table: comma separated, '.' decimal point, LF line endings.
/// Comment lines start with '#'; `preamble` comes before the header and
/// `trailer` after the last row.
struct CsvTable {
  std::vector<std::string> preamble;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> trailer;

  /// Index of a column, or header.size() if absent.
  std::size_t column(std::string_view name) const;
};

/// 17 significant digits (%g style, trailing zeros dropped), which parses back
/// to the same double. NaN and infinities are written as nan, inf, -inf.
std::string format_double(double value);
/// Throws ConfigError on malformed input.
double parse_double(std::string_view text);

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace qssmm
