#include "qssmm/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qssmm/errors.hpp"

namespace qssmm {

std::size_t CsvTable::column(std::string_view name) const {
  return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& c : table.preamble) out += "# " + c + "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  for (const auto& c : table.trailer) out += "# " + c + "\n";
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool have_header = false;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      (have_header ? t.trailer : t.preamble).emplace_back(line);
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      for (auto c : cells) t.header.emplace_back(c);
      have_header = true;
      continue;
    }
    if (!t.trailer.empty()) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": data after trailer");
    }
    if (cells.size() != t.header.size()) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected " +
                        std::to_string(t.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'", "output.directory");
  out << to_csv(table);
  if (!out) throw ConfigError("failed writing '" + path + "'", "output.directory");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace qssmm
