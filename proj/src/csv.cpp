#include "vwa/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vwa/errors.hpp"

namespace vwa {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      fields.emplace_back();
    } else {
      const auto e = field.find_last_not_of(" \t\r");
      fields.push_back(field.substr(b, e - b + 1));
    }
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_number(const std::string& text, double* value) {
  if (text.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) return false;
  *value = v;
  return true;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!std::isdigit(c)) return false;
  }
  return true;
}

}  // namespace

std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open input file: " + path);
  }

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) {
    throw DomainError("empty input file: " + path);
  }

  const auto first = split_fields(lines[0]);
  double probe;
  const bool has_header = !first.empty() && !parse_number(first[0], &probe);

  std::size_t index = 0;
  if (!column.empty()) {
    if (all_digits(column)) {
      index = static_cast<std::size_t>(std::strtoull(column.c_str(), nullptr, 10));
    } else {
      if (!has_header) {
        throw DomainError("column '" + column +
                          "' requested but the file has no header row");
      }
      bool found = false;
      for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i] == column) {
          index = i;
          found = true;
          break;
        }
      }
      if (!found) {
        throw DomainError("column '" + column + "' not found in header");
      }
    }
  }

  std::vector<double> values;
  values.reserve(lines.size());
  for (std::size_t li = has_header ? 1 : 0; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = split_fields(lines[li]);
    if (column.empty() && fields.size() > 1) {
      throw DomainError(
          "line " + std::to_string(li + 1) +
          ": multiple columns present, select one with --column");
    }
    if (index >= fields.size()) {
      throw DomainError("line " + std::to_string(li + 1) +
                        ": missing column " + std::to_string(index));
    }
    double v;
    if (!parse_number(fields[index], &v) || !std::isfinite(v)) {
      throw DomainError("line " + std::to_string(li + 1) +
                        ": not a finite number: '" + fields[index] + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw DomainError("no data rows in input file: " + path);
  }
  return values;
}

std::string format_cell(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace vwa
