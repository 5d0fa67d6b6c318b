#pragma once

#include <string>
#include <vector>

namespace vwa {

// Reads one numeric column from a CSV file. column selects by header name
// when the first row is non-numeric, otherwise by zero-based index given
// as digits; an empty column string means the first column. Non-finite or
// unparseable cells are rejected with their one-based line number.
std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column = "");

std::string format_cell(double value);  // shortest round-trip decimal

}  // namespace vwa
