#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tempnet::csv {

/// One parsed record. `line` is the 1-based line number in the source stream.
struct Row {
    std::vector<std::string> cells;
    long line = 0;
};

/// Reads all rows of a comma-separated stream. Double-quoted cells may
/// contain commas; doubled quotes inside them collapse to one.
std::vector<Row> read_rows(std::istream& in);

std::string join(const std::vector<std::string>& cells);

/// Quotes a cell when it contains a comma or a quote.
std::string quote(const std::string& cell);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Parses a double; throws IoError naming line/column on failure.
double parse_double(const std::string& cell, long line, int column);

} // namespace tempnet::csv
