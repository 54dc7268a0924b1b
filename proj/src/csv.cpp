#include "tempnet/csv.hpp"

#include "tempnet/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>

namespace tempnet::csv {

std::vector<Row> read_rows(std::istream& in) {
    std::vector<Row> rows;
    Row row;
    row.line = 1;
    std::string cell;
    bool quoted = false;
    bool pending = false; // current record already has a cell boundary
    long line_no = 1;
    const auto end_record = [&] {
        row.cells.push_back(std::move(cell));
        cell.clear();
        rows.push_back(std::move(row));
        row = Row{};
        pending = false;
    };
    char ch;
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    cell += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_no;
                cell += ch;
            }
        } else if (ch == '"' && cell.empty()) {
            quoted = true;
            pending = true;
        } else if (ch == ',') {
            row.cells.push_back(std::move(cell));
            cell.clear();
            pending = true;
        } else if (ch == '\n') {
            ++line_no;
            if (pending || !cell.empty()) end_record();
            row.line = line_no; // blank lines are skipped, not empty records
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (quoted)
        throw IoError("unterminated quoted cell at line " +
                      std::to_string(row.line));
    if (pending || !cell.empty()) end_record();
    return rows;
}

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    // Shortest representation that parses back bit-exactly; keeps output
    // files stable across reruns.
    char buf[64];
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        // Integers below 2^53 are exact; avoid %g flipping 100 to 1e+02.
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& cell, long line, int column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw IoError("cannot parse numeric cell '" + cell + "' at line " +
                      std::to_string(line) + ", column " + std::to_string(column));
    }
    return value;
}

} // namespace tempnet::csv
