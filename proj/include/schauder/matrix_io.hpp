#pragma once

// Plain-text matrix format shared by the library and the CLI:
//
//   # optional comment lines
//   rows cols
//   a11 a12 ... a1c
//   ...
//
// Entries are written with 17 significant digits so that a save/load
// round trip reproduces every double exactly.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"

namespace schauder {

/// %.17g rendering of a double.
inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

inline bool is_skippable(std::string_view line) {
    for (char c : line) {
        if (c == '#') {
            return true;
        }
        if (c != ' ' && c != '\t' && c != '\r') {
            return false;
        }
    }
    return true;
}

inline double parse_double(std::string_view field, std::size_t line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw IoError("cannot parse number '" + std::string(field) + "'", line);
    }
    if (!std::isfinite(value)) {
        throw IoError("non-finite entry '" + std::string(field) + "'", line);
    }
    return value;
}

inline std::size_t parse_dimension(std::string_view field, std::size_t line) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value == 0) {
        throw IoError("invalid dimension '" + std::string(field) + "'", line);
    }
    return value;
}

} // namespace detail

inline DenseMatrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool have_header = false;
    std::vector<double> entries;
    std::size_t rows_read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_skippable(line)) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (!have_header) {
            if (fields.size() != 2) {
                throw IoError("expected header 'rows cols'", line_no);
            }
            rows = detail::parse_dimension(fields[0], line_no);
            cols = detail::parse_dimension(fields[1], line_no);
            entries.reserve(rows * cols);
            have_header = true;
            continue;
        }
        if (rows_read == rows) {
            throw IoError("more than the declared " + std::to_string(rows) + " rows", line_no);
        }
        if (fields.size() != cols) {
            throw IoError("expected " + std::to_string(cols) + " entries, found " +
                              std::to_string(fields.size()),
                          line_no);
        }
        for (auto f : fields) {
            entries.push_back(detail::parse_double(f, line_no));
        }
        ++rows_read;
    }
    if (!have_header) {
        throw IoError("missing 'rows cols' header", line_no + 1);
    }
    if (rows_read != rows) {
        throw IoError("declared " + std::to_string(rows) + " rows, found " + std::to_string(rows_read),
                      line_no + 1);
    }
    return DenseMatrix(rows, cols, entries);
}

inline void write_matrix(std::ostream& out, const DenseMatrix& m, std::string_view comment = {}) {
    if (!comment.empty()) {
        std::istringstream lines{std::string(comment)};
        std::string l;
        while (std::getline(lines, l)) {
            out << "# " << l << '\n';
        }
    }
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

inline DenseMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open matrix file '" + path + "'");
    }
    return read_matrix(in);
}

inline void save_matrix(const std::string& path, const DenseMatrix& m, std::string_view comment = {}) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_matrix(out, m, comment);
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

} // namespace schauder
