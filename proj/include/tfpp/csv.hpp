#pragma once

#include "tfpp/errors.hpp"
#include "tfpp/grid.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace tfpp {

/// 17 significant digits: enough to round-trip a double.
inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return f;
}

/// Columns of equal length under a header row.
inline void write_table(const std::string& path, const std::vector<std::string>& headers,
                        const std::vector<std::vector<double>>& columns) {
    if (headers.size() != columns.size()) {
        throw ShapeError("write_table: header and column counts differ");
    }
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) {
            throw ShapeError("write_table: columns differ in length");
        }
    }
    auto f = open_out(path);
    for (std::size_t j = 0; j < headers.size(); ++j) {
        f << (j ? "," : "") << headers[j];
    }
    f << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            f << (j ? "," : "") << fmt17(columns[j][i]);
        }
        f << '\n';
    }
    if (!f) {
        throw IoError("write failed for '" + path + "'");
    }
}

/// One row per grid point: x, t, u.
inline void write_field(const std::string& path, const SolutionField& field) {
    auto f = open_out(path);
    f << "x,t,u\n";
    const auto& x = field.space().nodes();
    for (std::size_t k = 0; k <= field.time().M(); ++k) {
        const std::string t = fmt17(field.time().t(k));
        for (std::size_t i = 0; i < x.size(); ++i) {
            f << fmt17(x[i]) << ',' << t << ',' << fmt17(field.at(i, k)) << '\n';
        }
    }
    if (!f) {
        throw IoError("write failed for '" + path + "'");
    }
}

/// Numeric CSV with a header row, returned column by column.
inline std::map<std::string, std::vector<double>> read_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot read '" + path + "'");
    }
    std::string line;
    if (!std::getline(f, line)) {
        throw IoError("'" + path + "' is empty");
    }
    std::vector<std::string> headers;
    {
        std::stringstream ss(line);
        std::string h;
        while (std::getline(ss, h, ',')) {
            headers.push_back(h);
        }
    }
    std::map<std::string, std::vector<double>> cols;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::size_t j = 0;
        while (std::getline(ss, cell, ',')) {
            if (j >= headers.size()) {
                throw IoError("'" + path + "' line " + std::to_string(lineno) + ": too many cells");
            }
            try {
                cols[headers[j]].push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("'" + path + "' line " + std::to_string(lineno) + ": not a number");
            }
            ++j;
        }
        if (j != headers.size()) {
            throw IoError("'" + path + "' line " + std::to_string(lineno) + ": too few cells");
        }
    }
    return cols;
}

} // namespace tfpp
