/* Copyright 2026 The itosig Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ========================================================================= */

// CSV readers and writers for sample paths and signature dumps.
//
// Path CSV:      header `t,x1,...,xd`, one row per grid point.
// Signature CSV: `t,word,coeff`, word dot-joined (empty for the unit word),
//                rows in grid order then graded-lex word order.
// Lines starting with '#' are comments and are skipped on input.

#ifndef ITOSIG_IO_HPP
#define ITOSIG_IO_HPP

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "itosig/signature.hpp"

namespace itosig {

/// Shortest round-trip decimal representation.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double failed");
    }
    return std::string(buf.data(), ptr);
}

inline double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto const comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

inline SamplePath read_path_csv(std::istream& in) {
    std::string line;
    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        header_line = line;
        break;
    }
    if (header_line.empty()) {
        throw std::invalid_argument("path CSV: missing header");
    }
    if (!header_line.empty() && header_line.back() == '\r') {
        header_line.pop_back();
    }
    header = split_csv_line(header_line);
    if (header.size() < 2 || header[0] != "t") {
        throw std::invalid_argument("path CSV: header must be t,x1,...,xd");
    }
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j] != "x" + std::to_string(j)) {
            throw std::invalid_argument("path CSV: header must be t,x1,...,xd");
        }
    }
    auto const d = header.size() - 1;
    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") {
            continue;
        }
        auto const cells = split_csv_line(line);
        if (cells.size() != d + 1) {
            throw std::invalid_argument("path CSV: wrong field count on line " + std::to_string(line_no));
        }
        times.push_back(parse_double(cells[0]));
        for (std::size_t j = 1; j <= d; ++j) {
            values.push_back(parse_double(cells[j]));
        }
    }
    return SamplePath(std::move(times), std::move(values), static_cast<int>(d));
}

inline void write_path_csv(std::ostream& out, const SamplePath& path) {
    out << 't';
    for (int j = 1; j <= path.dim(); ++j) {
        out << ",x" << j;
    }
    out << '\n';
    for (std::size_t k = 0; k < path.points(); ++k) {
        out << format_double(path.times()[k]);
        for (int j = 0; j < path.dim(); ++j) {
            out << ',' << format_double(path.value(k, j));
        }
        out << '\n';
    }
}

inline void write_signature_csv(std::ostream& out, const SigTrajectory& traj) {
    out << "t,word,coeff\n";
    auto const& layout = traj.layout();
    std::vector<std::string> names;
    names.reserve(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        names.push_back(to_string(layout.word_at(i)));
    }
    for (std::size_t k = 0; k < traj.points(); ++k) {
        auto const t = format_double(traj.times()[k]);
        auto const row = traj.row(k);
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << t << ',' << names[i] << ',' << format_double(row[i]) << '\n';
        }
    }
}

}  // namespace itosig

#endif  // ITOSIG_IO_HPP
