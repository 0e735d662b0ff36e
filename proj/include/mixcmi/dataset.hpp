/*
 * Copyright 2026 The mixcmi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mixcmi/error.hpp"

namespace mixcmi {

/// Column-major table of named numeric columns.
struct Dataset {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t cols() const noexcept { return columns.size(); }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw input_error("unknown column '" + std::string(name) + "'");
    }

    void add(std::string name, std::vector<double> values) {
        if (!columns.empty() && values.size() != rows())
            throw input_error("column '" + name + "' has a different length");
        names.push_back(std::move(name));
        columns.push_back(std::move(values));
    }

    friend bool operator==(Dataset const &, Dataset const &) = default;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Header row of column names, then numeric rows. Lines starting with '#'
/// and blank lines are ignored.
inline Dataset read_csv(std::istream & in) {
    Dataset ds;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto fields = detail::split_commas(sv);
        if (!have_header) {
            for (auto f : fields) {
                auto name = detail::trim(f);
                if (name.empty()) throw input_error("empty column name in CSV header");
                if (std::find(ds.names.begin(), ds.names.end(), name) != ds.names.end())
                    throw input_error("duplicate column name '" + std::string(name) + "'");
                ds.names.emplace_back(name);
            }
            ds.columns.resize(ds.names.size());
            have_header = true;
            continue;
        }
        if (fields.size() != ds.names.size())
            throw input_error("line " + std::to_string(line_no) + ": expected " + std::to_string(ds.names.size()) +
                              " fields, got " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            auto f = detail::trim(fields[c]);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
                throw input_error("line " + std::to_string(line_no) + ": non-numeric cell '" + std::string(f) + "'");
            if (!std::isfinite(v))
                throw input_error("line " + std::to_string(line_no) + ": non-finite cell");
            ds.columns[c].push_back(v);
        }
    }
    if (!have_header) throw input_error("CSV has no header row");
    if (ds.rows() == 0) throw input_error("CSV has no data rows");
    return ds;
}

inline Dataset read_csv_file(std::string const & path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return read_csv(in);
}

/// Shortest round-trip representation of every value.
inline void write_csv(std::ostream & out, Dataset const & ds, std::string_view comment = {}) {
    if (!comment.empty()) out << "# " << comment << '\n';
    for (std::size_t c = 0; c < ds.cols(); ++c) out << (c ? "," : "") << ds.names[c];
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < ds.cols(); ++c) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), ds.columns[c][r]);
            if (c) out << ',';
            out << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
}

}  // namespace mixcmi
