// Copyright 2026 The qpe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpelab/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "qpelab/errors.hpp"

namespace qpelab::csv {

namespace {

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

void write_results(std::ostream& out, std::span<const SweepCellResult> results) {
    out << kResultsHeader << '\n';
    for (const auto& r : results) {
        out << to_string(r.strategy) << ',' << r.n_tot << ',' << r.theta_index << ',' << format_double(r.theta_true)
            << ',' << r.rep << ',' << format_double(r.abs_error) << ',' << format_double(r.sq_error) << ','
            << format_double(r.expected_loss) << ',' << r.resources_spent << ',' << r.max_depth << ','
            << format_double(r.runtime_ms) << '\n';
    }
}

void write_aggregate(std::ostream& out, std::span<const AggregateRow> rows) {
    out << kAggregateHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.strategy) << ',' << r.n_tot << ',' << format_double(r.abs_error.mean) << ','
            << format_double(r.abs_error.median) << ',' << format_double(r.abs_error.min) << ','
            << format_double(r.abs_error.max) << ',' << format_double(r.sq_error.mean) << ',' << r.abs_error.count
            << '\n';
    }
}

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

Table read_table(std::istream& in) {
    Table table;
    std::string line;
    if (!next_line(in, line) || line.empty()) throw InvalidArgument("CSV input has no header");
    table.header = split(line);
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw InvalidArgument("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

std::vector<SweepCellResult> read_results(std::istream& in) {
    const Table table = read_table(in);
    if (split(kResultsHeader) != table.header) throw InvalidArgument("not a results CSV: unexpected header");
    std::vector<SweepCellResult> out;
    out.reserve(table.rows.size());
    for (const auto& f : table.rows) {
        SweepCellResult r;
        r.strategy = parse_strategy(f[0]);
        r.n_tot = parse_int(f[1]);
        r.theta_index = static_cast<int>(parse_int(f[2]));
        r.theta_true = parse_double(f[3]);
        r.rep = static_cast<int>(parse_int(f[4]));
        r.abs_error = parse_double(f[5]);
        r.sq_error = parse_double(f[6]);
        r.expected_loss = parse_double(f[7]);
        r.resources_spent = parse_int(f[8]);
        r.max_depth = parse_int(f[9]);
        r.runtime_ms = parse_double(f[10]);
        r.ok = !std::isnan(r.abs_error);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qpelab::csv
