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

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpelab/harness.hpp"

namespace qpelab::csv {

inline constexpr std::string_view kResultsHeader =
    "strategy,n_tot,theta_index,theta_true,rep,abs_error,sq_error,expected_loss,resources_spent,max_depth,runtime_ms";
inline constexpr std::string_view kAggregateHeader =
    "strategy,n_tot,mae_mean,mae_median,mae_min,mae_max,mse_mean,count";

/// %.17g, which round-trips every finite double.
std::string format_double(double value);

void write_results(std::ostream& out, std::span<const SweepCellResult> results);
void write_aggregate(std::ostream& out, std::span<const AggregateRow> rows);

/// Plain comma-separated table; fields never contain commas or quotes in this project's files.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

/// Throws InvalidArgument on a missing header or rows whose width differs from it.
Table read_table(std::istream& in);

/// Parses a results file written by write_results. Error and trace fields are not stored in it.
std::vector<SweepCellResult> read_results(std::istream& in);

double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

}  // namespace qpelab::csv
