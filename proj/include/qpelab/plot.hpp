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

#include <string>
#include <string_view>
#include <vector>

#include "qpelab/bounds.hpp"
#include "qpelab/csv.hpp"
#include "qpelab/model.hpp"

namespace qpelab {

enum class ReferenceCurve { kSql, kHl, kNoisyFloor, kAppendixBound };

std::string_view to_string(ReferenceCurve curve);
ReferenceCurve parse_reference_curve(std::string_view name);

struct PlotSpec {
    /// Error column for the y axis, e.g. mae_mean (aggregate file) or abs_error (results file).
    std::string y_column = "mae_mean";
    std::string series_column = "strategy";
    std::vector<ReferenceCurve> references;
    /// Noise used by the noisy_floor and appendix_bound references.
    NoiseModel noise;
    /// Schedule parameters for appendix_bound; total_resources is set per ladder point.
    BoundParams bound;
    std::string title;
};

/// Log-log SVG of y against n_tot with one polyline per series, min-max bars and dashed
/// reference curves. Points sharing (series, n_tot) are averaged; bars come from the matching
/// *_min / *_max columns when present, otherwise from the spread of the averaged rows.
/// Reference curves use squared-error scales when the y column names a squared error.
/// Throws InvalidArgument for missing columns or an input without plottable rows.
std::string render_svg(const csv::Table& table, const PlotSpec& spec);

}  // namespace qpelab
