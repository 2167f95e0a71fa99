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

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpelab/adaptive.hpp"
#include "qpelab/model.hpp"

namespace qpelab {

enum class Strategy { kAdaptive, kQpea, kNonadaptiveDoubling, kClassical };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

struct SweepConfig {
    std::vector<Strategy> strategies{Strategy::kAdaptive};
    /// Strictly increasing N_tot values.
    std::vector<std::int64_t> resource_ladder{32, 64, 128, 256, 512, 1024, 2048, 4096};
    /// Number of evenly spaced true phases 2 pi k / K.
    int theta_count = 20;
    int repetitions = 10;
    NoiseModel noise;
    /// Template for adaptive cells; total_resources, noise and seed are overwritten per cell.
    AlgorithmConfig algorithm;
    std::uint64_t master_seed = 0;
    std::int64_t shots_per_depth = 8;
    /// Wall-clock runtime per cell is recorded only when set, so default outputs stay reproducible.
    bool record_runtime = false;
    /// Worker threads; 0 leaves the choice to the OpenMP runtime.
    int threads = 0;

    void validate() const;
};

struct SweepCellResult {
    Strategy strategy = Strategy::kAdaptive;
    std::int64_t n_tot = 0;
    int theta_index = 0;
    double theta_true = 0.0;
    int rep = 0;
    double abs_error = 0.0;
    double sq_error = 0.0;
    double expected_loss = 0.0;
    std::int64_t resources_spent = 0;
    std::int64_t max_depth = 0;
    double runtime_ms = 0.0;

    /// Failed cells keep NaN error columns and the exception text here.
    bool ok = true;
    std::string error;
    /// Structural problems found by check_trace (adaptive cells only).
    std::vector<std::string> trace_problems;
};

/// Deterministic per-cell seed mixed from the master seed and the cell key.
std::uint64_t cell_seed(std::uint64_t master_seed, Strategy strategy, std::int64_t n_tot, int theta_index, int rep);

double theta_for_index(int theta_index, int theta_count);

/// Runs one cell; never throws for errors raised by the strategy itself.
SweepCellResult run_cell(const SweepConfig& config, Strategy strategy, std::int64_t n_tot, int theta_index, int rep);

/// Runs every (strategy, N_tot, theta, rep) cell, possibly in parallel, and returns them sorted by
/// (strategy name, N_tot, theta index, rep). When `cancel` becomes true, cells not yet started are
/// skipped and only completed cells are returned.
std::vector<SweepCellResult> run_sweep(const SweepConfig& config, const std::atomic<bool>* cancel = nullptr);

/// Orders results canonically in place.
void sort_canonical(std::vector<SweepCellResult>& results);

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Throws InvalidArgument on an empty input.
Summary summarize(std::span<const double> values);

struct AggregateRow {
    Strategy strategy = Strategy::kAdaptive;
    std::int64_t n_tot = 0;
    Summary abs_error;
    Summary sq_error;
    Summary expected_loss;
};

/// Statistics over all successful cells of each (strategy, N_tot) group, in canonical order.
/// Groups whose cells all failed are omitted.
std::vector<AggregateRow> aggregate(std::span<const SweepCellResult> results);

/// Two-stage grouping: repetitions are first averaged per theta, then summarized across theta.
/// The mean column then equals the MAE-over-theta protocol; min and max span the per-theta means.
std::vector<AggregateRow> aggregate_by_theta(std::span<const SweepCellResult> results);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

/// Least squares of log(error) on log(N). Needs >= 3 distinct N and positive errors.
LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

}  // namespace qpelab
