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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpelab/angle.hpp"
#include "qpelab/model.hpp"
#include "qpelab/posterior.hpp"

namespace qpelab {

enum class EstimatorKind { kMap, kCircularMean };

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

struct AlgorithmConfig {
    std::int64_t total_resources = 1024;
    std::int64_t depth_limit = std::int64_t{1} << 20;
    double epsilon_exponent = 3.0;
    double epsilon_scale = 1.0;
    NoiseModel noise;
    LossKind loss_kind = LossKind::kAbsolute;
    EstimatorKind estimator = EstimatorKind::kMap;
    std::int64_t grid_size = 1024;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

enum class StepDecision { kDeepen, kStay, kExhaust };

std::string_view to_string(StepDecision decision);

struct StepRecord {
    std::int64_t step_index = 0;
    Circuit circuit{1, 0.0};
    std::int64_t gate_shots = 0;
    /// Gate shots plus any shots spent staying at this depth.
    std::int64_t shots_used = 0;
    std::int64_t successes = 0;
    CircularInterval interval{0.0, kPi};
    double confidence_reached = 0.0;
    /// Allowed posterior mass outside `interval` before this step may deepen.
    double epsilon = 1.0;
    bool gate_passed = false;
    bool cap_hit = false;
    std::optional<double> predicted_loss_stay;
    std::optional<double> predicted_loss_deepen;
    StepDecision decision = StepDecision::kExhaust;
};

/// Shots and successes accumulated on one distinct circuit over a run.
struct CircuitTally {
    Circuit circuit{1, 0.0};
    std::int64_t shots = 0;
    std::int64_t successes = 0;
};

struct AlgorithmTrace {
    AlgorithmConfig config;
    double theta_true = 0.0;
    std::vector<StepRecord> steps;
    /// Final (1, pi/2 - theta_hat) batch spending the budget left below the current depth.
    std::optional<CircuitTally> remainder;
    std::int64_t resources_spent = 0;
    std::int64_t grid_size_used = 0;
    double final_estimate = 0.0;
    double final_expected_loss = 0.0;
    std::vector<CircuitTally> circuit_tallies;

    std::int64_t max_depth_used() const;
};

/// min(1, epsilon_scale * (depth / N_tot)^p).
double required_confidence(std::int64_t depth, const AlgorithmConfig& config);

/// min(2^(step-1), rounded n_opt, n_lim).
std::int64_t next_depth(std::int64_t step_index, const AlgorithmConfig& config);

/// Centre of the next interval so that it nests inside `previous` (steps >= 2).
/// Throws InfeasibleInterval when `previous` is narrower than the new interval.
double choose_center_with_width(double estimate, const std::optional<CircularInterval>& previous,
                                double new_half_width, std::int64_t step_index);
/// Same, with the new half-width pi / (2 next_depth).
double choose_center(double estimate, const std::optional<CircularInterval>& previous, std::int64_t next_depth,
                     std::int64_t step_index);

/// Chernoff-bound shot count (32 / (pi^2 alpha^2 beta^(2n))) [ln(2/eps) - ln(2/eps_prev)/4], rounded up
/// and floored at zero.
std::int64_t chernoff_shot_budget(double eps, double eps_previous, std::int64_t depth, const NoiseModel& noise);

/// chernoff_shot_budget for step i of the schedule (i >= 2).
std::int64_t max_shots_for_step(std::int64_t step_index, const AlgorithmConfig& config);

/// Runs the adaptive estimation loop against a simulated device at `theta_true`.
AlgorithmTrace run(const AlgorithmConfig& config, double theta_true);

/// Structural checks on a trace: resource accounting, interval nesting and widths, the depth
/// schedule, and the confidence gate on deepen decisions. Returns one message per violation.
std::vector<std::string> check_trace(const AlgorithmTrace& trace);

}  // namespace qpelab
