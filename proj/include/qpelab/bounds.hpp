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
#include <vector>

#include "qpelab/model.hpp"
#include "qpelab/posterior.hpp"

namespace qpelab {

/// Inputs of the worst-case loss bound for the adaptive schedule eps_i = eps (n_i / N_tot)^p.
struct BoundParams {
    double epsilon_scale = 1.0;
    double exponent = 3.0;
    /// Number of schedule steps m >= 2. Unset picks the feasible m with the smallest bound.
    std::optional<int> step_count;
    std::int64_t total_resources = 1024;
    std::int64_t depth_limit = std::int64_t{1} << 20;
    NoiseModel noise;

    void validate() const;
};

struct BoundBreakdown {
    double value = 0.0;
    int step_count = 0;
    /// Depths n_1 .. n_m of the chosen chain.
    std::vector<std::int64_t> depths;
    /// Shots per step; the last entry comes from the resource identity and may be fractional.
    std::vector<double> shots;
    double sigma_squared = 0.0;
};

/// Distinct depths min(2^(i-1), rounded n_opt, n_lim) of the schedule, in order.
std::vector<std::int64_t> bound_depth_schedule(const NoiseModel& noise, std::int64_t depth_limit);

/// Evaluates the explicit MAE/MSE bound for one chain length. Throws InfeasibleChain when the
/// Chernoff shot counts of steps 1 .. m-1 alone exceed the budget.
BoundBreakdown loss_bound_for_steps(const BoundParams& params, int step_count, LossKind kind);

/// The bound at params.step_count, or minimized over feasible chain lengths when unset.
/// Results are capped at the trivial bounds pi (MAE) and pi^2 (MSE).
BoundBreakdown appendix_loss_bound_detail(const BoundParams& params, LossKind kind);
double appendix_loss_bound(const BoundParams& params, LossKind kind);

}  // namespace qpelab
