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

#include "qpelab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

void BoundParams::validate() const {
    if (!(epsilon_scale > 0.0)) throw InvalidArgument("epsilon scale must be positive");
    if (!(exponent >= 0.0)) throw InvalidArgument("epsilon exponent must be non-negative");
    if (step_count && *step_count < 2) throw InvalidArgument("step count must be >= 2");
    if (total_resources < 1) throw InvalidArgument("total resources must be >= 1");
    if (depth_limit < 1) throw InvalidArgument("depth limit must be >= 1");
}

std::vector<std::int64_t> bound_depth_schedule(const NoiseModel& noise, std::int64_t depth_limit) {
    const std::int64_t cap = optimal_depth(noise, depth_limit);
    std::vector<std::int64_t> depths;
    for (std::int64_t n = 1;; n *= 2) {
        depths.push_back(std::min(n, cap));
        if (n >= cap) break;
    }
    return depths;
}

BoundBreakdown loss_bound_for_steps(const BoundParams& params, int step_count, LossKind kind) {
    params.validate();
    const std::vector<std::int64_t> schedule = bound_depth_schedule(params.noise, params.depth_limit);
    if (step_count < 2 || step_count > static_cast<int>(schedule.size())) {
        throw InvalidArgument("step count " + std::to_string(step_count) + " outside [2, " +
                              std::to_string(schedule.size()) + "]");
    }
    const auto m = static_cast<std::size_t>(step_count);
    const double total = static_cast<double>(params.total_resources);
    const double alpha2 = params.noise.alpha() * params.noise.alpha();

    std::vector<double> eps(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double ratio = static_cast<double>(schedule[i]) / total;
        eps[i] = std::min(1.0, params.epsilon_scale * std::pow(ratio, params.exponent));
    }

    BoundBreakdown out;
    out.step_count = step_count;
    out.depths.assign(schedule.begin(), schedule.begin() + step_count);

    double chain = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double n = static_cast<double>(schedule[j]);
        const double beta_term = std::pow(params.noise.beta(), 2.0 * n);
        const double previous = j == 0 ? 0.0 : 0.25 * std::log(2.0 / eps[j - 1]);
        const double nu = 32.0 / (kPi * kPi * alpha2 * beta_term) * (std::log(2.0 / eps[j]) - previous);
        out.shots.push_back(std::max(nu, 0.0));
        chain += n * out.shots.back();
    }
    const double n_m = static_cast<double>(schedule[m - 1]);
    const double nu_m = (total - chain) / n_m;
    if (nu_m < 0.0) {
        throw InfeasibleChain("steps 1.." + std::to_string(step_count - 1) + " need " + std::to_string(chain) +
                              " unitary applications, more than the budget " +
                              std::to_string(params.total_resources));
    }
    out.shots.push_back(nu_m);

    const double precision = 8.0 * n_m * n_m / (kPi * kPi) * std::log(2.0 / eps[m - 2]) +
                             alpha2 * std::pow(params.noise.beta(), 2.0 * n_m) * n_m * n_m * nu_m;
    out.sigma_squared = 1.0 / precision;

    double value = 0.0;
    if (kind == LossKind::kAbsolute) {
        value = 1.5 * kPi * eps[0];
        for (std::size_t i = 1; i + 1 < m; ++i) value += eps[i] * kPi / (2.0 * static_cast<double>(schedule[i]));
        value += std::sqrt(2.0 * out.sigma_squared / kPi);
        value = std::min(value, kPi);
    } else {
        value = 3.75 * kPi * kPi * eps[0];
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double n = static_cast<double>(schedule[i]);
            value += eps[i] * 0.75 * kPi * kPi / (n * n);
        }
        value += out.sigma_squared;
        value = std::min(value, kPi * kPi);
    }
    out.value = value;
    return out;
}

BoundBreakdown appendix_loss_bound_detail(const BoundParams& params, LossKind kind) {
    params.validate();
    if (params.step_count) return loss_bound_for_steps(params, *params.step_count, kind);

    const int longest = static_cast<int>(bound_depth_schedule(params.noise, params.depth_limit).size());
    std::optional<BoundBreakdown> best;
    for (int m = 2; m <= longest; ++m) {
        try {
            BoundBreakdown b = loss_bound_for_steps(params, m, kind);
            if (!best || b.value < best->value) best = std::move(b);
        } catch (const InfeasibleChain&) {
            // Chains only get more expensive with m.
            break;
        }
    }
    if (!best) {
        throw InfeasibleChain("no chain of two or more steps fits in " + std::to_string(params.total_resources) +
                              " unitary applications");
    }
    return *best;
}

double appendix_loss_bound(const BoundParams& params, LossKind kind) {
    return appendix_loss_bound_detail(params, kind).value;
}

}  // namespace qpelab
