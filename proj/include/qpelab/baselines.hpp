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

inline constexpr int kMaxQpeaQubits = 24;

/// Textbook phase estimation with an m-qubit register. Only the noiseless model is accepted.
struct QpeaConfig {
    int qubit_count = 1;
    NoiseModel noise;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Outcome law of the inverse-QFT readout: entry k is Pr[k | theta], length 2^m.
std::vector<double> qpea_outcome_distribution(double theta, int qubit_count);

/// Largest register whose cost 2^m - 1 fits in `total_resources` (at least 1, at most 24).
int qpea_qubits_for_budget(std::int64_t total_resources);

/// What every baseline runner reports back to the harness.
struct BaselineResult {
    double estimate = 0.0;
    /// Posterior expected loss of `estimate` under a uniform prior.
    double expected_loss = 0.0;
    std::int64_t resources_spent = 0;
    std::int64_t max_depth = 0;
};

/// Samples one register readout k and returns theta_hat = 2 pi k / 2^m.
BaselineResult run_qpea(double theta_true, const QpeaConfig& config, LossKind kind = LossKind::kAbsolute);

/// Fixed two-phase doubling: `shots_per_depth` shots each of (n, 0) and (n, pi/2) for n = 1, 2, 4, ...
/// while affordable, then the leftover budget at the deepest affordable depth, then smaller ones.
/// Throws InsufficientResources when the budget cannot pay for depth 1 twice.
BaselineResult run_nonadaptive_doubling(std::int64_t total_resources, double theta_true, const NoiseModel& noise,
                                        std::int64_t shots_per_depth, std::uint64_t seed,
                                        LossKind kind = LossKind::kAbsolute, std::int64_t grid_size = 1024);

/// Depth-one probes only: ceil(N/2) shots of (1, 0) and floor(N/2) shots of (1, pi/2), then MAP.
BaselineResult run_classical(std::int64_t total_resources, double theta_true, const NoiseModel& noise,
                             std::uint64_t seed, LossKind kind = LossKind::kAbsolute, std::int64_t grid_size = 1024);

/// Reference MAE curves sqrt(2/pi) * sigma for sigma^2 = 1/N, 1/N^2 and the noisy floor.
struct LimitCurves {
    double sql = 0.0;
    double hl = 0.0;
    std::optional<double> noisy_floor;
};

LimitCurves limit_curves(double total_resources, const NoiseModel& noise);

}  // namespace qpelab
