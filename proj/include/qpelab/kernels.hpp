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

// Data-parallel inner loops over the uniform theta grid.
//
// Every kernel exists twice: a plain serial loop in `serial::`, kept as the
// reference the tests compare against, and an OpenMP version in `parallel::`.
// The unqualified entry points dispatch to the OpenMP version for large grids
// when not already inside a parallel region (sweeps parallelize over cells).

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qpelab/model.hpp"

namespace qpelab::kernels {

/// sin and cos of the half angles pi*k/G for k in [0, 2G). Exact at multiples of pi/2.
class HalfAngleTable {
  public:
    explicit HalfAngleTable(std::int64_t grid_size);

    /// Shared, immutable table for a grid size; cached process-wide.
    static std::shared_ptr<const HalfAngleTable> for_grid(std::int64_t grid_size);

    std::int64_t grid_size() const { return grid_size_; }
    double sin_at(std::int64_t k) const { return sin_[static_cast<std::size_t>(k)]; }
    double cos_at(std::int64_t k) const { return cos_[static_cast<std::size_t>(k)]; }

  private:
    std::int64_t grid_size_;
    std::vector<double> sin_;
    std::vector<double> cos_;
};

/// Cell count above which the dispatching entry points use OpenMP.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

// fill_log_likelihoods writes log p0 and log(1 - p0) at every grid cell for one circuit,
// using p0 = (1 - c)/2 + c cos^2(psi/2) and 1 - p0 = (1 - c)/2 + c sin^2(psi/2) with
// c = alpha beta^n. The half-angle form keeps relative accuracy near fringe zeros.

namespace serial {
void fill_log_likelihoods(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<double> log_success, std::span<double> log_failure);
void fill_success_probabilities(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                                std::span<double> p0);
/// out[g] = in[g] + x * log_success[g] + (nu - x) * log_failure[g], with 0 * (-inf) treated as 0.
void accumulate_record(std::span<const double> in, std::span<const double> log_success,
                       std::span<const double> log_failure, double successes, double failures,
                       std::span<double> out);
/// accumulate_record with the likelihood evaluated on the fly for the sides that carry counts;
/// returns max(out). Used for one-off circuits where tables would not be reused.
double accumulate_outcome(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<const double> in, double successes, double failures, std::span<double> out);
double max_value(std::span<const double> values);
/// sum_g exp(values[g] - shift)
double sum_exp_shifted(std::span<const double> values, double shift);
void add_constant(std::span<double> values, double delta);
/// sum_g exp(log_density[g]) * weights[g]
double weighted_exp_sum(std::span<const double> log_density, std::span<const double> weights);
}  // namespace serial

namespace parallel {
void fill_log_likelihoods(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<double> log_success, std::span<double> log_failure);
void fill_success_probabilities(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                                std::span<double> p0);
void accumulate_record(std::span<const double> in, std::span<const double> log_success,
                       std::span<const double> log_failure, double successes, double failures,
                       std::span<double> out);
double accumulate_outcome(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<const double> in, double successes, double failures, std::span<double> out);
double max_value(std::span<const double> values);
double sum_exp_shifted(std::span<const double> values, double shift);
void add_constant(std::span<double> values, double delta);
double weighted_exp_sum(std::span<const double> log_density, std::span<const double> weights);
}  // namespace parallel

void fill_log_likelihoods(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<double> log_success, std::span<double> log_failure);
void fill_success_probabilities(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                                std::span<double> p0);
void accumulate_record(std::span<const double> in, std::span<const double> log_success,
                       std::span<const double> log_failure, double successes, double failures,
                       std::span<double> out);
double accumulate_outcome(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<const double> in, double successes, double failures, std::span<double> out);
double max_value(std::span<const double> values);
double sum_exp_shifted(std::span<const double> values, double shift);
void add_constant(std::span<double> values, double delta);
double weighted_exp_sum(std::span<const double> log_density, std::span<const double> weights);

}  // namespace qpelab::kernels
