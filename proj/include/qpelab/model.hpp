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
#include <random>

namespace qpelab {

/// Fringe damping of a noisy device: visibility alpha and per-application decay beta.
class NoiseModel {
  public:
    NoiseModel() = default;
    NoiseModel(double alpha, double beta);

    static NoiseModel noiseless() { return {}; }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    bool is_noiseless() const { return alpha_ == 1.0 && beta_ == 1.0; }

    /// alpha * beta^depth, the fringe contrast of a depth-`depth` circuit.
    double contrast(double depth) const;

    bool operator==(const NoiseModel&) const = default;

  private:
    double alpha_ = 1.0;
    double beta_ = 1.0;
};

/// n coherent applications of the unknown unitary followed by a known phase shift.
class Circuit {
  public:
    Circuit(std::int64_t depth, double phase);

    std::int64_t depth() const { return depth_; }
    double phase() const { return phase_; }

    bool operator==(const Circuit&) const = default;

  private:
    std::int64_t depth_;
    double phase_;
};

/// One batch of shots on a circuit. Successes may be fractional for hypothetical records.
class MeasurementRecord {
  public:
    MeasurementRecord(Circuit circuit, std::int64_t shots, double successes);

    const Circuit& circuit() const { return circuit_; }
    std::int64_t shots() const { return shots_; }
    double successes() const { return successes_; }
    bool has_integer_successes() const;

  private:
    Circuit circuit_;
    std::int64_t shots_;
    double successes_;
};

using Rng = std::mt19937_64;

/// Probability of the |Psi> outcome: 1/2 + (alpha beta^n / 2) cos(n theta + phi).
double success_probability(double theta, const Circuit& circuit, const NoiseModel& noise);

/// Binomial log-likelihood of a record at theta. For fractional successes the
/// theta-independent binomial coefficient is omitted. Returns -inf for impossible counts.
double log_likelihood(const MeasurementRecord& record, double theta, const NoiseModel& noise);

/// Draws the number of successes of `shots` executions of `circuit` at the true phase.
std::int64_t sample_outcome(const Circuit& circuit, std::int64_t shots, double theta_true,
                            const NoiseModel& noise, Rng& rng);

/// Tolerance on |sin(n theta + phi)| below which the propagated variance is treated as divergent.
inline constexpr double kSingularSinTolerance = 1e-9;

/// Linear-error-propagation variance of a single circuit executed `shots` times.
double sigma_squared(double theta, const Circuit& circuit, std::int64_t shots, const NoiseModel& noise);

/// Same formula with a real-valued depth and fringe angle n theta + phi; used for continuous scans.
double sigma_squared_continuous(double depth, double fringe_angle, double shots, const NoiseModel& noise);

/// -1 / (2 ln beta); +inf when beta == 1.
double optimal_depth_continuous(const NoiseModel& noise);

/// Depth rounded to the nearest integer (at least 1) and capped by `depth_limit`.
std::int64_t optimal_depth(const NoiseModel& noise, std::int64_t depth_limit);

/// Noise-optimal circuit with phase pi/2 - n * theta_guess.
Circuit optimal_circuit(const NoiseModel& noise, double theta_guess, std::int64_t depth_limit);

/// -2 e ln(beta) / (alpha^2 N_tot): the minimal single-circuit variance at the optimal depth.
/// Zero when beta == 1 (there is no noise floor).
double noisy_floor_variance(const NoiseModel& noise, double total_resources);

}  // namespace qpelab
