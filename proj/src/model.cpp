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

#include "qpelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

NoiseModel::NoiseModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("noise alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw InvalidArgument("noise beta must lie in (0, 1], got " + std::to_string(beta));
    }
}

double NoiseModel::contrast(double depth) const {
    if (beta_ == 1.0) return alpha_;
    return alpha_ * std::pow(beta_, depth);
}

Circuit::Circuit(std::int64_t depth, double phase) : depth_(depth), phase_(wrap_angle(phase)) {
    if (depth < 1) {
        throw InvalidArgument("circuit depth must be >= 1, got " + std::to_string(depth));
    }
    if (!std::isfinite(phase)) {
        throw InvalidArgument("circuit phase must be finite");
    }
}

MeasurementRecord::MeasurementRecord(Circuit circuit, std::int64_t shots, double successes)
    : circuit_(circuit), shots_(shots), successes_(successes) {
    if (shots < 0) {
        throw InvalidArgument("record shots must be non-negative");
    }
    if (!(successes >= 0.0)) {
        throw InvalidArgument("record successes must be non-negative");
    }
    if (successes > static_cast<double>(shots)) {
        throw InvalidArgument("record successes (" + std::to_string(successes) + ") exceed shots (" +
                              std::to_string(shots) + ")");
    }
}

bool MeasurementRecord::has_integer_successes() const {
    return successes_ == std::floor(successes_);
}

double success_probability(double theta, const Circuit& circuit, const NoiseModel& noise) {
    const double n = static_cast<double>(circuit.depth());
    const double angle = n * wrap_angle(theta) + circuit.phase();
    return 0.5 + 0.5 * noise.contrast(n) * std::cos(angle);
}

double log_likelihood(const MeasurementRecord& record, double theta, const NoiseModel& noise) {
    const double nu = static_cast<double>(record.shots());
    const double x = record.successes();
    if (record.shots() == 0) return 0.0;

    const double n = static_cast<double>(record.circuit().depth());
    const double c = noise.contrast(n) * std::cos(n * wrap_angle(theta) + record.circuit().phase());
    const double p = 0.5 + 0.5 * c;
    const double q = 0.5 - 0.5 * c;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    double result = 0.0;
    if (x > 0.0) {
        if (p <= 0.0) return kNegInf;
        result += x * std::log(p);
    }
    if (nu - x > 0.0) {
        if (q <= 0.0) return kNegInf;
        result += (nu - x) * std::log(q);
    }
    if (record.has_integer_successes()) {
        result += std::lgamma(nu + 1.0) - std::lgamma(x + 1.0) - std::lgamma(nu - x + 1.0);
    }
    return result;
}

std::int64_t sample_outcome(const Circuit& circuit, std::int64_t shots, double theta_true,
                            const NoiseModel& noise, Rng& rng) {
    if (shots < 0) throw InvalidArgument("shots must be non-negative");
    if (shots == 0) return 0;
    const double p = std::clamp(success_probability(theta_true, circuit, noise), 0.0, 1.0);
    std::binomial_distribution<std::int64_t> dist(shots, p);
    return dist(rng);
}

double sigma_squared_continuous(double depth, double fringe_angle, double shots, const NoiseModel& noise) {
    const double s = std::sin(fringe_angle);
    if (std::abs(s) < kSingularSinTolerance) {
        throw DivergenceError("propagated variance diverges: |sin(n theta + phi)| = " + std::to_string(std::abs(s)));
    }
    const double c = std::cos(fringe_angle);
    const double contrast = noise.contrast(depth);
    const double k2 = contrast * contrast;
    return (1.0 - k2 * c * c) / (k2 * s * s * depth * depth * shots);
}

double sigma_squared(double theta, const Circuit& circuit, std::int64_t shots, const NoiseModel& noise) {
    if (shots < 1) throw InvalidArgument("sigma_squared needs at least one shot");
    const double n = static_cast<double>(circuit.depth());
    return sigma_squared_continuous(n, n * wrap_angle(theta) + circuit.phase(), static_cast<double>(shots), noise);
}

double optimal_depth_continuous(const NoiseModel& noise) {
    if (noise.beta() == 1.0) return std::numeric_limits<double>::infinity();
    return -1.0 / (2.0 * std::log(noise.beta()));
}

std::int64_t optimal_depth(const NoiseModel& noise, std::int64_t depth_limit) {
    if (depth_limit < 1) throw InvalidArgument("depth limit must be >= 1");
    if (noise.beta() == 1.0) return depth_limit;
    const double n_opt = optimal_depth_continuous(noise);
    if (n_opt >= static_cast<double>(depth_limit)) return depth_limit;
    return std::clamp<std::int64_t>(std::llround(n_opt), 1, depth_limit);
}

Circuit optimal_circuit(const NoiseModel& noise, double theta_guess, std::int64_t depth_limit) {
    const std::int64_t n = optimal_depth(noise, depth_limit);
    return Circuit(n, kPi / 2 - static_cast<double>(n) * wrap_angle(theta_guess));
}

double noisy_floor_variance(const NoiseModel& noise, double total_resources) {
    if (noise.beta() == 1.0) return 0.0;
    return -2.0 * std::numbers::e * std::log(noise.beta()) /
           (noise.alpha() * noise.alpha() * total_resources);
}

}  // namespace qpelab
