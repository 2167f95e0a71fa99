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
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qpelab/kernels.hpp"
#include "qpelab/model.hpp"

namespace qpelab {

/// {theta : wrapped_distance(theta, center) <= half_width}, with 0 < half_width <= pi.
class CircularInterval {
  public:
    CircularInterval(double center, double half_width);

    double center() const { return center_; }
    double half_width() const { return half_width_; }
    double lower() const { return center_ - half_width_; }
    double upper() const { return center_ + half_width_; }

    bool contains(double theta) const;
    /// True when this interval lies inside `outer` as circular sets, up to `tolerance` radians.
    bool is_within(const CircularInterval& outer, double tolerance = 1e-12) const;

  private:
    double center_;
    double half_width_;
};

enum class LossKind { kAbsolute, kSquared };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

inline constexpr std::int64_t kMinGridSize = 64;
/// Grid points required per period of cos(n theta).
inline constexpr std::int64_t kPointsPerPeriod = 32;

/// Log-density of theta on G uniform cells theta_g = 2 pi g / G.
///
/// Integrals use the periodic trapezoid rule, so after normalization
/// (2 pi / G) * sum_g exp(log_weights[g]) == 1. Updates mutate in place.
class GridPosterior {
  public:
    static GridPosterior uniform(std::int64_t grid_size);
    /// Builds a posterior from arbitrary (finite or -inf) log weights and normalizes it.
    static GridPosterior from_log_weights(std::vector<double> log_weights);

    std::int64_t grid_size() const { return static_cast<std::int64_t>(log_weights_.size()); }
    double cell_width() const;
    double angle(std::int64_t g) const;
    std::span<const double> log_weights() const { return log_weights_; }
    bool normalized() const { return normalized_; }
    /// Largest circuit depth the grid resolves with kPointsPerPeriod points per oscillation.
    std::int64_t max_resolvable_depth() const { return grid_size() / kPointsPerPeriod; }

    double density(std::int64_t g) const;
    std::vector<double> densities() const;

    /// Multiplies in the likelihood of `record` and renormalizes in log space.
    /// Throws GridTooCoarse or ImpossibleObservation and leaves the posterior unchanged.
    void update(const MeasurementRecord& record, const NoiseModel& noise);

    const kernels::HalfAngleTable& table() const { return *table_; }

  private:
    GridPosterior(std::shared_ptr<const kernels::HalfAngleTable> table, std::vector<double> log_weights);
    void normalize();

    std::shared_ptr<const kernels::HalfAngleTable> table_;
    std::vector<double> log_weights_;
    std::vector<double> scratch_;
    bool normalized_ = false;

    // Log-likelihood tables of the most recent circuit; gated phases update the same circuit shot by shot.
    struct LikelihoodCache {
        std::optional<Circuit> circuit;
        NoiseModel noise;
        std::vector<double> log_success;
        std::vector<double> log_failure;
    };
    mutable LikelihoodCache cache_;
    // Tables are only built once a circuit is used twice in a row.
    std::optional<Circuit> last_circuit_;
    NoiseModel last_noise_;

    const LikelihoodCache& likelihood_tables(const Circuit& circuit, const NoiseModel& noise) const;
};

GridPosterior uniform_prior(std::int64_t grid_size);

/// Smallest grid_size * 2^k that resolves circuits of depth `max_depth` and keeps the cell width
/// at or below 1 / sqrt(information), the posterior width implied by accumulated Fisher information.
std::int64_t resolving_grid_size(std::int64_t grid_size, std::int64_t max_depth, double information);

/// Fisher information of `shots` executions of a depth-n circuit at its optimal phase: shots n^2 c^2.
double circuit_information(std::int64_t depth, std::int64_t shots, const NoiseModel& noise);

/// Returns a copy of `posterior` updated with `record`.
GridPosterior update(const GridPosterior& posterior, const MeasurementRecord& record, const NoiseModel& noise);

/// Posterior mass inside the interval, integrating the Catmull-Rom interpolant of the
/// density; over the full circle this is the trapezoid rule.
double confidence(const GridPosterior& posterior, const CircularInterval& interval);

/// Argmax cell refined by a parabola through the log-density of its neighbours. Ties go to the
/// smallest index.
double map_estimate(const GridPosterior& posterior);

/// MAP restricted to grid cells inside `interval`.
double map_estimate_within(const GridPosterior& posterior, const CircularInterval& interval);

/// Argument of the resultant of e^{i theta}; throws UndefinedMean when its length is <= 1e-12.
double circular_mean_estimate(const GridPosterior& posterior);

/// Posterior expectation of the wrapped absolute or squared error of `estimate`.
double expected_loss(const GridPosterior& posterior, double estimate, LossKind kind);

/// shots * integral of p0(theta) against the posterior.
double predict_outcome(const GridPosterior& posterior, const Circuit& circuit, std::int64_t shots,
                       const NoiseModel& noise);

/// Expected loss after spending `resources_left` on `circuit`, using the expected outcome as a
/// fractional observation. Throws InsufficientResources when not even one shot is affordable.
double predict_loss(const GridPosterior& posterior, const Circuit& circuit, std::int64_t resources_left,
                    const NoiseModel& noise, LossKind kind);

}  // namespace qpelab
