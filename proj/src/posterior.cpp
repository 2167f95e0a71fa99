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

#include "qpelab/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::int64_t wrap_index(std::int64_t i, std::int64_t n) {
    i %= n;
    return i < 0 ? i + n : i;
}

// Integral over t in [t0, t1] of the Catmull-Rom cubic through (f0, f1, f2, f3), where t = 0
// sits on f1 and t = 1 on f2.
double catmull_rom_integral(double f0, double f1, double f2, double f3, double t0, double t1) {
    const double a0 = f1;
    const double a1 = 0.5 * (f2 - f0);
    const double a2 = f0 - 2.5 * f1 + 2.0 * f2 - 0.5 * f3;
    const double a3 = -0.5 * f0 + 1.5 * f1 - 1.5 * f2 + 0.5 * f3;
    auto antiderivative = [&](double t) {
        return t * (a0 + t * (a1 / 2 + t * (a2 / 3 + t * (a3 / 4))));
    };
    return antiderivative(t1) - antiderivative(t0);
}

void require_normalized(const GridPosterior& posterior) {
    if (!posterior.normalized()) throw InvalidArgument("posterior is not normalized");
}

std::int64_t argmax_first(std::span<const double> values) {
    std::int64_t best = 0;
    for (std::int64_t g = 1; g < static_cast<std::int64_t>(values.size()); ++g) {
        if (values[static_cast<std::size_t>(g)] > values[static_cast<std::size_t>(best)]) best = g;
    }
    return best;
}

// Parabolic refinement of the peak at cell g on the log density.
double refine_peak(const GridPosterior& posterior, std::int64_t g) {
    const auto lw = posterior.log_weights();
    const std::int64_t n = posterior.grid_size();
    const double left = lw[static_cast<std::size_t>(wrap_index(g - 1, n))];
    const double mid = lw[static_cast<std::size_t>(g)];
    const double right = lw[static_cast<std::size_t>(wrap_index(g + 1, n))];
    double offset = 0.0;
    if (std::isfinite(left) && std::isfinite(mid) && std::isfinite(right)) {
        const double curvature = left - 2.0 * mid + right;
        if (curvature < 0.0) {
            offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
        }
    }
    return wrap_angle((static_cast<double>(g) + offset) * posterior.cell_width());
}

}  // namespace

CircularInterval::CircularInterval(double center, double half_width)
    : center_(wrap_angle(center)), half_width_(half_width) {
    if (!(half_width > 0.0 && half_width <= kPi)) {
        throw InvalidArgument("interval half-width must lie in (0, pi], got " + std::to_string(half_width));
    }
}

bool CircularInterval::contains(double theta) const {
    return wrapped_distance(theta, center_) <= half_width_;
}

bool CircularInterval::is_within(const CircularInterval& outer, double tolerance) const {
    if (outer.half_width_ >= kPi - tolerance) return true;
    return wrapped_distance(center_, outer.center_) + half_width_ <= outer.half_width_ + tolerance;
}

std::string_view to_string(LossKind kind) {
    return kind == LossKind::kAbsolute ? "mae" : "mse";
}

LossKind parse_loss_kind(std::string_view name) {
    if (name == "mae" || name == "absolute") return LossKind::kAbsolute;
    if (name == "mse" || name == "squared") return LossKind::kSquared;
    throw InvalidArgument("unknown loss kind '" + std::string(name) + "'");
}

GridPosterior::GridPosterior(std::shared_ptr<const kernels::HalfAngleTable> table, std::vector<double> log_weights)
    : table_(std::move(table)), log_weights_(std::move(log_weights)) {}

GridPosterior GridPosterior::uniform(std::int64_t grid_size) {
    if (grid_size < kMinGridSize) {
        throw InvalidArgument("grid size must be >= " + std::to_string(kMinGridSize) + ", got " +
                              std::to_string(grid_size));
    }
    GridPosterior p(kernels::HalfAngleTable::for_grid(grid_size),
                    std::vector<double>(static_cast<std::size_t>(grid_size), -std::log(kTwoPi)));
    p.normalized_ = true;
    return p;
}

GridPosterior GridPosterior::from_log_weights(std::vector<double> log_weights) {
    const auto n = static_cast<std::int64_t>(log_weights.size());
    if (n < kMinGridSize) {
        throw InvalidArgument("grid size must be >= " + std::to_string(kMinGridSize));
    }
    for (double v : log_weights) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
            throw InvalidArgument("log weights must be finite or -inf");
        }
    }
    if (kernels::max_value(log_weights) == kNegInf) {
        throw ImpossibleObservation("all log weights are -inf");
    }
    GridPosterior p(kernels::HalfAngleTable::for_grid(n), std::move(log_weights));
    p.normalize();
    return p;
}

double GridPosterior::cell_width() const {
    return kTwoPi / static_cast<double>(grid_size());
}

double GridPosterior::angle(std::int64_t g) const {
    return kTwoPi * static_cast<double>(g) / static_cast<double>(grid_size());
}

double GridPosterior::density(std::int64_t g) const {
    return std::exp(log_weights_[static_cast<std::size_t>(g)]);
}

std::vector<double> GridPosterior::densities() const {
    std::vector<double> out(log_weights_.size());
    std::transform(log_weights_.begin(), log_weights_.end(), out.begin(), [](double v) { return std::exp(v); });
    return out;
}

const GridPosterior::LikelihoodCache& GridPosterior::likelihood_tables(const Circuit& circuit,
                                                                       const NoiseModel& noise) const {
    if (!cache_.circuit || !(*cache_.circuit == circuit) || !(cache_.noise == noise) ||
        cache_.log_success.size() != log_weights_.size()) {
        cache_.log_success.resize(log_weights_.size());
        cache_.log_failure.resize(log_weights_.size());
        kernels::fill_log_likelihoods(*table_, circuit, noise, cache_.log_success, cache_.log_failure);
        cache_.circuit = circuit;
        cache_.noise = noise;
    }
    return cache_;
}

void GridPosterior::update(const MeasurementRecord& record, const NoiseModel& noise) {
    const std::int64_t depth = record.circuit().depth();
    if (depth > max_resolvable_depth()) {
        throw GridTooCoarse("grid of " + std::to_string(grid_size()) + " cells cannot resolve depth " +
                            std::to_string(depth) + " (needs >= " + std::to_string(kPointsPerPeriod * depth) + ")");
    }
    if (record.shots() == 0) return;

    const Circuit& circuit = record.circuit();
    const double successes = record.successes();
    const double failures = static_cast<double>(record.shots()) - successes;
    scratch_.resize(log_weights_.size());
    double peak = kNegInf;
    const bool cached = cache_.circuit && *cache_.circuit == circuit && cache_.noise == noise &&
                        cache_.log_success.size() == log_weights_.size();
    const bool repeated = last_circuit_ && *last_circuit_ == circuit && last_noise_ == noise;
    if (cached || repeated) {
        const LikelihoodCache& tables = likelihood_tables(circuit, noise);
        kernels::accumulate_record(log_weights_, tables.log_success, tables.log_failure, successes, failures,
                                   scratch_);
        peak = kernels::max_value(scratch_);
    } else {
        peak = kernels::accumulate_outcome(*table_, circuit, noise, log_weights_, successes, failures, scratch_);
    }
    last_circuit_ = circuit;
    last_noise_ = noise;
    if (peak == kNegInf) {
        throw ImpossibleObservation("observation has zero likelihood on the whole posterior support");
    }
    log_weights_.swap(scratch_);
    normalize();
}

void GridPosterior::normalize() {
    const double peak = kernels::max_value(log_weights_);
    const double total = kernels::sum_exp_shifted(log_weights_, peak) * cell_width();
    kernels::add_constant(log_weights_, -(peak + std::log(total)));
    normalized_ = true;
}

GridPosterior uniform_prior(std::int64_t grid_size) {
    return GridPosterior::uniform(grid_size);
}

std::int64_t resolving_grid_size(std::int64_t grid_size, std::int64_t max_depth, double information) {
    std::int64_t grid = std::max(grid_size, kMinGridSize);
    const double width_cells = kTwoPi * std::sqrt(std::max(information, 0.0));
    while (grid / kPointsPerPeriod < max_depth || static_cast<double>(grid) < width_cells) grid *= 2;
    return grid;
}

double circuit_information(std::int64_t depth, std::int64_t shots, const NoiseModel& noise) {
    const double n = static_cast<double>(depth);
    const double c = noise.contrast(n);
    return static_cast<double>(shots) * n * n * c * c;
}

GridPosterior update(const GridPosterior& posterior, const MeasurementRecord& record, const NoiseModel& noise) {
    GridPosterior out = posterior;
    out.update(record, noise);
    return out;
}

double confidence(const GridPosterior& posterior, const CircularInterval& interval) {
    require_normalized(posterior);
    const std::int64_t n = posterior.grid_size();
    const double h = posterior.cell_width();
    const auto lw = posterior.log_weights();
    if (interval.half_width() >= kPi) {
        return std::min(1.0, kernels::sum_exp_shifted(lw, 0.0) * h);
    }

    const double ua = interval.lower() / h;
    const double ub = interval.upper() / h;
    const auto first = static_cast<std::int64_t>(std::floor(ua));
    const auto last = static_cast<std::int64_t>(std::floor(ub));

    // Densities for cells first-1 .. last+2.
    std::vector<double> f(static_cast<std::size_t>(last - first + 4));
    for (std::int64_t i = first - 1; i <= last + 2; ++i) {
        f[static_cast<std::size_t>(i - first + 1)] = std::exp(lw[static_cast<std::size_t>(wrap_index(i, n))]);
    }
    double total = 0.0;
    for (std::int64_t i = first; i <= last; ++i) {
        const double t0 = std::max(ua - static_cast<double>(i), 0.0);
        const double t1 = std::min(ub - static_cast<double>(i), 1.0);
        if (t1 <= t0) continue;
        const std::size_t j = static_cast<std::size_t>(i - first + 1);
        total += catmull_rom_integral(f[j - 1], f[j], f[j + 1], f[j + 2], t0, t1);
    }
    return std::clamp(total * h, 0.0, 1.0);
}

double map_estimate(const GridPosterior& posterior) {
    require_normalized(posterior);
    return refine_peak(posterior, argmax_first(posterior.log_weights()));
}

double map_estimate_within(const GridPosterior& posterior, const CircularInterval& interval) {
    require_normalized(posterior);
    if (interval.half_width() >= kPi) return map_estimate(posterior);
    const std::int64_t n = posterior.grid_size();
    const double h = posterior.cell_width();
    const auto lw = posterior.log_weights();
    const auto first = static_cast<std::int64_t>(std::ceil(interval.lower() / h));
    const auto last = static_cast<std::int64_t>(std::floor(interval.upper() / h));
    if (last < first) {
        return refine_peak(posterior, wrap_index(std::llround(interval.center() / h), n));
    }
    std::int64_t best = wrap_index(first, n);
    for (std::int64_t i = first + 1; i <= last; ++i) {
        const std::int64_t g = wrap_index(i, n);
        if (lw[static_cast<std::size_t>(g)] > lw[static_cast<std::size_t>(best)]) best = g;
    }
    return refine_peak(posterior, best);
}

double circular_mean_estimate(const GridPosterior& posterior) {
    require_normalized(posterior);
    const std::int64_t n = posterior.grid_size();
    const auto& table = posterior.table();
    const auto lw = posterior.log_weights();
    double c = 0.0;
    double s = 0.0;
    for (std::int64_t g = 0; g < n; ++g) {
        const double w = std::exp(lw[static_cast<std::size_t>(g)]);
        c += w * table.cos_at(2 * g);
        s += w * table.sin_at(2 * g);
    }
    c *= posterior.cell_width();
    s *= posterior.cell_width();
    if (std::hypot(c, s) <= 1e-12) {
        throw UndefinedMean("circular mean undefined: resultant length " + std::to_string(std::hypot(c, s)));
    }
    return wrap_angle(std::atan2(s, c));
}

double expected_loss(const GridPosterior& posterior, double estimate, LossKind kind) {
    require_normalized(posterior);
    const std::int64_t n = posterior.grid_size();
    const auto lw = posterior.log_weights();
    double total = 0.0;
    for (std::int64_t g = 0; g < n; ++g) {
        const double v = lw[static_cast<std::size_t>(g)];
        if (v == kNegInf) continue;
        const double d = wrapped_distance(estimate, posterior.angle(g));
        total += std::exp(v) * (kind == LossKind::kAbsolute ? d : d * d);
    }
    return total * posterior.cell_width();
}

double predict_outcome(const GridPosterior& posterior, const Circuit& circuit, std::int64_t shots,
                       const NoiseModel& noise) {
    require_normalized(posterior);
    if (shots < 0) throw InvalidArgument("shots must be non-negative");
    std::vector<double> p0(static_cast<std::size_t>(posterior.grid_size()));
    kernels::fill_success_probabilities(posterior.table(), circuit, noise, p0);
    const double mean_p0 = kernels::weighted_exp_sum(posterior.log_weights(), p0) * posterior.cell_width();
    const double nu = static_cast<double>(shots);
    return std::clamp(nu * mean_p0, 0.0, nu);
}

double predict_loss(const GridPosterior& posterior, const Circuit& circuit, std::int64_t resources_left,
                    const NoiseModel& noise, LossKind kind) {
    const std::int64_t shots = resources_left / circuit.depth();
    if (resources_left < circuit.depth() || shots < 1) {
        throw InsufficientResources("cannot afford one shot of depth " + std::to_string(circuit.depth()) + " with " +
                                    std::to_string(resources_left) + " resources left");
    }
    const double expected_successes = predict_outcome(posterior, circuit, shots, noise);
    GridPosterior hypothetical = posterior;
    hypothetical.update(MeasurementRecord(circuit, shots, expected_successes), noise);
    return expected_loss(hypothetical, map_estimate(hypothetical), kind);
}

}  // namespace qpelab
