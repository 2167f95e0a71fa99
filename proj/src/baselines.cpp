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

#include "qpelab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

namespace {

// Fejer-type kernel sin^2(pi x) / (M^2 sin^2(pi x / M)) for a readout offset of x cells.
double fejer(double x, double register_size) {
    const double den = register_size * std::sin(kPi * x / register_size);
    if (den == 0.0) return 1.0;
    const double num = std::sin(kPi * x);
    return (num * num) / (den * den);
}

// Uniform-prior expected loss of the QPEA estimate; independent of the outcome k.
double qpea_expected_loss(int m, LossKind kind) {
    static std::mutex mutex;
    static std::map<std::pair<int, LossKind>, double> cache;
    const std::lock_guard lock(mutex);
    const auto key = std::make_pair(m, kind);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const double size = std::ldexp(1.0, m);
    const std::int64_t grid = std::max<std::int64_t>(4096, kPointsPerPeriod * (std::int64_t{1} << m));
    const double h = kTwoPi / static_cast<double>(grid);
    double total = 0.0;
    for (std::int64_t g = 0; g < grid; ++g) {
        const double delta = -kPi + h * static_cast<double>(g);
        const double w = fejer(size * delta / kTwoPi, size);
        const double d = std::abs(delta);
        total += w * (kind == LossKind::kAbsolute ? d : d * d);
    }
    const double value = total * h * size / kTwoPi;
    cache.emplace(key, value);
    return value;
}

BaselineResult summarize(const GridPosterior& posterior, std::int64_t spent, std::int64_t max_depth, LossKind kind) {
    BaselineResult r;
    r.estimate = map_estimate(posterior);
    r.expected_loss = expected_loss(posterior, r.estimate, kind);
    r.resources_spent = spent;
    r.max_depth = max_depth;
    return r;
}

}  // namespace

void QpeaConfig::validate() const {
    if (qubit_count < 1 || qubit_count > kMaxQpeaQubits) {
        throw InvalidArgument("qubit count must lie in [1, 24], got " + std::to_string(qubit_count));
    }
    if (!noise.is_noiseless()) throw InvalidArgument("QPEA is only modelled without noise");
}

std::vector<double> qpea_outcome_distribution(double theta, int qubit_count) {
    if (qubit_count < 1 || qubit_count > kMaxQpeaQubits) {
        throw InvalidArgument("qubit count must lie in [1, 24], got " + std::to_string(qubit_count));
    }
    if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
    const std::int64_t size = std::int64_t{1} << qubit_count;
    const double sized = static_cast<double>(size);

    // theta * 2^m / 2pi = j + f with |f| <= 1/2, so sin(pi f) keeps full relative accuracy.
    const double u = wrap_angle(theta) / kTwoPi * sized;
    const double j = std::nearbyint(u);
    double f = u - j;
    if (std::abs(f) < 8.0 * std::numeric_limits<double>::epsilon() * std::max(u, 1.0)) f = 0.0;
    const auto base = static_cast<std::int64_t>(j) % size;

    std::vector<double> probs(static_cast<std::size_t>(size), 0.0);
    if (f == 0.0) {
        probs[static_cast<std::size_t>(base)] = 1.0;
        return probs;
    }
    const double s = std::sin(kPi * f);
    for (std::int64_t d = -(size / 2) + 1; d <= size / 2; ++d) {
        const double den = sized * std::sin(kPi * (f - static_cast<double>(d)) / sized);
        const std::int64_t k = ((base + d) % size + size) % size;
        probs[static_cast<std::size_t>(k)] = (s * s) / (den * den);
    }
    return probs;
}

int qpea_qubits_for_budget(std::int64_t total_resources) {
    if (total_resources < 1) throw InsufficientResources("QPEA needs at least one unitary application");
    int m = 1;
    while (m < kMaxQpeaQubits && (std::int64_t{1} << (m + 1)) - 1 <= total_resources) ++m;
    return m;
}

BaselineResult run_qpea(double theta_true, const QpeaConfig& config, LossKind kind) {
    config.validate();
    const std::vector<double> probs = qpea_outcome_distribution(theta_true, config.qubit_count);
    Rng rng(config.seed);
    std::discrete_distribution<std::int64_t> draw(probs.begin(), probs.end());
    const std::int64_t k = draw(rng);
    const std::int64_t size = std::int64_t{1} << config.qubit_count;

    BaselineResult r;
    r.estimate = kTwoPi * static_cast<double>(k) / static_cast<double>(size);
    r.expected_loss = qpea_expected_loss(config.qubit_count, kind);
    r.resources_spent = size - 1;
    r.max_depth = size / 2;
    return r;
}

BaselineResult run_nonadaptive_doubling(std::int64_t total_resources, double theta_true, const NoiseModel& noise,
                                        std::int64_t shots_per_depth, std::uint64_t seed, LossKind kind,
                                        std::int64_t grid_size) {
    if (shots_per_depth < 1) throw InvalidArgument("shots per depth must be >= 1");
    if (total_resources < 2) {
        throw InsufficientResources("non-adaptive doubling needs a budget of at least 2, got " +
                                    std::to_string(total_resources));
    }

    std::vector<std::int64_t> depths;
    std::int64_t left = total_resources;
    for (std::int64_t n = 1; n <= left / (2 * shots_per_depth); n *= 2) {
        depths.push_back(n);
        left -= 2 * shots_per_depth * n;
    }
    const std::int64_t deepest = depths.empty() ? 1 : depths.back();
    double information = 0.0;
    for (std::int64_t n : depths) information += circuit_information(n, 2 * shots_per_depth, noise);
    information += circuit_information(deepest, left / deepest, noise);

    GridPosterior posterior = GridPosterior::uniform(resolving_grid_size(grid_size, deepest, information));
    Rng rng(seed);
    std::int64_t spent = 0;
    auto shoot = [&](std::int64_t depth, double phase, std::int64_t shots) {
        if (shots == 0) return;
        const Circuit circuit(depth, phase);
        const std::int64_t x = sample_outcome(circuit, shots, theta_true, noise, rng);
        posterior.update(MeasurementRecord(circuit, shots, static_cast<double>(x)), noise);
        spent += depth * shots;
    };

    for (std::int64_t n : depths) {
        shoot(n, 0.0, shots_per_depth);
        shoot(n, kPi / 2, shots_per_depth);
    }
    for (std::int64_t n = deepest; n >= 1 && spent < total_resources; n /= 2) {
        const std::int64_t shots = (total_resources - spent) / n;
        shoot(n, 0.0, shots - shots / 2);
        shoot(n, kPi / 2, shots / 2);
    }
    return summarize(posterior, spent, deepest, kind);
}

BaselineResult run_classical(std::int64_t total_resources, double theta_true, const NoiseModel& noise,
                             std::uint64_t seed, LossKind kind, std::int64_t grid_size) {
    if (total_resources < 2) {
        throw InsufficientResources("classical strategy needs a budget of at least 2, got " +
                                    std::to_string(total_resources));
    }
    GridPosterior posterior = GridPosterior::uniform(
        resolving_grid_size(grid_size, 1, circuit_information(1, total_resources, noise)));
    Rng rng(seed);
    const std::int64_t cos_shots = total_resources - total_resources / 2;
    const std::int64_t sin_shots = total_resources / 2;
    for (const auto& [phase, shots] : {std::pair{0.0, cos_shots}, std::pair{kPi / 2, sin_shots}}) {
        const Circuit circuit(1, phase);
        const std::int64_t x = sample_outcome(circuit, shots, theta_true, noise, rng);
        posterior.update(MeasurementRecord(circuit, shots, static_cast<double>(x)), noise);
    }
    return summarize(posterior, total_resources, 1, kind);
}

LimitCurves limit_curves(double total_resources, const NoiseModel& noise) {
    if (!(total_resources >= 1.0)) throw InvalidArgument("total resources must be >= 1");
    const double scale = std::sqrt(2.0 / kPi);
    LimitCurves c;
    c.sql = scale / std::sqrt(total_resources);
    c.hl = scale / total_resources;
    if (noise.beta() < 1.0) c.noisy_floor = scale * std::sqrt(noisy_floor_variance(noise, total_resources));
    return c;
}

}  // namespace qpelab
