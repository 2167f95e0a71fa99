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

#include "qpelab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

namespace qpelab::kernels {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Precomputed per-circuit constants for the half-angle evaluation.
struct FringeParams {
    std::int64_t grid_size;
    std::int64_t period;  // 2G
    std::int64_t step;    // n mod 2G
    double cos_half_phase;
    double sin_half_phase;
    double contrast;
    double floor;  // (1 - contrast) / 2
};

FringeParams make_params(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise) {
    FringeParams p{};
    p.grid_size = table.grid_size();
    p.period = 2 * p.grid_size;
    p.step = circuit.depth() % p.period;
    p.cos_half_phase = std::cos(circuit.phase() / 2);
    p.sin_half_phase = std::sin(circuit.phase() / 2);
    if (circuit.phase() == 0.0) {
        p.cos_half_phase = 1.0;
        p.sin_half_phase = 0.0;
    }
    p.contrast = noise.contrast(static_cast<double>(circuit.depth()));
    p.floor = 0.5 * (1.0 - p.contrast);
    return p;
}

// sin^2(psi/2) and cos^2(psi/2) at table index k.
inline void half_angle_squares(const HalfAngleTable& table, const FringeParams& p, std::int64_t k, double& sin2,
                               double& cos2) {
    const double s = table.sin_at(k);
    const double c = table.cos_at(k);
    const double sh = s * p.cos_half_phase + c * p.sin_half_phase;
    const double ch = c * p.cos_half_phase - s * p.sin_half_phase;
    sin2 = sh * sh;
    cos2 = ch * ch;
}

inline std::int64_t start_index(const FringeParams& p, std::int64_t g) {
    return static_cast<std::int64_t>((static_cast<unsigned __int128>(p.step) * static_cast<unsigned __int128>(g)) %
                                     static_cast<unsigned __int128>(p.period));
}

void fill_log_range(const HalfAngleTable& table, const FringeParams& p, std::int64_t begin, std::int64_t end,
                    double* log_success, double* log_failure) {
    std::int64_t k = start_index(p, begin);
    for (std::int64_t g = begin; g < end; ++g) {
        double sin2, cos2;
        half_angle_squares(table, p, k, sin2, cos2);
        log_success[g] = std::log(p.floor + p.contrast * cos2);
        log_failure[g] = std::log(p.floor + p.contrast * sin2);
        k += p.step;
        if (k >= p.period) k -= p.period;
    }
}

// out = in + x log p0 + (nu - x) log(1 - p0) with only the sides that carry counts evaluated;
// returns max(out) over the range.
double accumulate_outcome_range(const HalfAngleTable& table, const FringeParams& p, const double* in,
                                double successes, double failures, std::int64_t begin, std::int64_t end,
                                double* out) {
    std::int64_t k = start_index(p, begin);
    double peak = kNegInf;
    for (std::int64_t g = begin; g < end; ++g) {
        double sin2, cos2;
        half_angle_squares(table, p, k, sin2, cos2);
        double v = in[g];
        if (successes > 0.0) v += successes * std::log(p.floor + p.contrast * cos2);
        if (failures > 0.0) v += failures * std::log(p.floor + p.contrast * sin2);
        out[g] = v;
        peak = std::max(peak, v);
        k += p.step;
        if (k >= p.period) k -= p.period;
    }
    return peak;
}

void fill_p0_range(const HalfAngleTable& table, const FringeParams& p, std::int64_t begin, std::int64_t end,
                   double* p0) {
    std::int64_t k = start_index(p, begin);
    for (std::int64_t g = begin; g < end; ++g) {
        double sin2, cos2;
        half_angle_squares(table, p, k, sin2, cos2);
        p0[g] = p.floor + p.contrast * cos2;
        k += p.step;
        if (k >= p.period) k -= p.period;
    }
}

inline double record_term(double ls, double lf, double successes, double failures) {
    double v = 0.0;
    if (successes > 0.0) v += successes * ls;
    if (failures > 0.0) v += failures * lf;
    return v;
}

void check_sizes(const HalfAngleTable& table, std::size_t a, std::size_t b) {
    if (a != static_cast<std::size_t>(table.grid_size()) || b != a) {
        throw InvalidArgument("kernel output size does not match grid size");
    }
}

bool use_parallel(std::size_t n) {
    return n >= kParallelThreshold && !omp_in_parallel();
}

}  // namespace

HalfAngleTable::HalfAngleTable(std::int64_t grid_size) : grid_size_(grid_size) {
    if (grid_size < 1) throw InvalidArgument("grid size must be positive");
    const std::int64_t g = grid_size;
    // quarter[m] = sin(pi m / (2G)) for m in [0, G]; other quadrants follow by symmetry so that
    // exact zeros and unit values land where they should.
    std::vector<double> quarter(static_cast<std::size_t>(g + 1));
    for (std::int64_t m = 0; m <= g; ++m) {
        quarter[static_cast<std::size_t>(m)] = std::sin(kPi * static_cast<double>(m) / (2.0 * static_cast<double>(g)));
    }
    quarter[0] = 0.0;
    quarter[static_cast<std::size_t>(g)] = 1.0;
    auto full_sin = [&](std::int64_t m) {  // sin(pi m / (2G)), m taken mod 4G
        m %= 4 * g;
        if (m <= g) return quarter[static_cast<std::size_t>(m)];
        if (m <= 2 * g) return quarter[static_cast<std::size_t>(2 * g - m)];
        if (m <= 3 * g) return -quarter[static_cast<std::size_t>(m - 2 * g)];
        return -quarter[static_cast<std::size_t>(4 * g - m)];
    };
    sin_.resize(static_cast<std::size_t>(2 * g));
    cos_.resize(static_cast<std::size_t>(2 * g));
    for (std::int64_t k = 0; k < 2 * g; ++k) {
        sin_[static_cast<std::size_t>(k)] = full_sin(2 * k);
        cos_[static_cast<std::size_t>(k)] = full_sin(2 * k + g);
    }
}

std::shared_ptr<const HalfAngleTable> HalfAngleTable::for_grid(std::int64_t grid_size) {
    static std::mutex mutex;
    static std::map<std::int64_t, std::shared_ptr<const HalfAngleTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[grid_size];
    if (!slot) slot = std::make_shared<const HalfAngleTable>(grid_size);
    return slot;
}

namespace serial {

void fill_log_likelihoods(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<double> log_success, std::span<double> log_failure) {
    check_sizes(table, log_success.size(), log_failure.size());
    const FringeParams p = make_params(table, circuit, noise);
    fill_log_range(table, p, 0, table.grid_size(), log_success.data(), log_failure.data());
}

void fill_success_probabilities(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                                std::span<double> p0) {
    check_sizes(table, p0.size(), p0.size());
    const FringeParams p = make_params(table, circuit, noise);
    fill_p0_range(table, p, 0, table.grid_size(), p0.data());
}

void accumulate_record(std::span<const double> in, std::span<const double> log_success,
                       std::span<const double> log_failure, double successes, double failures,
                       std::span<double> out) {
    const std::size_t n = in.size();
    for (std::size_t g = 0; g < n; ++g) {
        out[g] = in[g] + record_term(log_success[g], log_failure[g], successes, failures);
    }
}

double accumulate_outcome(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<const double> in, double successes, double failures, std::span<double> out) {
    check_sizes(table, in.size(), out.size());
    const FringeParams p = make_params(table, circuit, noise);
    return accumulate_outcome_range(table, p, in.data(), successes, failures, 0, table.grid_size(), out.data());
}

double max_value(std::span<const double> values) {
    double m = kNegInf;
    const std::size_t n = values.size();
#pragma omp simd reduction(max : m)
    for (std::size_t g = 0; g < n; ++g) m = std::max(m, values[g]);
    return m;
}

double sum_exp_shifted(std::span<const double> values, double shift) {
    double s = 0.0;
    for (double v : values) s += std::exp(v - shift);
    return s;
}

void add_constant(std::span<double> values, double delta) {
    for (double& v : values) v += delta;
}

double weighted_exp_sum(std::span<const double> log_density, std::span<const double> weights) {
    double s = 0.0;
    const std::size_t n = log_density.size();
    for (std::size_t g = 0; g < n; ++g) s += std::exp(log_density[g]) * weights[g];
    return s;
}

}  // namespace serial

namespace parallel {

void fill_log_likelihoods(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<double> log_success, std::span<double> log_failure) {
    check_sizes(table, log_success.size(), log_failure.size());
    const FringeParams p = make_params(table, circuit, noise);
    const std::int64_t n = table.grid_size();
#pragma omp parallel
    {
        const std::int64_t threads = omp_get_num_threads();
        const std::int64_t tid = omp_get_thread_num();
        const std::int64_t chunk = (n + threads - 1) / threads;
        const std::int64_t begin = std::min(n, tid * chunk);
        const std::int64_t end = std::min(n, begin + chunk);
        fill_log_range(table, p, begin, end, log_success.data(), log_failure.data());
    }
}

void fill_success_probabilities(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                                std::span<double> p0) {
    check_sizes(table, p0.size(), p0.size());
    const FringeParams p = make_params(table, circuit, noise);
    const std::int64_t n = table.grid_size();
#pragma omp parallel
    {
        const std::int64_t threads = omp_get_num_threads();
        const std::int64_t tid = omp_get_thread_num();
        const std::int64_t chunk = (n + threads - 1) / threads;
        const std::int64_t begin = std::min(n, tid * chunk);
        const std::int64_t end = std::min(n, begin + chunk);
        fill_p0_range(table, p, begin, end, p0.data());
    }
}

void accumulate_record(std::span<const double> in, std::span<const double> log_success,
                       std::span<const double> log_failure, double successes, double failures,
                       std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t g = 0; g < n; ++g) {
        out[g] = in[g] + record_term(log_success[g], log_failure[g], successes, failures);
    }
}

double accumulate_outcome(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<const double> in, double successes, double failures, std::span<double> out) {
    check_sizes(table, in.size(), out.size());
    const FringeParams p = make_params(table, circuit, noise);
    const std::int64_t n = table.grid_size();
    double peak = kNegInf;
#pragma omp parallel reduction(max : peak)
    {
        const std::int64_t threads = omp_get_num_threads();
        const std::int64_t tid = omp_get_thread_num();
        const std::int64_t chunk = (n + threads - 1) / threads;
        const std::int64_t begin = std::min(n, tid * chunk);
        const std::int64_t end = std::min(n, begin + chunk);
        peak = accumulate_outcome_range(table, p, in.data(), successes, failures, begin, end, out.data());
    }
    return peak;
}

double max_value(std::span<const double> values) {
    double m = kNegInf;
    const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::int64_t g = 0; g < n; ++g) m = std::max(m, values[g]);
    return m;
}

double sum_exp_shifted(std::span<const double> values, double shift) {
    double s = 0.0;
    const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (std::int64_t g = 0; g < n; ++g) s += std::exp(values[g] - shift);
    return s;
}

void add_constant(std::span<double> values, double delta) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t g = 0; g < n; ++g) values[g] += delta;
}

double weighted_exp_sum(std::span<const double> log_density, std::span<const double> weights) {
    double s = 0.0;
    const std::int64_t n = static_cast<std::int64_t>(log_density.size());
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (std::int64_t g = 0; g < n; ++g) s += std::exp(log_density[g]) * weights[g];
    return s;
}

}  // namespace parallel

void fill_log_likelihoods(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<double> log_success, std::span<double> log_failure) {
    if (use_parallel(log_success.size())) {
        parallel::fill_log_likelihoods(table, circuit, noise, log_success, log_failure);
    } else {
        serial::fill_log_likelihoods(table, circuit, noise, log_success, log_failure);
    }
}

void fill_success_probabilities(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                                std::span<double> p0) {
    if (use_parallel(p0.size())) {
        parallel::fill_success_probabilities(table, circuit, noise, p0);
    } else {
        serial::fill_success_probabilities(table, circuit, noise, p0);
    }
}

void accumulate_record(std::span<const double> in, std::span<const double> log_success,
                       std::span<const double> log_failure, double successes, double failures,
                       std::span<double> out) {
    if (use_parallel(in.size())) {
        parallel::accumulate_record(in, log_success, log_failure, successes, failures, out);
    } else {
        serial::accumulate_record(in, log_success, log_failure, successes, failures, out);
    }
}

double accumulate_outcome(const HalfAngleTable& table, const Circuit& circuit, const NoiseModel& noise,
                          std::span<const double> in, double successes, double failures, std::span<double> out) {
    return use_parallel(in.size()) ? parallel::accumulate_outcome(table, circuit, noise, in, successes, failures, out)
                                   : serial::accumulate_outcome(table, circuit, noise, in, successes, failures, out);
}

double max_value(std::span<const double> values) {
    return use_parallel(values.size()) ? parallel::max_value(values) : serial::max_value(values);
}

double sum_exp_shifted(std::span<const double> values, double shift) {
    return use_parallel(values.size()) ? parallel::sum_exp_shifted(values, shift)
                                       : serial::sum_exp_shifted(values, shift);
}

void add_constant(std::span<double> values, double delta) {
    if (use_parallel(values.size())) {
        parallel::add_constant(values, delta);
    } else {
        serial::add_constant(values, delta);
    }
}

double weighted_exp_sum(std::span<const double> log_density, std::span<const double> weights) {
    return use_parallel(log_density.size()) ? parallel::weighted_exp_sum(log_density, weights)
                                            : serial::weighted_exp_sum(log_density, weights);
}

}  // namespace qpelab::kernels
