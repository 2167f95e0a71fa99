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

#include "qpelab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <omp.h>

#include "qpelab/angle.hpp"
#include "qpelab/baselines.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct CellKey {
    Strategy strategy;
    std::int64_t n_tot;
    int theta_index;
    int rep;
};

auto canonical_tuple(Strategy s, std::int64_t n, int k, int r) {
    return std::make_tuple(to_string(s), n, k, r);
}

template <class Row>
auto group_key(const Row& r) {
    return std::make_pair(to_string(r.strategy), r.n_tot);
}

AggregateRow make_row(Strategy strategy, std::int64_t n_tot, const std::vector<double>& abs,
                      const std::vector<double>& sq, const std::vector<double>& loss) {
    AggregateRow row;
    row.strategy = strategy;
    row.n_tot = n_tot;
    row.abs_error = summarize(abs);
    row.sq_error = summarize(sq);
    row.expected_loss = summarize(loss);
    return row;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::kAdaptive:
            return "adaptive";
        case Strategy::kQpea:
            return "qpea";
        case Strategy::kNonadaptiveDoubling:
            return "nonadaptive-doubling";
        case Strategy::kClassical:
            return "classical";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::kAdaptive, Strategy::kQpea, Strategy::kNonadaptiveDoubling, Strategy::kClassical}) {
        if (name == to_string(s)) return s;
    }
    throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
    if (strategies.empty()) throw InvalidArgument("at least one strategy is required");
    if (resource_ladder.empty()) throw InvalidArgument("resource ladder is empty");
    for (std::size_t i = 0; i < resource_ladder.size(); ++i) {
        if (resource_ladder[i] < 2) throw InvalidArgument("ladder entries must be >= 2");
        if (i > 0 && resource_ladder[i] <= resource_ladder[i - 1]) {
            throw InvalidArgument("resource ladder must be strictly increasing");
        }
    }
    if (theta_count < 1) throw InvalidArgument("theta count must be >= 1");
    if (repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
    if (shots_per_depth < 1) throw InvalidArgument("shots per depth must be >= 1");
    if (threads < 0) throw InvalidArgument("thread count must be >= 0");
    if (!noise.is_noiseless() && std::find(strategies.begin(), strategies.end(), Strategy::kQpea) != strategies.end()) {
        throw InvalidArgument("the qpea strategy is only available without noise");
    }
    AlgorithmConfig probe = algorithm;
    probe.total_resources = resource_ladder.front();
    probe.noise = noise;
    probe.validate();
}

std::uint64_t cell_seed(std::uint64_t master_seed, Strategy strategy, std::int64_t n_tot, int theta_index, int rep) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(strategy) + 1));
    h = splitmix64(h ^ static_cast<std::uint64_t>(n_tot));
    h = splitmix64(h ^ static_cast<std::uint64_t>(theta_index));
    return splitmix64(h ^ static_cast<std::uint64_t>(rep));
}

double theta_for_index(int theta_index, int theta_count) {
    return kTwoPi * static_cast<double>(theta_index) / static_cast<double>(theta_count);
}

SweepCellResult run_cell(const SweepConfig& config, Strategy strategy, std::int64_t n_tot, int theta_index, int rep) {
    SweepCellResult cell;
    cell.strategy = strategy;
    cell.n_tot = n_tot;
    cell.theta_index = theta_index;
    cell.theta_true = theta_for_index(theta_index, config.theta_count);
    cell.rep = rep;

    const std::uint64_t seed = cell_seed(config.master_seed, strategy, n_tot, theta_index, rep);
    const LossKind loss = config.algorithm.loss_kind;
    const auto start = std::chrono::steady_clock::now();
    try {
        double estimate = 0.0;
        switch (strategy) {
            case Strategy::kAdaptive: {
                AlgorithmConfig cfg = config.algorithm;
                cfg.total_resources = n_tot;
                cfg.noise = config.noise;
                cfg.seed = seed;
                const AlgorithmTrace trace = run(cfg, cell.theta_true);
                estimate = trace.final_estimate;
                cell.expected_loss = trace.final_expected_loss;
                cell.resources_spent = trace.resources_spent;
                cell.max_depth = trace.max_depth_used();
                cell.trace_problems = check_trace(trace);
                break;
            }
            case Strategy::kQpea: {
                QpeaConfig cfg;
                cfg.qubit_count = qpea_qubits_for_budget(n_tot);
                cfg.noise = config.noise;
                cfg.seed = seed;
                const BaselineResult r = run_qpea(cell.theta_true, cfg, loss);
                estimate = r.estimate;
                cell.expected_loss = r.expected_loss;
                cell.resources_spent = r.resources_spent;
                cell.max_depth = r.max_depth;
                break;
            }
            case Strategy::kNonadaptiveDoubling:
            case Strategy::kClassical: {
                const BaselineResult r =
                    strategy == Strategy::kClassical
                        ? run_classical(n_tot, cell.theta_true, config.noise, seed, loss, config.algorithm.grid_size)
                        : run_nonadaptive_doubling(n_tot, cell.theta_true, config.noise, config.shots_per_depth,
                                                   seed, loss, config.algorithm.grid_size);
                estimate = r.estimate;
                cell.expected_loss = r.expected_loss;
                cell.resources_spent = r.resources_spent;
                cell.max_depth = r.max_depth;
                break;
            }
        }
        cell.abs_error = wrapped_distance(estimate, cell.theta_true);
        cell.sq_error = cell.abs_error * cell.abs_error;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
        cell.abs_error = cell.sq_error = cell.expected_loss = kNaN;
        cell.resources_spent = 0;
        cell.max_depth = 0;
    }
    if (config.record_runtime) {
        cell.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return cell;
}

void sort_canonical(std::vector<SweepCellResult>& results) {
    std::stable_sort(results.begin(), results.end(), [](const SweepCellResult& a, const SweepCellResult& b) {
        return canonical_tuple(a.strategy, a.n_tot, a.theta_index, a.rep) <
               canonical_tuple(b.strategy, b.n_tot, b.theta_index, b.rep);
    });
}

std::vector<SweepCellResult> run_sweep(const SweepConfig& config, const std::atomic<bool>* cancel) {
    config.validate();
    std::vector<Strategy> strategies = config.strategies;
    std::sort(strategies.begin(), strategies.end(),
              [](Strategy a, Strategy b) { return to_string(a) < to_string(b); });
    strategies.erase(std::unique(strategies.begin(), strategies.end()), strategies.end());

    std::vector<CellKey> keys;
    for (Strategy s : strategies) {
        for (std::int64_t n : config.resource_ladder) {
            for (int k = 0; k < config.theta_count; ++k) {
                for (int r = 0; r < config.repetitions; ++r) keys.push_back({s, n, k, r});
            }
        }
    }

    std::vector<SweepCellResult> results(keys.size());
    std::vector<char> done(keys.size(), 0);
    const auto count = static_cast<std::int64_t>(keys.size());
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
        if (cancel && cancel->load(std::memory_order_relaxed)) continue;
        const CellKey& key = keys[static_cast<std::size_t>(i)];
        results[static_cast<std::size_t>(i)] = run_cell(config, key.strategy, key.n_tot, key.theta_index, key.rep);
        done[static_cast<std::size_t>(i)] = 1;
    }

    std::vector<SweepCellResult> out;
    out.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (done[i]) out.push_back(std::move(results[i]));
    }
    return out;
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("cannot summarize an empty group");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    Summary s;
    s.count = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t mid = s.count / 2;
    s.median = s.count % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    double total = 0.0;
    for (double v : values) total += v;
    s.mean = total / static_cast<double>(s.count);
    return s;
}

std::vector<AggregateRow> aggregate(std::span<const SweepCellResult> results) {
    struct Columns {
        Strategy strategy;
        std::vector<double> abs, sq, loss;
    };
    std::map<std::pair<std::string_view, std::int64_t>, Columns> groups;
    for (const auto& r : results) {
        if (!r.ok) continue;
        auto& g = groups.try_emplace(group_key(r), Columns{r.strategy, {}, {}, {}}).first->second;
        g.abs.push_back(r.abs_error);
        g.sq.push_back(r.sq_error);
        g.loss.push_back(r.expected_loss);
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, g] : groups) rows.push_back(make_row(g.strategy, key.second, g.abs, g.sq, g.loss));
    return rows;
}

std::vector<AggregateRow> aggregate_by_theta(std::span<const SweepCellResult> results) {
    struct Sums {
        double abs = 0.0, sq = 0.0, loss = 0.0;
        int count = 0;
    };
    struct Columns {
        Strategy strategy;
        std::map<int, Sums> per_theta;
    };
    std::map<std::pair<std::string_view, std::int64_t>, Columns> groups;
    for (const auto& r : results) {
        if (!r.ok) continue;
        auto& g = groups.try_emplace(group_key(r), Columns{r.strategy, {}}).first->second;
        Sums& s = g.per_theta[r.theta_index];
        s.abs += r.abs_error;
        s.sq += r.sq_error;
        s.loss += r.expected_loss;
        ++s.count;
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, g] : groups) {
        std::vector<double> abs, sq, loss;
        for (const auto& [k, s] : g.per_theta) {
            abs.push_back(s.abs / s.count);
            sq.push_back(s.sq / s.count);
            loss.push_back(s.loss / s.count);
        }
        rows.push_back(make_row(g.strategy, key.second, abs, sq, loss));
    }
    return rows;
}

LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
    std::vector<double> xs;
    for (const auto& [n, err] : points) {
        if (!(n > 0.0) || !(err > 0.0) || !std::isfinite(n) || !std::isfinite(err)) {
            throw InvalidArgument("log-log fit needs positive finite N and error values");
        }
        xs.push_back(n);
    }
    std::sort(xs.begin(), xs.end());
    if (std::unique(xs.begin(), xs.end()) - xs.begin() < 3) {
        throw InvalidArgument("log-log fit needs at least 3 distinct N values");
    }

    const double count = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [n, err] : points) {
        mx += std::log(n);
        my += std::log(err);
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [n, err] : points) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - my);
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (const auto& [n, err] : points) {
        const double r = std::log(err) - (fit.intercept + fit.slope * std::log(n));
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / count);
    return fit;
}

}  // namespace qpelab
