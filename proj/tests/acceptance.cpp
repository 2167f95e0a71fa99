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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qpelab/adaptive.hpp"
#include "qpelab/angle.hpp"
#include "qpelab/baselines.hpp"
#include "qpelab/bounds.hpp"
#include "qpelab/csv.hpp"
#include "qpelab/errors.hpp"
#include "qpelab/harness.hpp"
#include "qpelab/posterior.hpp"

using namespace qpelab;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
    std::printf("%s  C%-2d %-28s %s  [%.1fs]\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const std::vector<std::int64_t> kLadder{32, 64, 128, 256, 512, 1024, 2048, 4096};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Medians {
    std::map<std::int64_t, double> abs;
    std::map<std::int64_t, double> sq;
    std::map<std::int64_t, double> mean_abs;
};

Medians medians(const std::vector<SweepCellResult>& cells) {
    std::map<std::int64_t, std::vector<double>> abs, sq;
    for (const auto& c : cells) {
        abs[c.n_tot].push_back(c.abs_error);
        sq[c.n_tot].push_back(c.sq_error);
    }
    Medians m;
    for (auto& [n, v] : abs) {
        m.abs[n] = median(v);
        double total = 0.0;
        for (double x : v) total += x;
        m.mean_abs[n] = total / static_cast<double>(v.size());
    }
    for (auto& [n, v] : sq) m.sq[n] = median(v);
    return m;
}

double loglog_slope(const std::map<std::int64_t, double>& by_n) {
    std::vector<double> x, y;
    for (const auto& [n, v] : by_n) {
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(v));
    }
    return oracle::slope(x, y);
}

SweepConfig sweep(Strategy strategy, double beta, std::vector<std::int64_t> ladder, int k, int r,
                  std::uint64_t seed) {
    SweepConfig c;
    c.strategies = {strategy};
    c.resource_ladder = std::move(ladder);
    c.theta_count = k;
    c.repetitions = r;
    c.noise = NoiseModel(1.0, beta);
    c.algorithm.depth_limit = std::int64_t{1} << 20;
    c.master_seed = seed;
    return c;
}

std::string csv_text(const std::vector<SweepCellResult>& cells) {
    std::ostringstream out;
    csv::write_results(out, cells);
    return out.str();
}

double sql(double n) { return std::sqrt(2 / kPi) / std::sqrt(n); }

double floor_variance(double beta, double n) { return -2 * std::exp(1.0) * std::log(beta) / n; }

}  // namespace

int main() {
    std::vector<SweepCellResult> all;
    auto keep = [&](const std::vector<SweepCellResult>& cells) { all.insert(all.end(), cells.begin(), cells.end()); };

    Stopwatch t1;
    const SweepConfig adaptive_cfg = sweep(Strategy::kAdaptive, 1.0, kLadder, 20, 10, 1);
    const auto adaptive = run_sweep(adaptive_cfg);
    keep(adaptive);
    const Medians am = medians(adaptive);
    const double abs_slope = loglog_slope(am.abs), sq_slope = loglog_slope(am.sq);
    report(1, "heisenberg-scaling", abs_slope <= -0.80 && sq_slope <= -1.6,
           fmt("median |err| slope %.3f (<= -0.80), median err^2 slope %.3f (<= -1.6)", abs_slope, sq_slope),
           t1.seconds());

    Stopwatch t2;
    const auto classical = run_sweep(sweep(Strategy::kClassical, 1.0, kLadder, 20, 10, 2));
    keep(classical);
    const double classical_slope = loglog_slope(medians(classical).mean_abs);
    report(2, "sql-baseline", std::abs(classical_slope + 0.5) <= 0.15,
           fmt("MAE slope %.3f (-0.5 +/- 0.15)", classical_slope), t2.seconds());

    Stopwatch t3;
    bool below = true;
    std::string worst;
    double worst_ratio = 0.0;
    for (const auto& [n, m] : am.abs) {
        if (n < 128) continue;
        const double ratio = m / sql(static_cast<double>(n));
        below = below && ratio < 1.0;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst = fmt("N=%lld", static_cast<long long>(n));
        }
    }
    report(3, "sub-sql-crossover", below,
           fmt("max median/SQL over N>=128 is %.3f at %s (< 1)", worst_ratio, worst.c_str()), t3.seconds());

    Stopwatch t4;
    const auto noisy = run_sweep(sweep(Strategy::kAdaptive, 0.9, kLadder, 20, 10, 4));
    keep(noisy);
    // The floor ratio changes by a few percent per doubling, so the trend needs more than 200 runs per point.
    const auto noisy_top = run_sweep(sweep(Strategy::kAdaptive, 0.9, {1024, 2048, 4096}, 20, 50, 40));
    keep(noisy_top);
    const Medians nm = medians(noisy_top);
    std::vector<double> ratios;
    for (const auto& [n, m] : nm.abs) ratios.push_back(m / std::sqrt(floor_variance(0.9, static_cast<double>(n))));
    const double cap = 3 * std::sqrt(2 * floor_variance(0.9, 4096) / kPi);
    const bool non_increasing = ratios[1] <= ratios[0] && ratios[2] <= ratios[1];
    report(4, "noisy-floor", nm.abs.at(4096) <= cap && non_increasing,
           fmt("median@4096 %.4g (<= %.4g); ratio to floor sd %.4f, %.4f, %.4f (non-increasing)", nm.abs.at(4096),
               cap, ratios[0], ratios[1], ratios[2]),
           t4.seconds());

    Stopwatch t5;
    std::int64_t noisy_depth = 0;
    for (const auto* set : {&noisy, &noisy_top}) {
        for (const auto& c : *set) noisy_depth = std::max(noisy_depth, c.max_depth);
    }
    int deep = 0, at_top = 0;
    for (const auto& c : adaptive) {
        if (c.n_tot != 4096) continue;
        ++at_top;
        if (c.max_depth >= 64) ++deep;
    }
    const double deep_share = static_cast<double>(deep) / at_top;
    report(5, "depth-discipline", noisy_depth <= 5 && deep_share >= 0.9,
           fmt("beta=0.9 max depth %lld (<= 5); beta=1 N=4096 depth>=64 in %.1f%% (>= 90%%)",
               static_cast<long long>(noisy_depth), 100 * deep_share),
           t5.seconds());

    Stopwatch t6;
    std::mt19937_64 rng(6);
    double worst_rel = 0.0;
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<oracle::Record> records;
        const int count = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < count; ++i) {
            const std::int64_t depth = 1 + static_cast<std::int64_t>(rng() % 8);
            const std::int64_t shots = 1 + static_cast<std::int64_t>(rng() % 20);
            records.push_back(
                {depth, static_cast<int>(rng() % 16), shots, static_cast<std::int64_t>(rng() % (shots + 1))});
        }
        const std::int64_t grid = 256 << (trial % 4);
        GridPosterior p = uniform_prior(grid);
        try {
            for (const auto& r : records) {
                p.update(MeasurementRecord(Circuit(r.depth, kPi * r.eighths / 8.0), r.shots,
                                           static_cast<double>(r.successes)),
                         NoiseModel());
            }
        } catch (const ImpossibleObservation&) {
            continue;
        }
        const auto want = oracle::dense_posterior(records, grid);
        for (std::int64_t g = 0; g < grid; ++g) {
            const long double w = want[static_cast<std::size_t>(g)];
            const double got = p.density(g);
            // Oracle zeros come from exact rational phases; the library sees them rounded to double.
            const double rel = w == 0.0L ? (got > 1e-25 ? INFINITY : 0.0) : static_cast<double>(std::abs((got - w) / w));
            worst_rel = std::max(worst_rel, rel);
        }
        ++checked;
    }
    report(6, "posterior-oracle", worst_rel <= 1e-9,
           fmt("max relative cell error %.3g over %d record sets (<= 1e-9)", worst_rel, checked), t6.seconds());

    Stopwatch t7;
    {
        const double theta = 1.0;
        const std::int64_t shots = 10000;
        const Circuit circuit(1, kPi / 2 - theta);
        const double p0 = success_probability(theta, circuit, NoiseModel());
        std::mt19937_64 gen(7);
        std::binomial_distribution<std::int64_t> draw(shots, p0);
        std::vector<double> estimates;
        for (int run = 0; run < 200; ++run) {
            GridPosterior p = uniform_prior(1 << 16);
            p.update(MeasurementRecord(circuit, shots, static_cast<double>(draw(gen))), NoiseModel());
            // The fringe has a mirror peak half a turn away; restrict to the half circle around the truth.
            estimates.push_back(map_estimate_within(p, CircularInterval(theta, kPi / 2)));
        }
        double mean = 0.0;
        for (double e : estimates) mean += e;
        mean /= static_cast<double>(estimates.size());
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean);
        var /= static_cast<double>(estimates.size() - 1);
        const double rel = var * static_cast<double>(shots) - 1.0;
        report(7, "variance-formula", std::abs(rel) <= 0.15,
               fmt("MAP variance %.4g vs 1/nu %.4g, off by %+.1f%% (within 15%%)", var, 1.0 / shots, 100 * rel),
               t7.seconds());
    }

    Stopwatch t8;
    {
        bool exact = true;
        double worst_sum = 0.0;
        for (int m = 1; m <= 12; ++m) {
            const std::int64_t size = std::int64_t{1} << m;
            for (std::int64_t k : {std::int64_t{0}, size / 3, size - 1}) {
                const auto probs = qpea_outcome_distribution(kTwoPi * static_cast<double>(k) / size, m);
                exact = exact && probs[static_cast<std::size_t>(k)] == 1.0;
            }
            for (double theta : {0.1, 1.7, 3.14, 4.4, 6.2}) {
                const auto probs = qpea_outcome_distribution(theta, m);
                long double total = 0.0L;
                for (double q : probs) total += q;
                worst_sum = std::max(worst_sum, std::abs(static_cast<double>(total) - 1.0));
            }
        }
        std::map<std::int64_t, double> mae;
        for (int m = 3; m <= 12; ++m) {
            double total = 0.0;
            const int runs = 400;
            for (int i = 0; i < runs; ++i) {
                const double theta = kTwoPi * (i + 0.37) / runs;
                total += wrapped_distance(run_qpea(theta, {m, NoiseModel(), static_cast<std::uint64_t>(1000 * m + i)}).estimate,
                                          theta);
            }
            mae[(std::int64_t{1} << m) - 1] = total / runs;
        }
        const double slope = loglog_slope(mae);
        report(8, "qpea-exactness", exact && worst_sum <= 1e-12 && std::abs(slope + 1) <= 0.2,
               fmt("exact phases certain: %s; max |sum-1| %.2g (<= 1e-12); MAE slope %.3f (-1 +/- 0.2)",
                   exact ? "yes" : "no", worst_sum, slope),
               t8.seconds());
    }

    Stopwatch t9;
    {
        // The bound chain is infeasible or far from asymptotic at desk-scale budgets, so it gets its own ladder.
        auto bound = [](std::int64_t n, double p, double beta, double eps) {
            BoundParams b;
            b.total_resources = n;
            b.exponent = p;
            b.epsilon_scale = eps;
            b.noise = NoiseModel(1.0, beta);
            return appendix_loss_bound(b, LossKind::kAbsolute);
        };
        const std::int64_t top = std::int64_t{1} << 18;
        const double halving = bound(top, 3, 1, 1) / bound(top / 2, 3, 1, 1);
        const double plateau = bound(std::int64_t{1} << 20, 0, 1, 0.01) / bound(top, 0, 1, 0.01);
        const double noisy_ratio = bound(top, 3, 0.9, 1) / bound(top / 2, 3, 0.9, 1);
        const bool pass = std::abs(halving - 0.5) <= 0.05 && std::abs(plateau - 1) <= 0.05 &&
                          std::abs(noisy_ratio / (1 / std::sqrt(2.0)) - 1) <= 0.1;
        report(9, "bound-behavior", pass,
               fmt("p=3 doubling ratio %.4f (0.5 +/- 10%%); p=0 ratio over 4 doublings %.4f (~1); beta=0.9 ratio %.4f "
                   "(0.7071 +/- 10%%)",
                   halving, plateau, noisy_ratio),
               t9.seconds());
    }

    Stopwatch t10;
    {
        SweepConfig serial = adaptive_cfg;
        serial.threads = 1;
        SweepConfig mixed = sweep(Strategy::kAdaptive, 1.0, kLadder, 5, 2, 10);
        mixed.strategies = {Strategy::kAdaptive, Strategy::kQpea, Strategy::kNonadaptiveDoubling, Strategy::kClassical};
        const auto mixed_a = run_sweep(mixed);
        const auto mixed_b = run_sweep(mixed);
        keep(mixed_a);
        const bool identical =
            csv_text(run_sweep(serial)) == csv_text(adaptive) && csv_text(mixed_a) == csv_text(mixed_b);
        std::size_t bad = 0;
        for (const auto& c : all) {
            if (!c.ok || c.resources_spent > c.n_tot || !c.trace_problems.empty()) ++bad;
        }
        report(10, "determinism-accounting", identical && bad == 0,
               fmt("byte-identical CSVs: %s; %zu of %zu cells violate accounting or nesting", identical ? "yes" : "no",
                   bad, all.size()),
               t10.seconds());
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
