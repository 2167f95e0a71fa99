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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qpelab/adaptive.hpp"
#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

using namespace qpelab;

namespace {

AlgorithmConfig config(std::int64_t total, double beta = 1.0, std::uint64_t seed = 0) {
    AlgorithmConfig c;
    c.total_resources = total;
    c.noise = NoiseModel(1.0, beta);
    c.seed = seed;
    return c;
}

}  // namespace

TEST(RequiredConfidence, Examples) {
    EXPECT_NEAR(required_confidence(2, config(300)), std::pow(2.0 / 300.0, 3), 1e-20);
    EXPECT_NEAR(required_confidence(2, config(300)), 2.963e-7, 1e-10);
    EXPECT_EQ(required_confidence(300, config(300)), 1.0);
    const AlgorithmConfig c = config(1 << 20);
    for (std::int64_t n = 1; n < 1 << 19; n *= 2) EXPECT_LT(required_confidence(n, c), required_confidence(2 * n, c));
}

TEST(NextDepth, Examples) {
    AlgorithmConfig c = config(1 << 20);
    c.depth_limit = 1000000;
    EXPECT_EQ(next_depth(1, c), 1);
    EXPECT_EQ(next_depth(4, c), 8);
    EXPECT_EQ(next_depth(10, config(1024, 0.9)), 5);
    c.depth_limit = 100;
    EXPECT_EQ(next_depth(10, c), 100);
    EXPECT_THROW(next_depth(0, c), InvalidArgument);
}

TEST(ChooseCenter, Examples) {
    const CircularInterval previous(1.5, 0.5);
    EXPECT_DOUBLE_EQ(choose_center_with_width(1.6, previous, 0.2, 3), 1.6);
    EXPECT_NEAR(choose_center_with_width(1.05, previous, 0.2, 3), 1.2, 1e-12);
    EXPECT_NEAR(choose_center_with_width(1.95, previous, 0.2, 3), 1.8, 1e-12);
    EXPECT_DOUBLE_EQ(choose_center(0.05, std::nullopt, 2, 1), 0.05);
    EXPECT_DOUBLE_EQ(choose_center(0.05, CircularInterval(3.0, 0.1), 2, 1), 0.05);
    EXPECT_THROW(choose_center_with_width(1.0, CircularInterval(1.0, 0.1), 0.2, 2), InfeasibleInterval);
}

TEST(ChooseCenter, ResultAlwaysNests) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi), width(0.01, kPi);
    for (int i = 0; i < 10000; ++i) {
        const double outer = width(rng);
        const double inner = outer * std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        const CircularInterval previous(angle(rng), outer);
        const double c = choose_center_with_width(angle(rng), previous, inner, 2);
        ASSERT_TRUE(CircularInterval(c, inner).is_within(previous, 1e-12));
    }
}

TEST(MaxShots, Examples) {
    EXPECT_EQ(chernoff_shot_budget(2.0, 2.0, 1, NoiseModel()), 0);
    EXPECT_EQ(chernoff_shot_budget(1e-6, 1e-4, 1, NoiseModel()), 40);
    const double raw = 32.0 / (kPi * kPi) * (std::log(2e6) - 0.25 * std::log(2e4));
    EXPECT_EQ(chernoff_shot_budget(1e-6, 1e-4, 5, NoiseModel(1.0, 0.9)),
              static_cast<std::int64_t>(std::ceil(raw * std::pow(0.9, -10))));
    EXPECT_NEAR(std::pow(0.9, -10), 2.868, 1e-3);
}

TEST(Run, MinimalBudget) {
    const AlgorithmTrace t = run(config(2, 1.0, 7), 0.0);
    EXPECT_EQ(t.resources_spent, 2);
    ASSERT_EQ(t.circuit_tallies.size(), 2u);
    EXPECT_EQ(t.circuit_tallies[0].circuit, Circuit(1, 0.0));
    EXPECT_EQ(t.circuit_tallies[1].circuit, Circuit(1, kPi / 4));
    EXPECT_EQ(t.circuit_tallies[0].shots, 1);
    EXPECT_EQ(t.circuit_tallies[1].shots, 1);

    GridPosterior p = uniform_prior(t.grid_size_used);
    for (const auto& tally : t.circuit_tallies) {
        p.update(MeasurementRecord(tally.circuit, tally.shots, static_cast<double>(tally.successes)), NoiseModel());
    }
    EXPECT_DOUBLE_EQ(t.final_estimate, map_estimate(p));
    EXPECT_TRUE(check_trace(t).empty());
}

TEST(Run, NoisyDepthsStayAtOptimum) {
    const AlgorithmTrace t = run(config(300, 0.9, 1), 1.0);
    EXPECT_LE(t.max_depth_used(), 5);
    for (std::size_t i = 1; i < t.steps.size(); ++i) {
        EXPECT_TRUE(t.steps[i].interval.is_within(t.steps[i - 1].interval, 1e-9));
    }
    EXPECT_TRUE(check_trace(t).empty());
}

namespace {

int deep_runs(std::int64_t total) {
    int deep = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double theta = kTwoPi * static_cast<double>(seed) / 100.0 + 0.01;
        const AlgorithmTrace t = run(config(total, 1.0, seed), theta);
        if (t.max_depth_used() >= 64) ++deep;
        EXPECT_TRUE(check_trace(t).empty());
    }
    return deep;
}

}  // namespace

// Known red: with eps_i = (n_i / N)^3 the depth-32 gate alone needs about 3e4 units of Fisher
// information, roughly everything 1024 applications can buy, so no run is left with 64 to spend.
TEST(Run, NoiselessRunsReachDepth64At1024) {
    EXPECT_GE(deep_runs(1024), 90);
}

TEST(Run, NoiselessRunsReachDepth64At4096) {
    EXPECT_GE(deep_runs(4096), 90);
}

TEST(Run, RandomConfigsKeepAccounting) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 60; ++i) {
        AlgorithmConfig c = config(2 + static_cast<std::int64_t>(rng() % 3000));
        c.noise = NoiseModel(std::uniform_real_distribution<double>(0.6, 1.0)(rng),
                             i % 2 ? 1.0 : std::uniform_real_distribution<double>(0.8, 1.0)(rng));
        c.depth_limit = 1 + static_cast<std::int64_t>(rng() % 200);
        c.epsilon_exponent = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
        c.loss_kind = i % 3 ? LossKind::kAbsolute : LossKind::kSquared;
        c.seed = rng();
        const AlgorithmTrace t = run(c, std::uniform_real_distribution<double>(0.0, kTwoPi)(rng));
        const auto problems = check_trace(t);
        ASSERT_TRUE(problems.empty()) << problems.front();
        EXPECT_EQ(t.resources_spent, c.total_resources);
        EXPECT_LE(t.max_depth_used(), c.depth_limit);
    }
}

TEST(Run, SameSeedSameTrace) {
    const AlgorithmTrace a = run(config(700, 0.97, 42), 2.2);
    const AlgorithmTrace b = run(config(700, 0.97, 42), 2.2);
    EXPECT_EQ(a.final_estimate, b.final_estimate);
    ASSERT_EQ(a.circuit_tallies.size(), b.circuit_tallies.size());
    for (std::size_t i = 0; i < a.circuit_tallies.size(); ++i) {
        EXPECT_EQ(a.circuit_tallies[i].circuit, b.circuit_tallies[i].circuit);
        EXPECT_EQ(a.circuit_tallies[i].successes, b.circuit_tallies[i].successes);
    }
}

TEST(Run, CircularMeanEstimator) {
    AlgorithmConfig c = config(512, 1.0, 3);
    c.estimator = EstimatorKind::kCircularMean;
    const AlgorithmTrace t = run(c, 4.0);
    EXPECT_LT(wrapped_distance(t.final_estimate, 4.0), 0.2);
}

TEST(Run, RejectsInvalidConfig) {
    AlgorithmConfig c = config(1);
    EXPECT_THROW(run(c, 0.0), InvalidArgument);
    c = config(100);
    c.grid_size = 32;
    EXPECT_THROW(run(c, 0.0), InvalidArgument);
    EXPECT_THROW(parse_estimator_kind("median"), InvalidArgument);
}

TEST(CheckTrace, FlagsOverdrawAndBrokenNesting) {
    AlgorithmTrace t = run(config(256, 1.0, 9), 1.0);
    ASSERT_TRUE(check_trace(t).empty());
    AlgorithmTrace broken = t;
    broken.resources_spent += 1;
    EXPECT_FALSE(check_trace(broken).empty());
    ASSERT_GE(t.steps.size(), 2u);
    broken = t;
    broken.steps[1].interval = CircularInterval(t.steps[0].interval.center() + 1.0, t.steps[1].interval.half_width());
    EXPECT_FALSE(check_trace(broken).empty());
}

TEST(Run, NoiselessConsistencyAt4096) {
    for (double theta : {0.0, 2.5}) {
        int close = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            if (wrapped_distance(run(config(4096, 1.0, seed), theta).final_estimate, theta) < 0.02) ++close;
        }
        EXPECT_GE(close, 95) << theta;
    }
}

TEST(Run, DistinctDepthsFollowSchedule) {
    for (double beta : {1.0, 0.95, 0.8}) {
        const AlgorithmTrace t = run(config(3000, beta, 4), 5.0);
        std::int64_t previous = 0;
        for (const StepRecord& s : t.steps) {
            EXPECT_GE(s.circuit.depth(), previous);
            EXPECT_EQ(s.circuit.depth(), next_depth(s.step_index, t.config));
            previous = s.circuit.depth();
        }
    }
}
