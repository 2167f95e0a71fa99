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
#include <limits>
#include <random>

#include "oracles.hpp"
#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"
#include "qpelab/model.hpp"

using namespace qpelab;

TEST(NoiseModel, RejectsOutOfRange) {
    EXPECT_THROW(NoiseModel(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(NoiseModel(1.1, 1.0), InvalidArgument);
    EXPECT_THROW(NoiseModel(1.0, 0.0), InvalidArgument);
    EXPECT_THROW(NoiseModel(1.0, std::nan("")), InvalidArgument);
    EXPECT_TRUE(NoiseModel().is_noiseless());
    EXPECT_DOUBLE_EQ(NoiseModel(0.8, 0.9).contrast(2), 0.8 * 0.81);
}

TEST(Circuit, RejectsBadDepthAndPhase) {
    EXPECT_THROW(Circuit(0, 0.0), InvalidArgument);
    EXPECT_THROW(Circuit(1, std::numeric_limits<double>::infinity()), InvalidArgument);
    EXPECT_THROW(MeasurementRecord(Circuit(1, 0.0), 3, 4.0), InvalidArgument);
    EXPECT_THROW(MeasurementRecord(Circuit(1, 0.0), -1, 0.0), InvalidArgument);
}

TEST(SuccessProbability, Examples) {
    EXPECT_DOUBLE_EQ(success_probability(0.0, Circuit(1, 0.0), NoiseModel()), 1.0);
    EXPECT_NEAR(success_probability(kPi, Circuit(1, 0.0), NoiseModel()), 0.0, 1e-15);
    const double p = success_probability(1.0, Circuit(2, 0.0), NoiseModel(1.0, 0.9));
    EXPECT_NEAR(p, 0.5 + 0.405 * std::cos(2.0), 1e-14);
    EXPECT_NEAR(p, 0.33148, 5e-5);
}

TEST(SuccessProbability, StaysInUnitInterval) {
    const NoiseModel noisy(0.7, 0.95);
    for (int i = 0; i < 2000; ++i) {
        const double theta = 0.0137 * i;
        for (std::int64_t n : {1, 3, 17, 1000}) {
            const double p = success_probability(theta, Circuit(n, 0.3 * i), noisy);
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
        }
    }
}

TEST(LogLikelihood, Examples) {
    EXPECT_DOUBLE_EQ(log_likelihood(MeasurementRecord(Circuit(1, 0.0), 1, 1.0), 0.0, NoiseModel()), 0.0);
    // p0 = 1/2 at theta = pi/2 with phi = 0.
    EXPECT_NEAR(log_likelihood(MeasurementRecord(Circuit(1, 0.0), 10, 5.0), kPi / 2, NoiseModel()),
                std::log(0.24609375), 1e-12);
    EXPECT_EQ(log_likelihood(MeasurementRecord(Circuit(1, 0.0), 10, 10.0), kPi, NoiseModel()),
              -std::numeric_limits<double>::infinity());
}

TEST(LogLikelihood, MatchesBinomialOracle) {
    const NoiseModel noise(0.9, 0.97);
    for (std::int64_t k = 0; k <= 25; ++k) {
        const MeasurementRecord r(Circuit(3, 0.4), 25, static_cast<double>(k));
        const long double p = 0.5L + 0.5L * 0.9L * std::pow(0.97L, 3.0L) * std::cos(3.0L * 1.3L + 0.4L);
        const double expected = static_cast<double>(std::log(oracle::binomial_pmf(25, k, p)));
        EXPECT_NEAR(log_likelihood(r, 1.3, noise), expected, 1e-10 * std::max(1.0, std::abs(expected)));
    }
}

TEST(SampleOutcome, Examples) {
    Rng rng(1);
    EXPECT_EQ(sample_outcome(Circuit(1, 0.0), 0, 0.4, NoiseModel(), rng), 0);
    EXPECT_EQ(sample_outcome(Circuit(1, 0.0), 17, 0.0, NoiseModel(), rng), 17);

    const NoiseModel noise(1.0, 0.9);
    const Circuit c(2, 0.0);
    const double p = success_probability(1.0, c, noise);
    const std::int64_t shots = 100000;
    const std::int64_t x = sample_outcome(c, shots, 1.0, noise, rng);
    const double se = std::sqrt(shots * p * (1 - p));
    EXPECT_LE(std::abs(static_cast<double>(x) - shots * p), 3 * se);
}

TEST(SampleOutcome, DeterministicUnderSeed) {
    Rng a(99), b(99);
    for (int i = 0; i < 50; ++i) {
        EXPECT_EQ(sample_outcome(Circuit(5, 0.2), 40, 2.0, NoiseModel(0.9, 0.99), a),
                  sample_outcome(Circuit(5, 0.2), 40, 2.0, NoiseModel(0.9, 0.99), b));
    }
}

TEST(SigmaSquared, Examples) {
    for (std::int64_t n : {1, 2, 7}) {
        const double theta = 0.3;
        const Circuit c(n, kPi / 2 - static_cast<double>(n) * theta);
        EXPECT_NEAR(sigma_squared(theta, c, 50, NoiseModel()), 1.0 / (n * n * 50.0), 1e-12);
    }
    const double theta = 0.2;
    const double v = sigma_squared(theta, Circuit(2, kPi / 2 - 2 * theta), 100, NoiseModel(1.0, 0.9));
    EXPECT_NEAR(v, 1.0 / (std::pow(0.9, 4) * 4 * 100), 1e-12);
    EXPECT_NEAR(v, 3.8104e-3, 1e-7);
    EXPECT_THROW(sigma_squared(0.0, Circuit(1, 0.0), 10, NoiseModel()), DivergenceError);
}

TEST(OptimalCircuit, Examples) {
    EXPECT_NEAR(optimal_depth_continuous(NoiseModel(1.0, 0.9)), -1.0 / (2 * std::log(0.9)), 1e-12);
    const Circuit c = optimal_circuit(NoiseModel(1.0, 0.9), 0.0, 1000000);
    EXPECT_EQ(c.depth(), 5);
    EXPECT_NEAR(wrap_angle(c.phase()), kPi / 2, 1e-12);
    EXPECT_EQ(optimal_circuit(NoiseModel(), 0.0, 777).depth(), 777);
}

// Scan sigma^2 * N_tot over real depths at the fringe optimum; the minimum is the floor formula.
TEST(OptimalCircuit, FloorMatchesContinuousScan) {
    const NoiseModel noise(1.0, 0.9);
    const double total = 1000.0;
    double best = std::numeric_limits<double>::infinity();
    for (double n = 0.5; n < 20.0; n += 1e-4) {
        const double alpha_beta = std::pow(0.9, n);
        best = std::min(best, 1.0 / (n * n * alpha_beta * alpha_beta * (total / n)));
    }
    EXPECT_NEAR(noisy_floor_variance(noise, total), best, 1e-9 * best);
    EXPECT_NEAR(noisy_floor_variance(noise, total), 5.728e-4, 1e-6);
    EXPECT_EQ(noisy_floor_variance(NoiseModel(), total), 0.0);
}

TEST(Angle, WrapAndDistance) {
    EXPECT_EQ(wrap_angle(-1e-300), 0.0);
    EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(wrapped_distance(0.1, kTwoPi - 0.1), 0.2, 1e-15);
    EXPECT_NEAR(signed_angle_difference(0.1, kTwoPi - 0.1), 0.2, 1e-15);
}

TEST(Invariants, FringeContrastBoundsAndComplement) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const NoiseModel noise(0.5 + 0.5 * u(rng), 0.8 + 0.2 * u(rng));
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 50);
        const double theta = kTwoPi * u(rng), phi = kTwoPi * u(rng);
        const double c = noise.contrast(static_cast<double>(n));
        const double p = success_probability(theta, Circuit(n, phi), noise);
        EXPECT_GE(p, (1 - c) / 2 - 1e-15);
        EXPECT_LE(p, (1 + c) / 2 + 1e-15);
        EXPECT_NEAR(p + success_probability(theta, Circuit(n, phi + kPi), noise), 1.0, 1e-14);
    }
}

TEST(Invariants, LikelihoodSumsToOneOverOutcomes) {
    for (std::int64_t shots : {1, 7, 31, 64}) {
        for (double theta : {0.0, 0.4, 2.0, kPi}) {
            const Circuit c(3, 0.25);
            const NoiseModel noise(0.85, 0.97);
            double total = 0.0;
            for (std::int64_t x = 0; x <= shots; ++x) {
                total += std::exp(log_likelihood(MeasurementRecord(c, shots, static_cast<double>(x)), theta, noise));
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(Invariants, NoiselessVarianceIndependentOfTheta) {
    double lo = INFINITY, hi = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double theta = kTwoPi * i / 1000.0;
        const Circuit c(4, kPi / 2 - 4 * theta);
        const double v = sigma_squared(theta, c, 30, NoiseModel());
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT((hi - lo) / lo, 1e-9);
}

TEST(Invariants, ContinuousOptimumScan) {
    const NoiseModel noise(1.0, 0.9);
    const double step = 1e-3;
    double best_n = 0.0, best = INFINITY;
    for (double n = 1.0; n <= 10.0 / -std::log(0.9); n += step) {
        const double v = sigma_squared_continuous(n, kPi / 2, 1000.0 / n, noise);
        if (v < best) {
            best = v;
            best_n = n;
        }
    }
    EXPECT_NEAR(best_n, optimal_depth_continuous(noise), step);
}
