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

#include "qpelab/angle.hpp"
#include "qpelab/bounds.hpp"
#include "qpelab/errors.hpp"

using namespace qpelab;

namespace {

BoundParams params(std::int64_t total, double p = 3.0, double beta = 1.0) {
    BoundParams b;
    b.total_resources = total;
    b.exponent = p;
    b.noise = NoiseModel(1.0, beta);
    return b;
}

}  // namespace

TEST(BoundSchedule, DoublingUpToCap) {
    EXPECT_EQ(bound_depth_schedule(NoiseModel(1.0, 0.9), 1 << 20), (std::vector<std::int64_t>{1, 2, 4, 5}));
    EXPECT_EQ(bound_depth_schedule(NoiseModel(), 8), (std::vector<std::int64_t>{1, 2, 4, 8}));
}

// Two steps: depths 1 and 2, no middle terms, and a last-step precision from the resource identity.
TEST(AppendixBound, TwoStepChainByHand) {
    const std::int64_t total = 4096;
    const double eps1 = std::pow(1.0 / total, 3);
    const double nu1 = 32 / (kPi * kPi) * std::log(2 / eps1);
    const double nu2 = (total - nu1) / 2;
    const double precision = 8.0 * 4 / (kPi * kPi) * std::log(2 / eps1) + 4 * nu2;
    const double want = 1.5 * kPi * eps1 + std::sqrt(2 / (kPi * precision));
    const BoundBreakdown b = loss_bound_for_steps(params(total), 2, LossKind::kAbsolute);
    EXPECT_NEAR(b.value, want, 1e-12 * want);
    EXPECT_NEAR(b.shots[0], nu1, 1e-9);
    EXPECT_NEAR(b.shots[1], nu2, 1e-9);
}

TEST(AppendixBound, HeisenbergRatioAtLadderTop) {
    for (std::int64_t n = 1 << 14; n <= 1 << 18; n *= 2) {
        const double ratio = appendix_loss_bound(params(2 * n), LossKind::kAbsolute) /
                             appendix_loss_bound(params(n), LossKind::kAbsolute);
        EXPECT_NEAR(ratio, 0.5, 0.05) << n;
        const double sq = appendix_loss_bound(params(2 * n), LossKind::kSquared) /
                          appendix_loss_bound(params(n), LossKind::kSquared);
        EXPECT_NEAR(sq, 0.25, 0.025) << n;
    }
}

TEST(AppendixBound, ConstantEpsilonPlateaus) {
    BoundParams b = params(1 << 16, 0.0);
    b.epsilon_scale = 0.01;
    const double at16 = appendix_loss_bound(b, LossKind::kAbsolute);
    b.total_resources = 1 << 20;
    const double at20 = appendix_loss_bound(b, LossKind::kAbsolute);
    EXPECT_NEAR(at20, 1.5 * kPi * 0.01, 0.02 * 1.5 * kPi * 0.01);
    EXPECT_NEAR(at20 / at16, 1.0, 0.05);
}

TEST(AppendixBound, NoisyRatioIsStandardQuantumLimit) {
    for (std::int64_t n = 1 << 14; n <= 1 << 18; n *= 2) {
        const double ratio = appendix_loss_bound(params(2 * n, 3.0, 0.9), LossKind::kAbsolute) /
                             appendix_loss_bound(params(n, 3.0, 0.9), LossKind::kAbsolute);
        EXPECT_NEAR(ratio, 1 / std::sqrt(2.0), 0.0707) << n;
    }
}

TEST(AppendixBound, InfeasibleAndInvalid) {
    EXPECT_THROW(appendix_loss_bound(params(32), LossKind::kAbsolute), InfeasibleChain);
    BoundParams b = params(1 << 12);
    b.step_count = 1;
    EXPECT_THROW(appendix_loss_bound(b, LossKind::kAbsolute), InvalidArgument);
    b.step_count = 40;
    EXPECT_THROW(appendix_loss_bound(b, LossKind::kAbsolute), InvalidArgument);
    b.step_count = 3;
    EXPECT_EQ(appendix_loss_bound_detail(b, LossKind::kAbsolute).step_count, 3);
}

TEST(AppendixBound, ChosenChainIsTheMinimum) {
    const BoundParams b = params(1 << 15);
    const BoundBreakdown best = appendix_loss_bound_detail(b, LossKind::kAbsolute);
    for (int m = 2; m <= 21; ++m) {
        try {
            EXPECT_GE(loss_bound_for_steps(b, m, LossKind::kAbsolute).value, best.value);
        } catch (const InfeasibleChain&) {
        }
    }
    EXPECT_LE(best.value, kPi);
}

TEST(AppendixBound, MonotoneInBudgetAndAboveLastStepVariance) {
    for (double beta : {1.0, 0.9}) {
        double previous = INFINITY;
        for (std::int64_t n = 64; n <= 1 << 20; n *= 2) {
            BoundParams b = params(n, 3.0, beta);
            double mae = 0.0;
            try {
                mae = appendix_loss_bound(b, LossKind::kAbsolute);
            } catch (const InfeasibleChain&) {
                continue;
            }
            EXPECT_LE(mae, previous + 1e-15) << n;
            previous = mae;
            const BoundBreakdown mse = appendix_loss_bound_detail(b, LossKind::kSquared);
            EXPECT_LE(mse.value, kPi * kPi);
            EXPECT_GE(mse.value, std::min(mse.sigma_squared, kPi * kPi));
        }
    }
}
