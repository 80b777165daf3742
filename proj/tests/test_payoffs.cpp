/* Copyright 2026 The itosig Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ========================================================================= */

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "itosig/models.hpp"
#include "itosig/payoffs.hpp"
#include "oracles.hpp"

using namespace itosig;

namespace {

SamplePath pair_path(const std::vector<double>& x1, const std::vector<double>& x2) {
    std::vector<double> t;
    std::vector<double> v;
    for (std::size_t k = 0; k < x1.size(); ++k) {
        t.push_back(static_cast<double>(k));
        v.push_back(x1[k]);
        v.push_back(x2[k]);
    }
    return SamplePath(t, v, 2);
}

PayoffSpec spec(PayoffKind k, double strike, int i = 0, int j = 1) { return PayoffSpec{k, i, j, strike}; }

}  // namespace

TEST(RealizedStats, TwoIncrements) {
    auto const p = pair_path({0.0, 0.1, -0.1}, {0.0, 0.0, 0.0});
    auto const s = realized_stats(p, 0, 0);
    EXPECT_NEAR(s.rvar_i, 0.05, 1e-17);
    EXPECT_NEAR(s.rv_i, std::sqrt(0.05), 1e-16);
    EXPECT_THROW(realized_stats(p, 0, 1).corr(), std::domain_error);
    EXPECT_THROW(realized_stats(p, 0, 2), std::invalid_argument);
}

TEST(RealizedStats, IdenticalAssetsCorrelationOne) {
    auto const p = pair_path({0.0, 0.3, 0.1, 0.5}, {0.0, 0.3, 0.1, 0.5});
    EXPECT_DOUBLE_EQ(realized_stats(p, 0, 1).corr(), 1.0);
}

TEST(RealizedStats, CorrelationFromDefinition) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto const p = oracles::random_path(10, 2, rng, 0.1);
        auto const s = realized_stats(p, 0, 1);
        double a = 0, b = 0, c = 0;
        for (std::size_t k = 0; k < p.steps(); ++k) {
            a += p.increment(k, 0) * p.increment(k, 0);
            b += p.increment(k, 1) * p.increment(k, 1);
            c += p.increment(k, 0) * p.increment(k, 1);
        }
        EXPECT_NEAR(s.cov_ij, c, 1e-15);
        EXPECT_NEAR(s.corr(), c / (std::sqrt(a) * std::sqrt(b)), 1e-14);
        EXPECT_LE(std::abs(s.corr()), 1.0);
    }
}

TEST(RealizedStats, EqualsFollmerQuadraticVariation) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        auto const p = oracles::random_path(252, 2, rng, 0.01);
        auto const qv = quadratic_variation(p, 0.0);
        auto const s = realized_stats(p, 0, 1);
        EXPECT_EQ(s.rvar_i, qv.at(p.steps(), 0, 0));
        EXPECT_EQ(s.rvar_j, qv.at(p.steps(), 1, 1));
        EXPECT_EQ(s.cov_ij, qv.at(p.steps(), 0, 1));
    }
}

TEST(Strikes, MeanOfTrainingStatistic) {
    auto const a = pair_path({0.0, std::sqrt(0.02)}, {0.0, 1.0});
    auto const b = pair_path({0.0, std::sqrt(0.04)}, {0.0, 1.0});
    std::vector<PayoffSpec> specs{spec(PayoffKind::rv_swap, 0.0, 0, 0)};
    resolve_strikes(specs, {a, b});
    EXPECT_NEAR(specs[0].strike, 0.03, 1e-15);

    std::vector<PayoffSpec> all = standard_payoffs();
    auto const c = pair_path({0.0, 0.2, 0.1}, {0.0, -0.1, 0.3});
    resolve_strikes(all, {c, c, c});
    for (auto const& sp : all) {
        // the mean of three equal values may round by one ulp
        EXPECT_NEAR(evaluate(sp, c), 0.0, 1e-15);
    }
    std::vector<PayoffSpec> none;
    EXPECT_THROW(resolve_strikes(none, {}), std::invalid_argument);
}

TEST(Strikes, IndependentCorrelationNearZero) {
    Heston2Params p;
    p.assets[0] = HestonParams{100.0, 0.04, 0.0, 2.0, 0.04, 0.5, 0.0};
    p.assets[1] = HestonParams{80.0, 0.09, 0.0, 1.8, 0.09, 0.6, 0.0};
    SimGrid const grid{1.0, 252, 33};
    std::vector<SamplePath> logs;
    for (std::uint64_t i = 0; i < 500; ++i) {
        auto const sim = simulate_heston2(p, grid, i);
        std::vector<double> v;
        for (std::size_t k = 0; k < sim.path.points(); ++k) {
            v.push_back(std::log(sim.path.value(k, 0)));
            v.push_back(std::log(sim.path.value(k, 1)));
        }
        logs.emplace_back(grid.times(), v, 2);
    }
    std::vector<PayoffSpec> specs{spec(PayoffKind::corr_swap, 0.0)};
    resolve_strikes(specs, logs);
    // the sample correlation of 252 independent increments has sd about 1/sqrt(252)
    EXPECT_LT(std::abs(specs[0].strike), 3.0 / std::sqrt(252.0) / std::sqrt(500.0));
}

TEST(Evaluate, SwapAndCall) {
    auto const p = pair_path({0.0, 0.1, -0.1}, {0.0, 0.2, 0.0});
    auto const rvar = realized_stats(p, 0, 0).rvar_i;
    EXPECT_NEAR(evaluate(spec(PayoffKind::rv_swap, 0.03, 0, 0), p), 0.02, 1e-15);
    EXPECT_NEAR(evaluate(spec(PayoffKind::cov_call, -1.0), p), realized_stats(p, 0, 1).cov_ij + 1.0, 1e-15);
    EXPECT_EQ(evaluate(spec(PayoffKind::rv_call, 1.0, 0, 0), p), 0.0);
    EXPECT_EQ(evaluate(spec(PayoffKind::rv_swap, rvar, 0, 0), p), 0.0);
    EXPECT_EQ(evaluate(spec(PayoffKind::rv_call, std::sqrt(rvar), 0, 0), p), 0.0);
    EXPECT_THROW(evaluate(spec(PayoffKind::rv_swap, NAN, 0, 0), p), std::invalid_argument);
}

TEST(Evaluate, CallIsPositivePartOfSwap) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> k(-0.5, 0.5);
    PayoffKind const pairs[][2] = {{PayoffKind::rv_swap, PayoffKind::rv_call},
                                   {PayoffKind::cov_swap, PayoffKind::cov_call},
                                   {PayoffKind::corr_swap, PayoffKind::corr_call}};
    for (int trial = 0; trial < 50; ++trial) {
        auto const p = oracles::random_path(8, 2, rng, 0.2);
        double const strike = k(rng);
        auto const s = realized_stats(p, 0, 1);
        for (auto const& pr : pairs) {
            auto const sw = spec(pr[0], strike);
            auto const ca = spec(pr[1], strike);
            double const stat_sw = statistic(sw, s);
            double const stat_ca = statistic(ca, s);
            EXPECT_EQ(evaluate(ca, s), std::max(stat_ca - strike, 0.0));
            EXPECT_EQ(evaluate(sw, s), stat_sw - strike);
        }
    }
}

TEST(PayoffCsv, Layout) {
    auto const p = pair_path({0.0, 0.1, -0.1}, {0.0, 0.2, 0.0});
    std::stringstream ss;
    write_payoff_csv(ss, standard_payoffs(), {p});
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "path_id,payoff_kind,value");
    std::getline(ss, line);
    EXPECT_EQ(line.rfind("0,RVswap1,", 0), 0u);
    int rows = 1;
    while (std::getline(ss, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 8);
}
