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

#include "itosig/io.hpp"
#include "itosig/signature.hpp"
#include "oracles.hpp"

using namespace itosig;

namespace {

SamplePath three_point() { return SamplePath({0.0, 0.5, 1.0}, {0.0, 1.0, 3.0}, 1); }

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

double max_rel_diff(const SigTrajectory& a, const SigTrajectory& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.points(); ++k) {
        auto const ra = a.row(k);
        auto const rb = b.row(k);
        for (std::size_t i = 0; i < ra.size(); ++i) {
            worst = std::max(worst, rel_err(ra[i], rb[i]));
        }
    }
    return worst;
}

}  // namespace

TEST(SamplePath, Validation) {
    EXPECT_THROW(SamplePath({0.0, 0.0}, {1.0, 2.0}, 1), std::invalid_argument);
    EXPECT_THROW(SamplePath({0.0, 1.0}, {1.0}, 1), std::invalid_argument);
    EXPECT_THROW(SamplePath({0.0, 1.0}, {1.0, NAN}, 1), std::invalid_argument);
    EXPECT_THROW(SamplePath({}, {}, 1), std::invalid_argument);
}

TEST(QuadraticVariation, Examples) {
    auto const p = three_point();
    EXPECT_DOUBLE_EQ(quadratic_variation(p, 0.0).at(2, 0, 0), 5.0);
    EXPECT_EQ(quadratic_variation(p, 0.5).at(2, 0, 0), 0.0);
    EXPECT_DOUBLE_EQ(quadratic_variation(p, 1.0).at(2, 0, 0), -5.0);
    EXPECT_THROW(quadratic_variation(p, 1.5), std::invalid_argument);
}

TEST(QuadraticVariation, SymmetricMonotoneStartsAtZero) {
    std::mt19937_64 rng(2);
    auto const p = oracles::random_path(30, 3, rng);
    auto const qv = quadratic_variation(p, 0.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_EQ(qv.at(0, i, j), 0.0);
            for (std::size_t k = 0; k < qv.points(); ++k) {
                EXPECT_EQ(qv.at(k, i, j), qv.at(k, j, i));
            }
        }
        for (std::size_t k = 1; k < qv.points(); ++k) {
            EXPECT_GE(qv.at(k, i, i), qv.at(k - 1, i, i));
        }
    }
}

TEST(AugmentPath, Examples) {
    std::mt19937_64 rng(4);
    auto const p2 = oracles::random_path(5, 2, rng);
    auto const full = augment_path(p2, 0.0, true, true);
    EXPECT_EQ(full.dim(), 6);
    EXPECT_EQ(full.alphabet(), Alphabet(2, true, true));
    for (std::size_t k = 0; k < full.points(); ++k) {
        EXPECT_EQ(full.value(k, 0), p2.times()[k]);
    }

    auto const strat = augment_path(p2, 0.5, false, true);
    for (std::size_t k = 0; k < strat.points(); ++k) {
        for (int c = 2; c < 5; ++c) {
            EXPECT_EQ(strat.value(k, c), 0.0);
        }
    }

    auto const one = augment_path(three_point(), 0.0, true, true);
    ASSERT_EQ(one.dim(), 3);
    EXPECT_EQ(one.value(0, 2), 0.0);
    EXPECT_EQ(one.value(1, 2), 1.0);
    EXPECT_EQ(one.value(2, 2), 5.0);
    EXPECT_THROW(augment_path(one, 0.0, true, true), std::invalid_argument);
}

TEST(AugmentPath, BracketConventions) {
    auto const p = three_point();
    EXPECT_EQ(augment_path(p, 1.0, false, true).value(2, 1), 5.0);
    EXPECT_EQ(augment_path(p, 1.0, false, true, BracketConvention::scaled).value(2, 1), -5.0);
    EXPECT_EQ(augment_path(p, 0.25, false, true, BracketConvention::scaled).value(2, 1), 2.5);
}

TEST(GammaSignature, ThreePointExample) {
    auto const p = three_point();
    double const expected[] = {2.0, 4.5, 7.0};
    double const gammas[] = {0.0, 0.5, 1.0};
    for (int g = 0; g < 3; ++g) {
        auto const s = gamma_signature(p, gammas[g], 2);
        EXPECT_DOUBLE_EQ(s.coeff(2, Word{0}), 3.0);
        EXPECT_DOUBLE_EQ(s.coeff(2, Word{0, 0}), expected[g]);
    }
}

TEST(GammaSignature, LinearPathFactorials) {
    std::size_t const n = 1000;
    std::vector<double> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        t[k] = static_cast<double>(k) / n;
    }
    SamplePath const line(t, t, 1);
    for (double gamma : {0.0, 0.25, 0.5, 1.0}) {
        auto const s = gamma_signature(line, gamma, 4);
        double fact = 1.0;
        for (int m = 1; m <= 4; ++m) {
            fact *= m;
            EXPECT_NEAR(s.coeff(n, Word(std::vector<Letter>(static_cast<std::size_t>(m), 0))), 1.0 / fact, 2.0 / n);
        }
    }
}

TEST(GammaSignature, UnitStartAndLevelOne) {
    std::mt19937_64 rng(8);
    auto const p = oracles::random_path(20, 3, rng);
    auto const s = gamma_signature(p, 0.3, 3);
    EXPECT_EQ(s.at(0), TensorPoly<double>::unit(p.alphabet(), 3));
    for (std::size_t k = 0; k < s.points(); ++k) {
        EXPECT_EQ(s.coeff(k, Word{}), 1.0);
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(s.coeff(k, Word{static_cast<Letter>(c)}), p.value(k, c) - p.value(0, c), 1e-14);
        }
    }
}

TEST(GammaSignature, LevelZeroIsUnitTrajectory) {
    auto const s = gamma_signature(three_point(), 0.0, 0);
    ASSERT_EQ(s.points(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(s.row(k).size(), 1u);
        EXPECT_EQ(s.row(k)[0], 1.0);
    }
}

TEST(GammaSignature, ItoMatchesTupleSums) {
    std::mt19937_64 rng(9);
    auto const p = oracles::random_path(12, 2, rng);
    auto const s = gamma_signature(p, 0.0, 3);
    for (auto const& w : enumerate_words(p.alphabet(), 3)) {
        EXPECT_NEAR(s.coeff(p.points() - 1, w), oracles::ito_tuple_sum(p, w), 1e-12) << to_string(w);
    }
}

TEST(GammaSignature, MatchesPerWordRecursion) {
    std::mt19937_64 rng(10);
    auto const p = oracles::random_path(15, 2, rng);
    for (double gamma : {0.0, 0.25, 0.5, 1.0}) {
        auto const s = gamma_signature(p, gamma, 4);
        for (auto const& w : enumerate_words(p.alphabet(), 4)) {
            EXPECT_LT(rel_err(s.coeff(p.points() - 1, w), oracles::iterated_sum(p, gamma, w)), 1e-12);
        }
    }
}

TEST(GammaSignature, ChenOracle) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> steps(1, 50);
    std::uniform_int_distribution<int> dims(1, 3);
    std::uniform_int_distribution<int> levels(1, 4);
    double const gammas[] = {0.0, 0.25, 0.5, 1.0};
    for (int trial = 0; trial < 40; ++trial) {
        auto const p = oracles::random_path(static_cast<std::size_t>(steps(rng)), dims(rng), rng, 0.3);
        double const g = gammas[trial % 4];
        int const N = levels(rng);
        EXPECT_LT(max_rel_diff(gamma_signature(p, g, N), gamma_signature_chen(p, g, N)), 1e-10);
    }
}

TEST(GammaSignature, SingleStepEqualsStepElement) {
    SamplePath const p({0.0, 1.0}, {0.0, 0.0, 2.0, -1.0}, 2);
    auto const s = gamma_signature(p, 0.5, 3);
    // g = exp-like element with γ^{m-1} ΔX^{⊗m}
    EXPECT_DOUBLE_EQ(s.coeff(1, Word{0, 1}), 0.5 * 2.0 * -1.0);
    EXPECT_DOUBLE_EQ(s.coeff(1, Word{1, 1, 1}), 0.25 * -1.0);
    EXPECT_DOUBLE_EQ(s.coeff(1, Word{0, 0, 1}), 0.25 * 4.0 * -1.0);
}

TEST(GammaSignature, StratMinusItoIsHalfQV) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        auto const p = oracles::random_path(40, 3, rng);
        auto const ito = gamma_signature(p, 0.0, 2);
        auto const strat = gamma_signature(p, 0.5, 2);
        auto const back = gamma_signature(p, 1.0, 2);
        auto const qv = quadratic_variation(p, 0.0);
        for (std::size_t k = 0; k < p.points(); ++k) {
            for (Letter i = 0; i < 3; ++i) {
                for (Letter j = 0; j < 3; ++j) {
                    double const q = qv.at(k, i, j);
                    double const scale = 1.0 + std::abs(q);
                    EXPECT_NEAR(strat.coeff(k, Word{i, j}) - ito.coeff(k, Word{i, j}), 0.5 * q, 1e-12 * scale);
                    EXPECT_NEAR(back.coeff(k, Word{i, j}) - ito.coeff(k, Word{i, j}), q, 1e-12 * scale);
                }
            }
        }
    }
}

TEST(GammaSignature, DegreeTwoShuffleAndQuasiShuffle) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        auto const base = oracles::random_path(40, 2, rng);
        auto const strat = gamma_signature(augment_path(base, 0.5, true, false), 0.5, 2);
        auto const xhat = augment_path(base, 0.0, true, true);
        auto const ito = gamma_signature(xhat, 0.0, 2);
        auto const& a = xhat.alphabet();
        for (std::size_t k = 0; k < base.points(); ++k) {
            for (int i = 1; i <= 2; ++i) {
                for (int j = 1; j <= 2; ++j) {
                    Letter const li = a.path(i);
                    Letter const lj = a.path(j);
                    double const lhs_s = strat.coeff(k, Word{li}) * strat.coeff(k, Word{lj});
                    double const rhs_s = strat.coeff(k, Word{li, lj}) + strat.coeff(k, Word{lj, li});
                    EXPECT_NEAR(lhs_s, rhs_s, 1e-12 * (1.0 + std::abs(lhs_s)));
                    double const lhs_i = ito.coeff(k, Word{li}) * ito.coeff(k, Word{lj});
                    double const rhs_i =
                        ito.coeff(k, Word{li, lj}) + ito.coeff(k, Word{lj, li}) + ito.coeff(k, Word{*a.bracket(i, j)});
                    EXPECT_NEAR(lhs_i, rhs_i, 1e-12 * (1.0 + std::abs(lhs_i)));
                }
            }
        }
    }
}

TEST(SigIncrement, Examples) {
    std::mt19937_64 rng(15);
    auto const p = oracles::random_path(10, 2, rng);
    auto const s = gamma_signature(p, 0.0, 3);
    auto const unit = TensorPoly<double>::unit(p.alphabet(), 3);
    auto const same = sig_increment(s, 4, 4);
    for (auto const& w : enumerate_words(p.alphabet(), 3)) {
        EXPECT_NEAR(same.coeff(w), unit.coeff(w), 1e-13);
        EXPECT_NEAR(sig_increment(s, 0, 7).coeff(w), s.coeff(7, w), 1e-13);
    }
    auto const sub = gamma_signature(p.slice(3, 8), 0.0, 3);
    auto const inc = sig_increment(s, 3, 8);
    for (auto const& w : enumerate_words(p.alphabet(), 3)) {
        EXPECT_NEAR(inc.coeff(w), sub.coeff(5, w), 1e-12 * (1.0 + std::abs(sub.coeff(5, w))));
    }
    EXPECT_THROW(sig_increment(s, 5, 4), std::invalid_argument);
}

TEST(GammaSignature, ChenExactness) {
    std::mt19937_64 rng(16);
    for (double gamma : {0.0, 0.5, 0.75}) {
        auto const p = oracles::random_path(16, 2, rng, 0.5);
        auto const full = gamma_signature(p, gamma, 4);
        for (std::size_t s = 0; s < p.points(); ++s) {
            auto const tail = gamma_signature(p.slice(s, p.steps()), gamma, 4);
            auto const joined = concat(full.at(s), tail.end());
            for (auto const& w : enumerate_words(p.alphabet(), 4)) {
                double const ref = full.coeff(p.steps(), w);
                EXPECT_NEAR(joined.coeff(w), ref, 1e-12 * std::max(1.0, std::abs(ref)));
            }
        }
    }
}

TEST(PVariation, Examples) {
    SamplePath const mono({0, 1, 2, 3}, {0.0, 0.5, 0.7, 2.0}, 1);
    EXPECT_DOUBLE_EQ(grid_p_variation(mono, 1.0), 2.0);
    SamplePath const tent({0, 1, 2}, {0.0, 1.0, 0.0}, 1);
    EXPECT_DOUBLE_EQ(grid_p_variation(tent, 2.0), std::sqrt(2.0));
    EXPECT_THROW(grid_p_variation(tent, 0.5), std::invalid_argument);
}

TEST(PVariation, MatchesSubsetSearch) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        auto const p = oracles::random_path(11, trial % 2 + 1, rng);
        EXPECT_NEAR(grid_p_variation(p, 2.5), oracles::p_variation_bruteforce(p, 2.5), 1e-12);
    }
}

TEST(FeatureMatrix, Examples) {
    auto const s = gamma_signature(three_point(), 0.0, 2);
    auto const X = feature_matrix({s}, {Word{}, Word{0}, Word{0, 0}}, true);
    ASSERT_EQ(X.rows(), 1);
    EXPECT_EQ(X(0, 0), 1.0);
    EXPECT_EQ(X(0, 1), 3.0);
    EXPECT_EQ(X(0, 2), 2.0);

    auto const all = feature_matrix({s, s}, {Word{}, Word{0}}, false);
    ASSERT_EQ(all.rows(), 6);
    EXPECT_EQ(all.col(0).sum(), 6.0);
    EXPECT_EQ(all(1, 1), 1.0);
    EXPECT_EQ(all(5, 1), 3.0);
    EXPECT_THROW(feature_matrix({s}, {Word{0, 0, 0}}, true), std::invalid_argument);
}

TEST(FunctionalMatrix, PairsEachRow) {
    std::mt19937_64 rng(18);
    auto const p = oracles::random_path(6, 2, rng);
    auto const s = gamma_signature(p, 0.0, 2);
    TensorPoly<double> f(p.alphabet(), 2);
    f.add(Word{0, 1}, 2.0).add(Word{1}, -1.0);
    auto const X = functional_matrix(s, {f}, 1);
    ASSERT_EQ(X.rows(), 6);
    for (std::size_t k = 1; k < p.points(); ++k) {
        EXPECT_DOUBLE_EQ(X(static_cast<Eigen::Index>(k - 1), 0), pair(f, s.at(k)));
    }
}

TEST(Io, PathCsvRoundTrip) {
    std::mt19937_64 rng(19);
    auto const p = oracles::random_path(7, 2, rng);
    std::stringstream ss;
    ss << "# comment\n";
    write_path_csv(ss, p);
    auto const q = read_path_csv(ss);
    ASSERT_EQ(q.points(), p.points());
    for (std::size_t k = 0; k < p.points(); ++k) {
        EXPECT_EQ(q.times()[k], p.times()[k]);
        EXPECT_EQ(q.value(k, 1), p.value(k, 1));
    }
    std::stringstream bad("t,y1\n0,1\n");
    EXPECT_THROW(read_path_csv(bad), std::invalid_argument);
}

TEST(Io, SignatureCsvLayout) {
    std::stringstream ss;
    write_signature_csv(ss, gamma_signature(three_point(), 0.0, 2));
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "t,word,coeff");
    std::getline(ss, line);
    EXPECT_EQ(line, "0,,1");
    std::vector<std::string> rest;
    while (std::getline(ss, line)) {
        rest.push_back(line);
    }
    ASSERT_EQ(rest.size(), 8u);
    EXPECT_EQ(rest.back(), "1,0.0,2");
}
