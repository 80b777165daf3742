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

#include <gtest/gtest.h>

#include "itosig/regress.hpp"
#include "oracles.hpp"

using namespace itosig;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = z(rng);
        }
    }
    return m;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng).col(0); }

}  // namespace

TEST(Mse, Examples) {
    Eigen::VectorXd a(4);
    a << 1, 2, 3, 4;
    EXPECT_EQ(mse(a, a), 0.0);
    EXPECT_EQ(mse(a, a.array() - 1.0), 1.0);
    Eigen::VectorXd p(2), t(2);
    p << 3, 4;
    t << 0, 0;
    EXPECT_EQ(mse(p, t), 12.5);
    EXPECT_THROW(mse(p, a), std::invalid_argument);
}

TEST(Lasso, LeastSquaresAtZeroPenalty) {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 3, 0.5;
    LassoOptions opts;
    opts.pin_intercept = false;
    auto const fit = lasso_fit(X, y, 0.0, opts);
    EXPECT_NEAR(fit.coeffs(0), 3.0, 1e-12);
    EXPECT_NEAR(fit.coeffs(1), 0.5, 1e-12);
    EXPECT_TRUE(fit.diagnostics.converged);
}

TEST(Lasso, OrthonormalSoftThreshold) {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 3, 0.5;
    LassoOptions opts;
    opts.pin_intercept = false;
    // minimizer of Σ(β_j - y_j)² + |β|₁: β_j = sign(y_j) max(|y_j| - 1/2, 0)
    auto const fit = lasso_fit(X, y, 1.0, opts);
    EXPECT_NEAR(fit.coeffs(0), 2.5, 1e-12);
    EXPECT_EQ(fit.coeffs(1), 0.0);
    auto const fit2 = lasso_fit(X, y, 0.5, opts);
    EXPECT_NEAR(fit2.coeffs(0), 2.75, 1e-12);
    EXPECT_NEAR(fit2.coeffs(1), 0.25, 1e-12);

    // Random orthonormal design: β_j = sign(z_j) max(|z_j| - α/2, 0), z = Qᵀy.
    std::mt19937_64 rng(21);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(30, 6, rng));
    Eigen::MatrixXd const Q = qr.householderQ() * Eigen::MatrixXd::Identity(30, 6);
    Eigen::VectorXd const yy = random_vector(30, rng);
    double const alpha = 1.3;
    auto const f = lasso_fit(Q, yy, alpha, opts);
    Eigen::VectorXd const z = Q.transpose() * yy;
    for (Eigen::Index j = 0; j < 6; ++j) {
        double const expect = std::copysign(std::max(std::abs(z(j)) - alpha / 2.0, 0.0), z(j));
        EXPECT_NEAR(f.coeffs(j), expect, 1e-9);
    }
}

TEST(Lasso, ZeroTargetGivesZeroCoefficients) {
    std::mt19937_64 rng(22);
    auto const X = random_matrix(20, 4, rng);
    for (double alpha : {0.0, 0.1, 10.0}) {
        auto const fit = lasso_fit(X, Eigen::VectorXd::Zero(20), alpha);
        EXPECT_EQ(fit.coeffs.norm(), 0.0);
    }
}

TEST(Lasso, PinnedOffsetIsNotFitted) {
    std::mt19937_64 rng(23);
    auto const X = random_matrix(25, 3, rng);
    Eigen::VectorXd const beta = random_vector(3, rng);
    Eigen::VectorXd const y = (X * beta).array() + 5.0;
    LassoOptions opts;
    opts.offset = 5.0;
    auto const fit = lasso_fit(X, y, 0.0, opts);
    EXPECT_NEAR((fit.coeffs - beta).norm(), 0.0, 1e-9);
    EXPECT_NEAR(predict(fit, Eigen::MatrixXd::Zero(2, 3))(0), 5.0, 0.0);
}

TEST(Lasso, AllZeroColumnIsPinned) {
    std::mt19937_64 rng(24);
    Eigen::MatrixXd X = random_matrix(10, 3, rng);
    X.col(1).setZero();
    auto const fit = lasso_fit(X, random_vector(10, rng), 0.01);
    EXPECT_EQ(fit.coeffs(1), 0.0);
}

TEST(Lasso, RejectsNonFinite) {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 1, NAN;
    EXPECT_THROW(lasso_fit(X, y, 0.1), std::invalid_argument);
    EXPECT_THROW(lasso_fit(X, Eigen::VectorXd::Zero(3), 0.1), std::invalid_argument);
    EXPECT_THROW(lasso_fit(X, Eigen::VectorXd::Zero(2), -1.0), std::invalid_argument);
}

TEST(Lasso, StationarityAndMonotoneObjective) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 5; ++trial) {
        auto const X = random_matrix(40, 8, rng);
        Eigen::VectorXd beta = random_vector(8, rng);
        beta(2) = 0.0;
        beta(5) = 0.0;
        Eigen::VectorXd const y = X * beta + 0.1 * random_vector(40, rng);
        double const alpha = 2.0;
        std::vector<double> trace;
        LassoOptions opts;
        opts.pin_intercept = false;
        opts.objective_trace = &trace;
        auto const fit = lasso_fit(X, y, alpha, opts);
        ASSERT_TRUE(fit.diagnostics.converged);
        for (std::size_t i = 1; i < trace.size(); ++i) {
            EXPECT_LE(trace[i], trace[i - 1] + 1e-12 * std::abs(trace[i - 1]));
        }
        Eigen::VectorXd const r = y - X * fit.coeffs;
        for (Eigen::Index j = 0; j < 8; ++j) {
            double const colsq = X.col(j).squaredNorm();
            double const corr = X.col(j).dot(r);
            double const tol = 10.0 * opts.tol * colsq + 1e-9;
            if (fit.coeffs(j) != 0.0) {
                EXPECT_NEAR(corr, alpha / 2.0 * (fit.coeffs(j) > 0 ? 1.0 : -1.0), tol);
            } else {
                EXPECT_LE(std::abs(corr), alpha / 2.0 + tol);
            }
        }
    }
}

TEST(Lasso, StandardizedMatchesRawAtZeroPenalty) {
    std::mt19937_64 rng(26);
    Eigen::MatrixXd X = random_matrix(30, 4, rng);
    X.col(0) *= 1e-3;
    X.col(3) *= 50.0;
    Eigen::VectorXd const y = random_vector(30, rng);
    LassoOptions opts;
    opts.pin_intercept = false;
    opts.standardize = true;
    auto const a = lasso_fit(X, y, 0.0, opts);
    Eigen::VectorXd const ls = oracles::least_squares_qr(X, y);
    EXPECT_LT((a.coeffs - ls).norm() / ls.norm(), 1e-8);
    EXPECT_TRUE(a.standardized);
}

TEST(Ridge, HandNormalEquations) {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 1, 2;
    // (I/2 + I/2) ℓ = y/2
    auto const fit = ridge_fit(X, y, 0.5);
    EXPECT_NEAR(fit.coeffs(0), 0.5, 1e-15);
    EXPECT_NEAR(fit.coeffs(1), 1.0, 1e-15);
    // (I/2 + I) ℓ = y/2
    auto const fit1 = ridge_fit(X, y, 1.0);
    EXPECT_NEAR(fit1.coeffs(0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(fit1.coeffs(1), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(fit.kind, ObjectiveKind::ridge_mean);
}

TEST(Ridge, ShrinksMonotonically) {
    std::mt19937_64 rng(27);
    auto const X = random_matrix(50, 5, rng);
    auto const y = random_vector(50, rng);
    double prev = INFINITY;
    for (double alpha : {1.0, 10.0, 100.0}) {
        double const n = ridge_fit(X, y, alpha).coeffs.norm();
        EXPECT_LT(n, prev);
        prev = n;
    }
}

TEST(Ridge, RecoversExactCoefficients) {
    std::mt19937_64 rng(28);
    auto const X = random_matrix(40, 5, rng);
    auto const beta = random_vector(5, rng);
    auto const fit = ridge_fit(X, X * beta, 1e-12);
    EXPECT_LT((fit.coeffs - beta).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Ridge, NormalEquationResidual) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd X = random_matrix(60, 10, rng);
        X.col(3) *= 1e-4;
        auto const y = random_vector(60, rng);
        double const alpha = 1e-6;
        auto const fit = ridge_fit(X, y, alpha);
        double const n = 60.0;
        Eigen::MatrixXd A = X.transpose() * X / n;
        A.diagonal().array() += alpha;
        Eigen::VectorXd const b = X.transpose() * y / n;
        double const scale = A.cwiseAbs().maxCoeff() * fit.coeffs.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
        EXPECT_LE((A * fit.coeffs - b).cwiseAbs().maxCoeff(), 1e-10 * scale);
    }
}

TEST(Ridge, SingularAtZeroPenalty) {
    Eigen::MatrixXd X(3, 2);
    X << 1, 2, 2, 4, 3, 6;
    EXPECT_THROW(ridge_fit(X, Eigen::VectorXd::Ones(3), 0.0), std::domain_error);
    EXPECT_NO_THROW(ridge_fit(X, Eigen::VectorXd::Ones(3), 1e-3));
}

TEST(Ridge, MatchesQrAtTinyPenalty) {
    std::mt19937_64 rng(30);
    auto const X = random_matrix(80, 6, rng);
    auto const y = random_vector(80, rng);
    auto const fit = ridge_fit(X, y, 0.0);
    auto const ref = oracles::least_squares_qr(X, y);
    EXPECT_LT((predict(fit, X) - X * ref).norm() / (X * ref).norm(), 1e-8);
}

TEST(Predict, Examples) {
    RegressionFit fit;
    fit.coeffs = Eigen::VectorXd::Zero(3);
    fit.offset = 2.5;
    fit.pinned_intercept = true;
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(4, 3);
    EXPECT_EQ(predict(fit, X), Eigen::VectorXd::Constant(4, 2.5));
    fit.pinned_intercept = false;
    fit.coeffs(1) = 1.0;
    EXPECT_EQ(predict(fit, X), X.col(1));
    EXPECT_THROW(predict(fit, Eigen::MatrixXd::Zero(2, 2)), std::invalid_argument);

    Eigen::MatrixXd S(2, 2);
    S << 2, 1, 1, 3;
    Eigen::VectorXd y(2);
    y << 1, -1;
    LassoOptions opts;
    opts.pin_intercept = false;
    EXPECT_LT((predict(lasso_fit(S, y, 0.0, opts), S) - y).norm(), 1e-9);
}

TEST(FitJson, Fields) {
    auto const fit = ridge_fit(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2), 0.1, {"", "1.2"});
    auto const j = to_json(fit);
    EXPECT_EQ(j.at("objective_kind"), "ridge-mean");
    EXPECT_EQ(j.at("words")[1], "1.2");
    EXPECT_EQ(j.at("coefficients").size(), 2u);
    EXPECT_TRUE(j.at("diagnostics").at("converged").get<bool>());
    EXPECT_THROW(ridge_fit(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2), 0.1, {"a"}),
                 std::invalid_argument);
}
