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

// Penalized least squares on signature features.
//
// lasso_fit minimizes the unnormalized objective
//     Σ_i (offset + x_i·β - y_i)² + α ‖β‖₁
// with no ½ in front of the quadratic term, so the soft-threshold level in the
// coordinate update is α/2 (most libraries scale their α differently). The
// offset is fixed by the caller and is neither fitted nor penalized.
//
// ridge_fit minimizes the mean-squared objective
//     (1/N) Σ_i (y_i - x_i·β)² + α ‖β‖₂²
// by solving (XᵀX/N + αI) β = Xᵀy/N.

#ifndef ITOSIG_REGRESS_HPP
#define ITOSIG_REGRESS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace itosig {

enum class ObjectiveKind { lasso_sum, ridge_mean };

inline const char* to_string(ObjectiveKind k) { return k == ObjectiveKind::lasso_sum ? "lasso-sum" : "ridge-mean"; }

struct FitDiagnostics {
    double in_sample_mse = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct RegressionFit {
    std::vector<std::string> words;
    Eigen::VectorXd coeffs;
    double offset = 0.0;
    bool pinned_intercept = false;
    double alpha = 0.0;
    ObjectiveKind kind = ObjectiveKind::lasso_sum;
    bool standardized = false;
    FitDiagnostics diagnostics;
};

struct LassoOptions {
    int max_iter = 1000000;
    double tol = 1e-10;
    double offset = 0.0;
    bool pin_intercept = true;
    bool standardize = false;
    // Soft-threshold level as a multiple of alpha. 0.5 matches the objective
    // above; anything else solves a different problem (used as a fault
    // injection by the check runner).
    double threshold_factor = 0.5;
    std::vector<double>* objective_trace = nullptr;
    std::vector<std::string> words;
};

namespace detail {
inline void require_finite(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const char* who) {
    if (X.rows() != y.size()) {
        throw std::invalid_argument(std::string(who) + ": row count of X and length of y differ");
    }
    if (X.rows() < 1) {
        throw std::invalid_argument(std::string(who) + ": need at least one row");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw std::invalid_argument(std::string(who) + ": non-finite input");
    }
}

inline std::vector<std::string> labels_or_default(std::vector<std::string> words, Eigen::Index p) {
    if (words.empty()) {
        for (Eigen::Index j = 0; j < p; ++j) {
            words.push_back("f" + std::to_string(j));
        }
    }
    if (static_cast<Eigen::Index>(words.size()) != p) {
        throw std::invalid_argument("regression: one label per column required");
    }
    return words;
}
}  // namespace detail

inline double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
    if (pred.size() != target.size() || pred.size() < 1) {
        throw std::invalid_argument("mse: lengths must match and be positive");
    }
    return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

inline Eigen::VectorXd predict(const RegressionFit& fit, const Eigen::MatrixXd& X) {
    if (X.cols() != fit.coeffs.size()) {
        throw std::invalid_argument("predict: design has " + std::to_string(X.cols()) + " columns, fit has " +
                                    std::to_string(fit.coeffs.size()));
    }
    Eigen::VectorXd out = X * fit.coeffs;
    if (fit.pinned_intercept) {
        out.array() += fit.offset;
    }
    return out;
}

/// Cyclic coordinate descent on the Gram matrix.
inline RegressionFit lasso_fit(const Eigen::MatrixXd& X_in, const Eigen::VectorXd& y, double alpha,
                               const LassoOptions& opts = {}) {
    detail::require_finite(X_in, y, "lasso_fit");
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("lasso_fit: alpha must be >= 0");
    }
    Eigen::Index const p = X_in.cols();
    double const offset = opts.pin_intercept ? opts.offset : 0.0;
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(p);
    if (opts.standardize) {
        for (Eigen::Index j = 0; j < p; ++j) {
            double const nrm = X_in.col(j).norm();
            scale(j) = nrm > 0.0 ? nrm : 1.0;
        }
    }
    Eigen::MatrixXd const X = X_in * scale.cwiseInverse().asDiagonal();
    Eigen::VectorXd const r = y.array() - offset;
    Eigen::MatrixXd const G = X.transpose() * X;
    Eigen::VectorXd const c = X.transpose() * r;
    double const rr = r.squaredNorm();
    double const thr = opts.threshold_factor * alpha;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd Gbeta = Eigen::VectorXd::Zero(p);
    auto objective = [&] { return rr - 2.0 * beta.dot(c) + beta.dot(Gbeta) + alpha * beta.lpNorm<1>(); };
    if (opts.objective_trace) {
        opts.objective_trace->push_back(objective());
    }

    int sweep = 0;
    bool converged = false;
    while (sweep < opts.max_iter) {
        ++sweep;
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            double const gjj = G(j, j);
            if (gjj <= 0.0) {
                continue;  // all-zero column stays pinned at 0
            }
            double const corr = c(j) - Gbeta(j) + gjj * beta(j);
            double updated = 0.0;
            if (corr > thr) {
                updated = (corr - thr) / gjj;
            } else if (corr < -thr) {
                updated = (corr + thr) / gjj;
            }
            double const delta = updated - beta(j);
            if (delta != 0.0) {
                beta(j) = updated;
                Gbeta += delta * G.col(j);
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (opts.objective_trace) {
            opts.objective_trace->push_back(objective());
        }
        if (max_change < opts.tol) {
            converged = true;
            break;
        }
    }

    RegressionFit fit;
    fit.words = detail::labels_or_default(opts.words, p);
    fit.coeffs = beta.cwiseQuotient(scale);
    fit.offset = offset;
    fit.pinned_intercept = opts.pin_intercept;
    fit.alpha = alpha;
    fit.kind = ObjectiveKind::lasso_sum;
    fit.standardized = opts.standardize;
    fit.diagnostics.iterations = sweep;
    fit.diagnostics.converged = converged;
    fit.diagnostics.in_sample_mse = mse(predict(fit, X_in), y);
    return fit;
}

inline RegressionFit ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                               std::vector<std::string> words = {}) {
    detail::require_finite(X, y, "ridge_fit");
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("ridge_fit: alpha must be >= 0");
    }
    double const n = static_cast<double>(X.rows());
    Eigen::MatrixXd A = X.transpose() * X / n;
    A.diagonal().array() += alpha;
    Eigen::VectorXd const b = X.transpose() * y / n;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success || (alpha == 0.0 && llt.rcond() < 1e-14)) {
        throw std::domain_error("ridge_fit: normal equations are singular; use alpha > 0");
    }
    RegressionFit fit;
    fit.words = detail::labels_or_default(std::move(words), X.cols());
    fit.coeffs = llt.solve(b);
    fit.alpha = alpha;
    fit.kind = ObjectiveKind::ridge_mean;
    fit.diagnostics.iterations = 1;
    fit.diagnostics.converged = true;
    fit.diagnostics.in_sample_mse = mse(predict(fit, X), y);
    return fit;
}

inline nlohmann::json to_json(const RegressionFit& fit) {
    std::vector<double> coeffs(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
    return nlohmann::json{{"words", fit.words},
                          {"coefficients", coeffs},
                          {"offset", fit.offset},
                          {"pinned_intercept", fit.pinned_intercept},
                          {"alpha", fit.alpha},
                          {"objective_kind", to_string(fit.kind)},
                          {"standardized", fit.standardized},
                          {"diagnostics",
                           {{"in_sample_mse", fit.diagnostics.in_sample_mse},
                            {"iterations", fit.diagnostics.iterations},
                            {"converged", fit.diagnostics.converged}}}};
}

}  // namespace itosig

#endif  // ITOSIG_REGRESS_HPP
