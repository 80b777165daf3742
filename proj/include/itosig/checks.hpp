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

#ifndef ITOSIG_CHECKS_HPP
#define ITOSIG_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "itosig/experiments.hpp"
#include "itosig/models.hpp"
#include "itosig/payoffs.hpp"
#include "itosig/regress.hpp"
#include "itosig/signature.hpp"
#include "itosig/tensor.hpp"

namespace itosig {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckOptions {
    std::string filter;  // empty: every suite
    std::uint64_t seed = 0;
    int trials = 20;
    double lasso_threshold_factor = 0.5;  // fault injection when != 0.5
};

struct CheckReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<CheckResult> results;

    bool passed() const {
        return std::all_of(results.begin(), results.end(), [](auto const& r) { return r.passed; });
    }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        int failed = 0;
        for (auto const& r : results) {
            rows.push_back({{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
            failed += r.passed ? 0 : 1;
        }
        return {{"meta", meta_json(config_hash, seed)},
                {"passed", passed()},
                {"total", results.size()},
                {"failed", failed},
                {"results", rows}};
    }
};

inline const std::vector<std::string>& check_suites() {
    static const std::vector<std::string> names{"tensor", "signature", "models", "regress", "payoffs", "cli"};
    return names;
}

inline CheckOptions check_options(const ExperimentConfig& c) {
    CheckOptions o;
    o.seed = c.master_seed;
    try {
        detail::check_keys(c.check, {"filter", "trials", "faults"}, "check");
        detail::read_opt(c.check, "filter", o.filter);
        detail::read_opt(c.check, "trials", o.trials);
        if (c.check.contains("faults")) {
            auto const& f = c.check.at("faults");
            detail::check_keys(f, {"lasso_threshold_factor"}, "check.faults");
            detail::read_opt(f, "lasso_threshold_factor", o.lasso_threshold_factor);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("check: ") + e.what());
    }
    if (o.trials < 1) {
        throw ConfigError("check.trials must be >= 1");
    }
    return o;
}

namespace checks {

using Poly = TensorPoly<double>;

// Small integer coefficients keep every product below 2^53, so double
// arithmetic is exact and results compare with ==.
inline Poly random_int_poly(const Alphabet& a, int level, std::mt19937_64& rng, bool unit_scalar = false) {
    std::uniform_int_distribution<int> coef(-3, 3);
    Poly p(a, level);
    auto const words = enumerate_words(a, level);
    for (auto const& w : words) {
        if (w.empty()) {
            p.add(w, unit_scalar ? 1.0 : coef(rng));
        } else if (rng() % words.size() < 12) {
            p.add(w, coef(rng));
        }
    }
    return p;
}

inline SamplePath random_walk(std::size_t steps, int d, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> z(0.0, scale);
    std::vector<double> t(steps + 1), v((steps + 1) * static_cast<std::size_t>(d), 0.0);
    for (std::size_t k = 0; k <= steps; ++k) {
        t[k] = static_cast<double>(k) / static_cast<double>(steps);
        for (int j = 0; j < d && k > 0; ++j) {
            auto const du = static_cast<std::size_t>(d);
            auto const ju = static_cast<std::size_t>(j);
            v[k * du + ju] = v[(k - 1) * du + ju] + z(rng);
        }
    }
    return SamplePath(t, v, d);
}

inline double max_abs_diff(const Poly& a, const Poly& b) {
    double m = 0.0;
    auto const diff = a - b;
    for (auto const& [w, c] : diff.terms()) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

inline double max_abs(const Poly& a) {
    double m = 0.0;
    for (auto const& [w, c] : a.terms()) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

class Recorder {
public:
    Recorder(std::vector<CheckResult>& out, std::string suite) : out_(out), suite_(std::move(suite)) {}

    void run(const std::string& name, const std::function<std::string()>& body) {
        CheckResult r{suite_, name, false, {}};
        try {
            r.detail = body();
            r.passed = r.detail.empty();
            if (r.passed) {
                r.detail = "ok";
            }
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
    std::string suite_;
};

inline std::string fmt(const char* what, double value, double tol) {
    std::ostringstream os;
    os << what << " = " << value << " exceeds " << tol;
    return os.str();
}

inline void tensor_suite(Recorder& rec, const CheckOptions& o) {
    Alphabet const a(2, true, true);
    Alphabet const plain(2, true, false);
    int const L = 4;
    rec.run("concat_associative", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 11);
        for (int t = 0; t < o.trials; ++t) {
            auto const x = random_int_poly(a, L, rng), y = random_int_poly(a, L, rng), z = random_int_poly(a, L, rng);
            if (!(concat(concat(x, y), z) == concat(x, concat(y, z)))) {
                return "(xy)z != x(yz)";
            }
        }
        return {};
    });
    rec.run("shuffle_commutative_associative", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 12);
        for (int t = 0; t < o.trials; ++t) {
            auto const x = random_int_poly(plain, L, rng), y = random_int_poly(plain, L, rng);
            auto const z = random_int_poly(plain, L, rng);
            if (!(shuffle(x, y) == shuffle(y, x))) {
                return "shuffle not commutative";
            }
            if (!(shuffle(shuffle(x, y), z) == shuffle(x, shuffle(y, z)))) {
                return "shuffle not associative";
            }
        }
        return {};
    });
    rec.run("quasi_shuffle_commutative_associative", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 13);
        for (int t = 0; t < o.trials; ++t) {
            auto const x = random_int_poly(a, L, rng), y = random_int_poly(a, L, rng), z = random_int_poly(a, L, rng);
            if (!(quasi_shuffle(x, y) == quasi_shuffle(y, x))) {
                return "quasi-shuffle not commutative";
            }
            if (!(quasi_shuffle(quasi_shuffle(x, y), z) == quasi_shuffle(x, quasi_shuffle(y, z)))) {
                return "quasi-shuffle not associative";
            }
        }
        return {};
    });
    rec.run("quasi_shuffle_without_contractions_is_shuffle", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 14);
        for (int t = 0; t < o.trials; ++t) {
            // x carries no path letter, so no pair of letters contracts
            Poly x(a, L);
            auto const full = random_int_poly(a, L, rng, true);
            for (auto const& [w, c] : full.terms()) {
                auto const letters = w.letters();
                if (std::none_of(letters.begin(), letters.end(), [&](Letter l) { return a.path_component(l); })) {
                    x.add(w, c);
                }
            }
            auto const y = random_int_poly(a, L, rng);
            if (!(quasi_shuffle(x, y) == shuffle(x, y))) {
                return "quasi-shuffle differs from shuffle without bracket letters";
            }
        }
        return {};
    });
    rec.run("group_inverse_round_trip", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 15);
        auto const one = Poly::unit(a, L);
        for (int t = 0; t < o.trials; ++t) {
            auto const x = random_int_poly(a, L, rng, true);
            auto const xi = group_inverse(x);
            if (!(concat(x, xi) == one) || !(concat(xi, x) == one)) {
                return "x * x^-1 != 1";
            }
        }
        return {};
    });
    rec.run("ito_strat_functional_base_cases", [&]() -> std::string {
        if (!(ito_strat_functional(a, Word{}) == Poly::unit(a, 0))) {
            return "l^{} != 1";
        }
        for (Letter i = 0; i < a.size(); ++i) {
            if (!(ito_strat_functional(a, Word{i}) == Poly::basis(a, 1, Word{i}))) {
                return "l^{i} != e_i";
            }
            for (Letter j = 0; j < a.size(); ++j) {
                auto expect = Poly::basis(a, 2, Word{i, j});
                if (auto eps = a.contraction(i, j)) {
                    expect = expect - Poly::basis(a, 2, Word{*eps}, 0.5);
                }
                if (!(ito_strat_functional(a, Word{i, j}) == expect)) {
                    return "l^{ij} != e_ij - 1/2 eps_ij";
                }
            }
        }
        return {};
    });
}

inline void signature_suite(Recorder& rec, const CheckOptions& o) {
    double const gammas[] = {0.0, 0.25, 0.5, 1.0};
    rec.run("recursion_matches_chen_product", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 21);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            int const d = 1 + static_cast<int>(rng() % 3);
            auto const p = random_walk(5 + rng() % 30, d, rng, 0.3);
            double const g = gammas[rng() % 4];
            auto const a = gamma_signature(p, g, 4);
            auto const b = gamma_signature_chen(p, g, 4);
            auto const ea = a.end();
            worst = std::max(worst, max_abs_diff(ea, b.end()) / std::max(1.0, max_abs(ea)));
        }
        return worst <= 1e-10 ? std::string{} : fmt("relative error", worst, 1e-10);
    });
    rec.run("chen_increment_exact", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 22);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(20, 2, rng, 0.3);
            auto const s = gamma_signature(augment_path(p, 0.0, true, false), gammas[rng() % 4], 3);
            std::size_t const k = 1 + rng() % 18;
            std::size_t const m = k + rng() % (20 - k);
            auto const lhs = s.at(m);
            auto const rhs = concat(s.at(k), sig_increment(s, k, m));
            worst = std::max(worst, max_abs_diff(lhs, rhs) / std::max(1.0, max_abs(lhs)));
        }
        return worst <= 1e-12 ? std::string{} : fmt("relative residual", worst, 1e-12);
    });
    rec.run("level2_strat_minus_ito_is_half_qv", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 23);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(30, 2, rng, 0.3);
            auto const s = gamma_signature(p, 0.5, 2).end();
            auto const i = gamma_signature(p, 0.0, 2).end();
            auto const qv = quadratic_variation(p, 0.0);
            for (Letter a = 0; a < 2; ++a) {
                for (Letter b = 0; b < 2; ++b) {
                    double const r = s.coeff(Word{a, b}) - i.coeff(Word{a, b}) - 0.5 * qv.at(p.steps(), a, b);
                    worst = std::max(worst, std::abs(r) / std::max(1.0, std::abs(s.coeff(Word{a, b}))));
                }
            }
        }
        return worst <= 1e-12 ? std::string{} : fmt("relative residual", worst, 1e-12);
    });
    rec.run("degree2_shuffle_and_quasi_shuffle", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 24);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(30, 2, rng, 0.3);
            auto const strat = gamma_signature(p, 0.5, 2).end();
            auto const aug = augment_path(p, 0.0, false, true);
            auto const ito = gamma_signature(aug, 0.0, 2).end();
            for (Letter a = 0; a < 2; ++a) {
                for (Letter b = 0; b < 2; ++b) {
                    auto const u = Poly::basis(p.alphabet(), 2, Word{a});
                    auto const v = Poly::basis(p.alphabet(), 2, Word{b});
                    double const r1 = pair(shuffle(u, v), strat) - strat.coeff(Word{a}) * strat.coeff(Word{b});
                    auto const ua = Poly::basis(aug.alphabet(), 2, Word{a});
                    auto const va = Poly::basis(aug.alphabet(), 2, Word{b});
                    double const r2 = pair(quasi_shuffle(ua, va), ito) - ito.coeff(Word{a}) * ito.coeff(Word{b});
                    worst = std::max({worst, std::abs(r1), std::abs(r2)});
                }
            }
        }
        return worst <= 1e-12 ? std::string{} : fmt("residual", worst, 1e-12);
    });
    rec.run("backward_is_ito_plus_qv", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 25);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(30, 2, rng, 0.3);
            auto const back = gamma_signature(p, 1.0, 2).end();
            auto const ito = gamma_signature(p, 0.0, 2).end();
            auto const qv = quadratic_variation(p, 0.0);
            for (Letter a = 0; a < 2; ++a) {
                for (Letter b = 0; b < 2; ++b) {
                    worst = std::max(worst, std::abs(back.coeff(Word{a, b}) - ito.coeff(Word{a, b}) -
                                                      qv.at(p.steps(), a, b)));
                }
            }
        }
        return worst <= 1e-12 ? std::string{} : fmt("residual", worst, 1e-12);
    });
}

inline void models_suite(Recorder& rec, const CheckOptions& o) {
    SimGrid const grid{1.0, 250, o.seed};
    rec.run("simulators_deterministic", [&]() -> std::string {
        HestonParams const h;
        auto const a = simulate_heston(h, grid, 7);
        auto const b = simulate_heston(h, grid, 7);
        CantorParams const c;
        auto const x = simulate_cantor_sde(c, grid, 7, 1);
        auto const y = simulate_cantor_sde(c, grid, 7, 1);
        bool const same = std::equal(a.path.values().begin(), a.path.values().end(), b.path.values().begin()) &&
                          std::equal(x.path.values().begin(), x.path.values().end(), y.path.values().begin());
        return same ? std::string{} : "repeat simulation differs";
    });
    rec.run("heston_variance_nonnegative", [&]() -> std::string {
        HestonParams h;
        h.sigma = 1.0;  // frequent truncation
        for (int i = 0; i < o.trials; ++i) {
            auto const s = simulate_heston(h, grid, static_cast<std::uint64_t>(i));
            for (std::size_t k = 0; k < s.path.points(); ++k) {
                if (s.path.value(k, 1) < 0.0) {
                    return "negative variance at step " + std::to_string(k);
                }
            }
        }
        return {};
    });
    rec.run("driver_correlation_recovered", [&]() -> std::string {
        Eigen::Matrix2d corr;
        corr << 1.0, -0.5, -0.5, 1.0;
        auto const z = correlated_normals(corr, 20000, o.seed);
        double const r = (z.col(0).array() * z.col(1).array()).mean() /
                         std::sqrt(z.col(0).squaredNorm() / 20000.0 * z.col(1).squaredNorm() / 20000.0);
        return std::abs(r + 0.5) <= 0.04 ? std::string{} : fmt("|corr + 0.5|", std::abs(r + 0.5), 0.04);
    });
    rec.run("cantor_clock_is_qv_of_driver", [&]() -> std::string {
        SimGrid const fine{1.0, 2000, o.seed};
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            auto const s = simulate_cantor_sde(CantorParams{}, fine, static_cast<std::uint64_t>(i), 1);
            auto const qv = quadratic_variation(s.path.columns({1}), 0.0);
            worst = std::max(worst, std::abs(qv.at(s.path.steps(), 0, 0) - s.path.value(s.path.steps(), 2)));
        }
        // QV of a time-changed Brownian path has sd about sqrt(2 Σ ΔC²)
        return worst <= 0.5 ? std::string{} : fmt("|QV(W_C)(1) - C(1)|", worst, 0.5);
    });
    rec.run("cantor_function_endpoints", [&]() -> std::string {
        bool const ok = cantor_function(0.0) == 0.0 && cantor_function(1.0) == 1.0 && cantor_function(0.5) == 0.5;
        return ok ? std::string{} : "C(0), C(1/2), C(1) != 0, 1/2, 1";
    });
}

inline void regress_suite(Recorder& rec, const CheckOptions& o) {
    rec.run("lasso_stationarity", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 41);
        std::normal_distribution<double> z(0.0, 1.0);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            Eigen::MatrixXd X(40, 6);
            Eigen::VectorXd y(40);
            for (Eigen::Index i = 0; i < X.size(); ++i) {
                X.data()[i] = z(rng);
            }
            for (Eigen::Index i = 0; i < 40; ++i) {
                y[i] = 2.0 * X(i, 0) - X(i, 1) + 0.3 * z(rng);
            }
            double const alpha = 4.0;
            LassoOptions opts;
            opts.threshold_factor = o.lasso_threshold_factor;
            auto const fit = lasso_fit(X, y, alpha, opts);
            Eigen::VectorXd const g = X.transpose() * (y - X * fit.coeffs);
            for (Eigen::Index j = 0; j < g.size(); ++j) {
                double const b = fit.coeffs[j];
                double const v = b != 0.0 ? std::abs(g[j] - 0.5 * alpha * (b > 0 ? 1.0 : -1.0))
                                          : std::max(std::abs(g[j]) - 0.5 * alpha, 0.0);
                worst = std::max(worst, v);
            }
        }
        return worst <= 1e-6 ? std::string{} : fmt("KKT violation", worst, 1e-6);
    });
    rec.run("lasso_orthonormal_soft_threshold", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 42);
        std::normal_distribution<double> z(0.0, 1.0);
        Eigen::MatrixXd G(30, 5);
        for (Eigen::Index i = 0; i < G.size(); ++i) {
            G.data()[i] = z(rng);
        }
        Eigen::MatrixXd const Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ() * Eigen::MatrixXd::Identity(30, 5);
        Eigen::VectorXd y(30);
        for (Eigen::Index i = 0; i < 30; ++i) {
            y[i] = z(rng);
        }
        double const alpha = 0.8;
        LassoOptions opts;
        opts.threshold_factor = o.lasso_threshold_factor;
        auto const fit = lasso_fit(Q, y, alpha, opts);
        Eigen::VectorXd const c = Q.transpose() * y;
        double worst = 0.0;
        for (Eigen::Index j = 0; j < 5; ++j) {
            double const s = std::copysign(std::max(std::abs(c[j]) - 0.5 * alpha, 0.0), c[j]);
            worst = std::max(worst, std::abs(fit.coeffs[j] - s));
        }
        return worst <= 1e-9 ? std::string{} : fmt("deviation from soft threshold", worst, 1e-9);
    });
    rec.run("lasso_objective_monotone", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 43);
        std::normal_distribution<double> z(0.0, 1.0);
        Eigen::MatrixXd X(50, 8);
        Eigen::VectorXd y(50);
        for (Eigen::Index i = 0; i < X.size(); ++i) {
            X.data()[i] = z(rng);
        }
        for (Eigen::Index i = 0; i < 50; ++i) {
            y[i] = X(i, 0) + X(i, 1) * X(i, 2) + z(rng);
        }
        std::vector<double> trace;
        LassoOptions opts;
        opts.objective_trace = &trace;
        lasso_fit(X, y, 1.0, opts);
        for (std::size_t k = 1; k < trace.size(); ++k) {
            if (trace[k] > trace[k - 1] * (1 + 1e-12)) {
                return "objective increased at sweep " + std::to_string(k);
            }
        }
        return {};
    });
    rec.run("ridge_normal_equation_residual", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 44);
        std::normal_distribution<double> z(0.0, 1.0);
        double worst = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            Eigen::MatrixXd X(60, 7);
            Eigen::VectorXd y(60);
            for (Eigen::Index i = 0; i < X.size(); ++i) {
                X.data()[i] = z(rng);
            }
            for (Eigen::Index i = 0; i < 60; ++i) {
                y[i] = z(rng);
            }
            double const alpha = 0.1;
            auto const fit = ridge_fit(X, y, alpha);
            Eigen::VectorXd const r = (X.transpose() * X / 60.0 + alpha * Eigen::MatrixXd::Identity(7, 7)) * fit.coeffs -
                                      X.transpose() * y / 60.0;
            worst = std::max(worst, r.cwiseAbs().maxCoeff());
        }
        return worst <= 1e-10 ? std::string{} : fmt("residual", worst, 1e-10);
    });
}

inline void payoffs_suite(Recorder& rec, const CheckOptions& o) {
    rec.run("call_is_positive_part_of_swap", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 51);
        std::uniform_real_distribution<double> k(-0.5, 0.5);
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(10, 2, rng, 0.2);
            auto const s = realized_stats(p, 0, 1);
            double const strike = k(rng);
            PayoffSpec const sw{PayoffKind::cov_swap, 0, 1, strike};
            PayoffSpec const ca{PayoffKind::cov_call, 0, 1, strike};
            if (evaluate(ca, s) != std::max(evaluate(sw, s), 0.0)) {
                return "CovCall != max(CovSwap, 0)";
            }
        }
        return {};
    });
    rec.run("correlation_bounded", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 52);
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(3 + rng() % 20, 2, rng, 0.2);
            if (std::abs(realized_stats(p, 0, 1).corr()) > 1.0) {
                return "|Corr| > 1";
            }
        }
        return {};
    });
    rec.run("realized_variance_is_follmer_qv", [&]() -> std::string {
        std::mt19937_64 rng(o.seed + 53);
        for (int t = 0; t < o.trials; ++t) {
            auto const p = random_walk(50, 2, rng, 0.1);
            auto const qv = quadratic_variation(p, 0.0);
            auto const s = realized_stats(p, 0, 1);
            if (s.rvar_i != qv.at(p.steps(), 0, 0) || s.cov_ij != qv.at(p.steps(), 0, 1)) {
                return "realized statistics differ from the QV matrix";
            }
        }
        return {};
    });
}

inline void cli_suite(Recorder& rec, const CheckOptions& o) {
    rec.run("calibration_deterministic", [&]() -> std::string {
        auto c = default_config(ExperimentKind::heston_calib);
        c.n = 200;
        c.test_T = 0.5;
        c.samples.n_test = 5;
        c.master_seed = o.seed;
        auto const a = run_calibration(c);
        c.threads = 1;
        auto const b = run_calibration(c);
        for (std::size_t s = 0; s < 2; ++s) {
            if (a.schemes[s].out_sample_mse != b.schemes[s].out_sample_mse || a.pred_ito != b.pred_ito ||
                a.schemes[s].fit.coeffs != b.schemes[s].fit.coeffs) {
                return "repeat calibration differs";
            }
        }
        return {};
    });
    rec.run("pricing_deterministic", [&]() -> std::string {
        auto c = default_config(ExperimentKind::cantor2_pricing);
        c.samples = SampleSizes{60, 20, 40};
        c.master_seed = o.seed;
        auto const a = run_pricing(c);
        c.threads = 1;
        auto const b = run_pricing(c);
        for (std::size_t p = 0; p < a.payoffs.size(); ++p) {
            for (std::size_t s = 0; s < a.payoffs[p].schemes.size(); ++s) {
                if (a.payoffs[p].schemes[s].price != b.payoffs[p].schemes[s].price) {
                    return "repeat pricing differs";
                }
            }
        }
        return {};
    });
}

}  // namespace checks

inline CheckReport run_checks(const ExperimentConfig& c, const std::string& filter_override = {}) {
    auto o = check_options(c);
    if (!filter_override.empty()) {
        o.filter = filter_override;
    }
    auto const& names = check_suites();
    if (!o.filter.empty() && std::find(names.begin(), names.end(), o.filter) == names.end()) {
        throw ConfigError("check: unknown filter '" + o.filter +
                          "' (use tensor, signature, models, regress, payoffs or cli)");
    }
    using Suite = void (*)(checks::Recorder&, const CheckOptions&);
    Suite const suites[] = {checks::tensor_suite, checks::signature_suite, checks::models_suite,
                            checks::regress_suite, checks::payoffs_suite, checks::cli_suite};
    CheckReport rep;
    rep.config_hash = c.hash();
    rep.seed = c.master_seed;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (o.filter.empty() || o.filter == names[i]) {
            checks::Recorder rec(rep.results, names[i]);
            suites[i](rec, o);
        }
    }
    return rep;
}

}  // namespace itosig

#endif  // ITOSIG_CHECKS_HPP
