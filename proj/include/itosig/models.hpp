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

// Path simulators: one- and two-asset Heston (Euler, full truncation) and
// SDEs driven by a Brownian motion run on the Cantor clock.
//
// Every simulator is a pure function of (params, grid, path_index): each path
// draws from its own generator seeded by (master_seed, path_index), so results
// do not depend on how paths are scheduled across threads.

#ifndef ITOSIG_MODELS_HPP
#define ITOSIG_MODELS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "itosig/signature.hpp"

namespace itosig {

struct HestonParams {
    double s0 = 1.0;
    double v0 = 0.08;
    double mu = 0.001;
    double kappa = 0.5;
    double theta = 0.15;
    double sigma = 0.25;
    double rho = -0.5;

    void validate() const {
        if (!(v0 >= 0 && theta >= 0 && sigma >= 0 && kappa >= 0 && std::abs(rho) <= 1 && s0 > 0)) {
            throw std::invalid_argument("HestonParams: need s0 > 0, v0, theta, sigma, kappa >= 0 and |rho| <= 1");
        }
    }
};

/// Drivers are ordered (B1, B2, W1, W2): asset i is driven by B_i and its
/// variance by W_i. The per-asset rho field is unused; corr4 carries it.
struct Heston2Params {
    std::array<HestonParams, 2> assets{};
    Eigen::Matrix4d corr4 = Eigen::Matrix4d::Identity();

    void validate() const;
};

enum class CantorVol {
    tanh,            // 1 + 0.3 tanh(x)
    multiplicative,  // nu_i * x
};

struct CantorParams {
    std::vector<double> s0{0.0};
    CantorVol vol = CantorVol::tanh;
    std::vector<double> nu{};
    double rho = 0.0;
    int cantor_depth = 40;

    double sigma(std::size_t asset, double x) const {
        if (vol == CantorVol::tanh) {
            return 1.0 + 0.3 * std::tanh(x);
        }
        return nu.at(asset) * x;
    }

    void validate(int n_assets) const {
        if (cantor_depth < 20) {
            throw std::invalid_argument("CantorParams: cantor_depth must be >= 20");
        }
        if (std::abs(rho) > 1) {
            throw std::invalid_argument("CantorParams: |rho| must be <= 1");
        }
        if (static_cast<int>(s0.size()) < n_assets) {
            throw std::invalid_argument("CantorParams: need one s0 per asset");
        }
        if (vol == CantorVol::multiplicative && static_cast<int>(nu.size()) < n_assets) {
            throw std::invalid_argument("CantorParams: need one nu per asset");
        }
    }
};

struct SimGrid {
    double T = 1.0;
    int n = 2000;
    std::uint64_t master_seed = 0;

    void validate() const {
        if (!(T > 0) || n < 1) {
            throw std::invalid_argument("SimGrid: need T > 0 and n >= 1");
        }
    }
    double dt() const { return T / n; }
    std::vector<double> times() const {
        std::vector<double> t(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) {
            t[static_cast<std::size_t>(k)] = T * k / n;
        }
        return t;
    }
};

struct SimulatedPath {
    SamplePath path;
    int degenerate_steps = 0;
};

inline std::mt19937_64 path_stream(std::uint64_t master_seed, std::uint64_t path_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
    return std::mt19937_64(seq);
}

/// Cantor function from the exact ternary digits of x: digits 0 -> 0 and
/// 2 -> 1 up to the first digit 1 (which maps to 1 and stops), read in base 2.
inline double cantor_function(double x, int depth = 40) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("cantor_function: x must lie in [0, 1]");
    }
    if (x == 1.0) {
        return 1.0;
    }
    if (x == 0.0) {
        return 0.0;
    }
    // x = mant * 2^-bits exactly, with mant < 2^bits
    int exp = 0;
    double const m = std::frexp(x, &exp);
    auto mant = static_cast<unsigned __int128>(std::ldexp(m, 53));
    int bits = 53 - exp;
    if (bits > 120) {
        mant >>= (bits - 120);
        bits = 120;
    }
    unsigned __int128 const mask = (static_cast<unsigned __int128>(1) << bits) - 1;
    double out = 0.0;
    double weight = 0.5;
    for (int i = 0; i < depth && mant != 0; ++i, weight *= 0.5) {
        mant *= 3;
        auto const digit = static_cast<int>(mant >> bits);
        mant &= mask;
        if (digit == 1) {
            out += weight;
            break;
        }
        if (digit == 2) {
            out += weight;
        }
    }
    return out;
}

/// Lower-triangular factor L with L L^T = corr for a positive semidefinite
/// correlation matrix. Fails with the minimum eigenvalue when corr is not PSD.
inline Eigen::MatrixXd correlation_factor(const Eigen::MatrixXd& corr) {
    auto const k = corr.rows();
    if (corr.cols() != k || k == 0) {
        throw std::invalid_argument("correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(corr(i, i) - 1.0) > 1e-12) {
            throw std::domain_error("correlation matrix must have unit diagonal");
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            if (std::abs(corr(i, j) - corr(j, i)) > 1e-12) {
                throw std::domain_error("correlation matrix must be symmetric");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
    double const min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -1e-10) {
        throw std::domain_error("correlation matrix is not positive semidefinite (minimum eigenvalue " +
                                std::to_string(min_eig) + ")");
    }
    // Cholesky that tolerates zero pivots (rank-deficient but PSD).
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double diag = corr(j, j) - L.row(j).head(j).squaredNorm();
        if (diag < 1e-14) {
            diag = 0.0;
        }
        L(j, j) = std::sqrt(diag);
        for (Eigen::Index i = j + 1; i < k; ++i) {
            double const v = corr(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
            L(i, j) = diag > 0.0 ? v / L(j, j) : 0.0;
        }
    }
    return L;
}

inline void Heston2Params::validate() const {
    for (auto const& a : assets) {
        HestonParams p = a;
        p.rho = 0.0;
        p.validate();
    }
    correlation_factor(corr4);
}

/// count x k matrix of i.i.d. N(0, corr) rows.
inline Eigen::MatrixXd correlated_normals(const Eigen::MatrixXd& corr, int count, std::mt19937_64& rng) {
    Eigen::MatrixXd const L = correlation_factor(corr);
    auto const k = corr.rows();
    std::normal_distribution<double> normal;
    Eigen::MatrixXd out(count, k);
    Eigen::VectorXd z(k);
    for (int r = 0; r < count; ++r) {
        for (Eigen::Index i = 0; i < k; ++i) {
            z(i) = normal(rng);
        }
        out.row(r) = (L * z).transpose();
    }
    return out;
}

inline Eigen::MatrixXd correlated_normals(const Eigen::MatrixXd& corr, int count, std::uint64_t seed) {
    auto rng = path_stream(seed, 0);
    return correlated_normals(corr, count, rng);
}

/// Brownian increments (ΔW, ΔB) of one Heston path, n x 2.
inline Eigen::MatrixXd heston_driver_increments(double rho, const SimGrid& grid, std::uint64_t path_index) {
    Eigen::Matrix2d corr;
    corr << 1.0, rho, rho, 1.0;
    auto rng = path_stream(grid.master_seed, path_index);
    return correlated_normals(corr, grid.n, rng) * std::sqrt(grid.dt());
}

inline constexpr double kRecoveryFloor = 1e-12;

/// Columns (S, V, W^Q, B^Q). V is stored floored at zero. W^Q and B^Q are the
/// drivers recovered from the simulated increments, ΔW^Q = ΔS / (S √V⁺) and
/// ΔB^Q = ΔV / (σ √V⁺); steps with √V⁺ below the floor carry both forward and
/// count as degenerate. With σ = 0 the B^Q column stays at zero.
inline SimulatedPath simulate_heston(const HestonParams& p, const SimGrid& grid, std::uint64_t path_index) {
    p.validate();
    grid.validate();
    Eigen::MatrixXd const dz = heston_driver_increments(p.rho, grid, path_index);
    double const dt = grid.dt();
    std::vector<double> values;
    values.reserve((static_cast<std::size_t>(grid.n) + 1) * 4);
    double s = p.s0;
    double v = p.v0;
    double w = 0.0;
    double b = 0.0;
    int degenerate = 0;
    values.insert(values.end(), {s, v, w, b});
    for (int k = 0; k < grid.n; ++k) {
        double const vp = std::max(v, 0.0);
        double const sq = std::sqrt(vp);
        double const s1 = s + p.mu * s * dt + s * sq * dz(k, 0);
        double const v1 = std::max(v + p.kappa * (p.theta - vp) * dt + p.sigma * sq * dz(k, 1), 0.0);
        if (sq < kRecoveryFloor || !(s > 0.0)) {
            ++degenerate;
        } else {
            w += (s1 - s) / (s * sq);
            if (p.sigma > 0.0) {
                b += (v1 - v) / (p.sigma * sq);
            }
        }
        s = s1;
        v = v1;
        values.insert(values.end(), {s, v, w, b});
    }
    return {SamplePath(grid.times(), std::move(values), 4), degenerate};
}

/// Columns (S1, S2, V1, V2).
inline SimulatedPath simulate_heston2(const Heston2Params& p, const SimGrid& grid, std::uint64_t path_index) {
    p.validate();
    grid.validate();
    auto rng = path_stream(grid.master_seed, path_index);
    Eigen::MatrixXd const dz = correlated_normals(Eigen::MatrixXd(p.corr4), grid.n, rng) * std::sqrt(grid.dt());
    double const dt = grid.dt();
    std::array<double, 2> s{p.assets[0].s0, p.assets[1].s0};
    std::array<double, 2> v{p.assets[0].v0, p.assets[1].v0};
    std::vector<double> values;
    values.reserve((static_cast<std::size_t>(grid.n) + 1) * 4);
    values.insert(values.end(), {s[0], s[1], v[0], v[1]});
    int degenerate = 0;
    for (int k = 0; k < grid.n; ++k) {
        for (int i = 0; i < 2; ++i) {
            auto const& a = p.assets[static_cast<std::size_t>(i)];
            double const vp = std::max(v[static_cast<std::size_t>(i)], 0.0);
            double const sq = std::sqrt(vp);
            if (sq < kRecoveryFloor) {
                ++degenerate;
            }
            double& si = s[static_cast<std::size_t>(i)];
            double& vi = v[static_cast<std::size_t>(i)];
            si = si + a.mu * si * dt + si * sq * dz(k, i);
            vi = std::max(vi + a.kappa * (a.theta - vp) * dt + a.sigma * sq * dz(k, 2 + i), 0.0);
        }
        values.insert(values.end(), {s[0], s[1], v[0], v[1]});
    }
    return {SamplePath(grid.times(), std::move(values), 4), degenerate};
}

/// dS^i = σ_i(S^i) dW^i_{C(t)}. Columns (S..., W_C..., C); requires T <= 1.
inline SimulatedPath simulate_cantor_sde(const CantorParams& p, const SimGrid& grid, std::uint64_t path_index,
                                         int n_assets) {
    if (n_assets != 1 && n_assets != 2) {
        throw std::invalid_argument("simulate_cantor_sde: n_assets must be 1 or 2");
    }
    p.validate(n_assets);
    grid.validate();
    if (grid.T > 1.0) {
        throw std::invalid_argument("simulate_cantor_sde: the Cantor clock lives on [0, 1]");
    }
    auto const times = grid.times();
    auto const na = static_cast<std::size_t>(n_assets);
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(n_assets, n_assets);
    if (n_assets == 2) {
        corr(0, 1) = corr(1, 0) = p.rho;
    }
    auto rng = path_stream(grid.master_seed, path_index);
    Eigen::MatrixXd const z = correlated_normals(corr, grid.n, rng);

    std::vector<double> s(p.s0.begin(), p.s0.begin() + n_assets);
    std::vector<double> w(na, 0.0);
    double c = cantor_function(times[0], p.cantor_depth);
    std::vector<double> values;
    values.reserve(times.size() * (2 * na + 1));
    auto push = [&] {
        values.insert(values.end(), s.begin(), s.end());
        values.insert(values.end(), w.begin(), w.end());
        values.push_back(c);
    };
    push();
    for (int k = 0; k < grid.n; ++k) {
        double const c1 = cantor_function(times[static_cast<std::size_t>(k) + 1], p.cantor_depth);
        double const sd = std::sqrt(std::max(c1 - c, 0.0));
        for (std::size_t i = 0; i < na; ++i) {
            double const dw = sd * z(k, static_cast<Eigen::Index>(i));
            s[i] += p.sigma(i, s[i]) * dw;
            w[i] += dw;
        }
        c = c1;
        push();
    }
    return {SamplePath(times, std::move(values), static_cast<int>(2 * na + 1)), 0};
}

}  // namespace itosig

#endif  // ITOSIG_MODELS_HPP
