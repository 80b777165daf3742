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

// Realized-variance style path functionals on log-price paths.

#ifndef ITOSIG_PAYOFFS_HPP
#define ITOSIG_PAYOFFS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "itosig/io.hpp"
#include "itosig/signature.hpp"

namespace itosig {

struct RealizedStats {
    double rvar_i = 0.0;
    double rvar_j = 0.0;
    double rv_i = 0.0;
    double cov_ij = 0.0;
    std::optional<double> corr_ij;

    double corr() const {
        if (!corr_ij) {
            throw std::domain_error("realized correlation undefined: zero realized variance");
        }
        return *corr_ij;
    }
};

/// Sums over the grid increments of columns i and j (0-based).
inline RealizedStats realized_stats(const SamplePath& path, int i, int j) {
    if (i < 0 || j < 0 || i >= path.dim() || j >= path.dim()) {
        throw std::invalid_argument("realized_stats: asset index out of range");
    }
    detail::CompensatedSum sii;
    detail::CompensatedSum sjj;
    detail::CompensatedSum sij;
    for (std::size_t k = 0; k < path.steps(); ++k) {
        double const dxi = path.increment(k, i);
        double const dxj = path.increment(k, j);
        sii.add(dxi * dxi);
        sjj.add(dxj * dxj);
        sij.add(dxi * dxj);
    }
    RealizedStats s;
    s.rvar_i = sii.value();
    s.rvar_j = sjj.value();
    s.rv_i = std::sqrt(s.rvar_i);
    s.cov_ij = sij.value();
    if (s.rvar_i > 0.0 && s.rvar_j > 0.0) {
        double const c = s.cov_ij / (std::sqrt(s.rvar_i) * std::sqrt(s.rvar_j));
        s.corr_ij = std::clamp(c, -1.0, 1.0);
    }
    return s;
}

enum class PayoffKind { rv_swap, rv_call, cov_swap, cov_call, corr_swap, corr_call };

inline const char* to_string(PayoffKind k) {
    switch (k) {
        case PayoffKind::rv_swap: return "RVswap";
        case PayoffKind::rv_call: return "RVcall";
        case PayoffKind::cov_swap: return "CovSwap";
        case PayoffKind::cov_call: return "CovCall";
        case PayoffKind::corr_swap: return "CorrSwap";
        case PayoffKind::corr_call: return "CorrCall";
    }
    return "?";
}

inline bool is_call(PayoffKind k) {
    return k == PayoffKind::rv_call || k == PayoffKind::cov_call || k == PayoffKind::corr_call;
}

inline bool needs_corr(PayoffKind k) { return k == PayoffKind::corr_swap || k == PayoffKind::corr_call; }

struct PayoffSpec {
    PayoffKind kind = PayoffKind::rv_swap;
    int asset_i = 0;
    int asset_j = 0;
    double strike = 0.0;

    /// RVswap1, RVcall2, CovSwap, ... (1-based asset suffix on single-asset kinds).
    std::string name() const {
        std::string n = to_string(kind);
        if (kind == PayoffKind::rv_swap || kind == PayoffKind::rv_call) {
            n += std::to_string(asset_i + 1);
        }
        return n;
    }
};

/// The eight two-asset payoffs in reporting order.
inline std::vector<PayoffSpec> standard_payoffs() {
    return {{PayoffKind::rv_swap, 0, 0, 0.0},   {PayoffKind::rv_swap, 1, 1, 0.0},
            {PayoffKind::rv_call, 0, 0, 0.0},   {PayoffKind::rv_call, 1, 1, 0.0},
            {PayoffKind::cov_swap, 0, 1, 0.0},  {PayoffKind::cov_call, 0, 1, 0.0},
            {PayoffKind::corr_swap, 0, 1, 0.0}, {PayoffKind::corr_call, 0, 1, 0.0}};
}

/// Underlying statistic: RVar for the swap, RV for the call, Cov, Corr.
inline double statistic(const PayoffSpec& spec, const RealizedStats& s) {
    switch (spec.kind) {
        case PayoffKind::rv_swap: return s.rvar_i;
        case PayoffKind::rv_call: return s.rv_i;
        case PayoffKind::cov_swap:
        case PayoffKind::cov_call: return s.cov_ij;
        case PayoffKind::corr_swap:
        case PayoffKind::corr_call: return s.corr();
    }
    throw std::logic_error("statistic: unknown payoff kind");
}

inline double statistic(const PayoffSpec& spec, const SamplePath& path) {
    return statistic(spec, realized_stats(path, spec.asset_i, spec.asset_j));
}

inline double payoff_from_statistic(const PayoffSpec& spec, double stat) {
    double const swap = stat - spec.strike;
    return is_call(spec.kind) ? std::max(swap, 0.0) : swap;
}

inline double evaluate(const PayoffSpec& spec, const RealizedStats& s) {
    if (!std::isfinite(spec.strike)) {
        throw std::invalid_argument("evaluate: strike not finite");
    }
    return payoff_from_statistic(spec, statistic(spec, s));
}

inline double evaluate(const PayoffSpec& spec, const SamplePath& path) {
    return evaluate(spec, realized_stats(path, spec.asset_i, spec.asset_j));
}

/// At-the-money strikes: mean of each statistic over the training set.
/// Throws domain_error if a correlation strike meets a zero-variance path.
inline void resolve_strikes(std::vector<PayoffSpec>& specs, const std::vector<SamplePath>& training) {
    if (training.empty()) {
        throw std::invalid_argument("resolve_strikes: empty training set");
    }
    for (auto& spec : specs) {
        detail::CompensatedSum acc;
        for (const auto& path : training) {
            acc.add(statistic(spec, path));
        }
        spec.strike = acc.value() / static_cast<double>(training.size());
    }
}

inline void write_payoff_csv(std::ostream& out, const std::vector<PayoffSpec>& specs,
                             const std::vector<SamplePath>& paths) {
    out << "path_id,payoff_kind,value\n";
    for (std::size_t p = 0; p < paths.size(); ++p) {
        for (const auto& spec : specs) {
            out << p << ',' << spec.name() << ',' << format_double(evaluate(spec, paths[p])) << '\n';
        }
    }
}

}  // namespace itosig

#endif  // ITOSIG_PAYOFFS_HPP
