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

// Discrete gamma-signatures of sampled paths.
//
// For gamma in [0, 1] every iterated integral is the Riemann sum with
// evaluation point S_{I'}(t_k) + gamma * (S_{I'}(t_{k+1}) - S_{I'}(t_k)):
// gamma = 0 is Itô (left point), 1/2 Stratonovich (mid point) and 1 backward
// Itô (right point). Everything is evaluated on the path's own grid.

#ifndef ITOSIG_SIGNATURE_HPP
#define ITOSIG_SIGNATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "itosig/tensor.hpp"

namespace itosig {

/// Time grid t_0 < ... < t_n plus an (n+1) x d row-major matrix of values.
/// The alphabet describes the column roles (time, path, brackets).
class SamplePath {
public:
    SamplePath(std::vector<double> times, std::vector<double> values, Alphabet alphabet)
        : times_(std::move(times)), values_(std::move(values)), alphabet_(alphabet) {
        validate();
    }

    SamplePath(std::vector<double> times, std::vector<double> values, int d)
        : SamplePath(std::move(times), std::move(values), Alphabet(d, false, false)) {}

    std::size_t points() const noexcept { return times_.size(); }
    std::size_t steps() const noexcept { return times_.size() - 1; }
    int dim() const noexcept { return alphabet_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }

    double value(std::size_t k, int j) const { return values_[k * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(j)]; }
    std::span<const double> row(std::size_t k) const {
        return std::span<const double>(values_).subspan(k * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim()));
    }
    double increment(std::size_t k, int j) const { return value(k + 1, j) - value(k, j); }

    /// Grid points first..last inclusive.
    SamplePath slice(std::size_t first, std::size_t last) const {
        if (first > last || last >= points()) {
            throw std::invalid_argument("SamplePath::slice: bad range");
        }
        auto const d = static_cast<std::size_t>(dim());
        std::vector<double> t(times_.begin() + static_cast<std::ptrdiff_t>(first),
                              times_.begin() + static_cast<std::ptrdiff_t>(last + 1));
        std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first * d),
                              values_.begin() + static_cast<std::ptrdiff_t>((last + 1) * d));
        return SamplePath(std::move(t), std::move(v), alphabet_);
    }

    /// A plain path made of the given columns, in the given order.
    SamplePath columns(const std::vector<int>& cols) const {
        std::vector<double> v;
        v.reserve(points() * cols.size());
        for (std::size_t k = 0; k < points(); ++k) {
            for (int c : cols) {
                if (c < 0 || c >= dim()) {
                    throw std::invalid_argument("SamplePath::columns: column out of range");
                }
                v.push_back(value(k, c));
            }
        }
        return SamplePath(times_, std::move(v), static_cast<int>(cols.size()));
    }

private:
    void validate() const {
        if (times_.empty()) {
            throw std::invalid_argument("SamplePath: empty grid");
        }
        if (values_.size() != times_.size() * static_cast<std::size_t>(dim())) {
            throw std::invalid_argument("SamplePath: value count does not match grid and alphabet");
        }
        for (std::size_t k = 0; k < times_.size(); ++k) {
            if (!std::isfinite(times_[k]) || (k > 0 && !(times_[k] > times_[k - 1]))) {
                throw std::invalid_argument("SamplePath: times must be finite and strictly increasing");
            }
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("SamplePath: non-finite value");
            }
        }
    }

    std::vector<double> times_;
    std::vector<double> values_;
    Alphabet alphabet_;
};

namespace detail {

// Neumaier compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) noexcept {
        double const t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const noexcept { return sum + comp; }
};

}  // namespace detail

/// Cumulative bracket matrices along the grid; entry (k, i, j) with 0-based
/// column indices. qv(0, ., .) = 0.
class BracketMatrix {
public:
    BracketMatrix(std::vector<double> times, int d, std::vector<double> qv)
        : times_(std::move(times)), d_(d), qv_(std::move(qv)) {}

    std::size_t points() const noexcept { return times_.size(); }
    int dim() const noexcept { return d_; }
    std::span<const double> times() const noexcept { return times_; }
    double at(std::size_t k, int i, int j) const {
        return qv_[(k * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i)) * static_cast<std::size_t>(d_) +
                   static_cast<std::size_t>(j)];
    }

private:
    std::vector<double> times_;
    int d_;
    std::vector<double> qv_;
};

/// (1 - 2 gamma) Σ_{m<k} ΔX^i_m ΔX^j_m; identically zero at gamma = 1/2.
inline BracketMatrix quadratic_variation(const SamplePath& path, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("quadratic_variation: gamma must lie in [0, 1]");
    }
    auto const d = static_cast<std::size_t>(path.dim());
    std::vector<double> qv(path.points() * d * d, 0.0);
    if (gamma != 0.5) {
        double const scale = 1.0 - 2.0 * gamma;
        std::vector<detail::CompensatedSum> acc(d * d);
        for (std::size_t k = 0; k + 1 < path.points(); ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                double const dxi = path.increment(k, static_cast<int>(i));
                for (std::size_t j = i; j < d; ++j) {
                    acc[i * d + j].add(dxi * path.increment(k, static_cast<int>(j)));
                }
            }
            double* out = qv.data() + (k + 1) * d * d;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i; j < d; ++j) {
                    out[i * d + j] = out[j * d + i] = scale * acc[i * d + j].value();
                }
            }
        }
    }
    return BracketMatrix(std::vector<double>(path.times().begin(), path.times().end()), path.dim(), std::move(qv));
}

enum class BracketConvention {
    follmer,  // Σ ΔX^i ΔX^j for gamma != 1/2, zero at gamma = 1/2
    scaled,   // (1 - 2 gamma) Σ ΔX^i ΔX^j
};

/// Columns (time, X^1..X^d, [11], [12], ..., [1d], [22], ..., [dd]), keeping
/// only the requested groups.
inline SamplePath augment_path(const SamplePath& path, double gamma, bool include_time, bool include_brackets,
                               BracketConvention convention = BracketConvention::follmer) {
    if (path.alphabet().has_time() || path.alphabet().has_brackets()) {
        throw std::invalid_argument("augment_path: input must contain base path columns only");
    }
    int const d = path.dim();
    Alphabet const out_alphabet(d, include_time, include_brackets);
    std::vector<double> v;
    v.reserve(path.points() * static_cast<std::size_t>(out_alphabet.size()));
    std::optional<BracketMatrix> qv;
    if (include_brackets) {
        qv = quadratic_variation(path, gamma == 0.5 || convention == BracketConvention::scaled ? gamma : 0.0);
    }
    for (std::size_t k = 0; k < path.points(); ++k) {
        if (include_time) {
            v.push_back(path.times()[k]);
        }
        for (int j = 0; j < d; ++j) {
            v.push_back(path.value(k, j));
        }
        if (qv) {
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    v.push_back(qv->at(k, i, j));
                }
            }
        }
    }
    return SamplePath(std::vector<double>(path.times().begin(), path.times().end()), std::move(v), out_alphabet);
}

/// Truncated signature over [t_0, t_k] at every grid point, stored densely in
/// graded-lex word order (see DenseLayout).
class SigTrajectory {
public:
    SigTrajectory(std::vector<double> times, Alphabet alphabet, double gamma, int trunc_level, std::vector<double> data)
        : times_(std::move(times)),
          alphabet_(alphabet),
          gamma_(gamma),
          layout_(alphabet.size(), trunc_level),
          data_(std::move(data)) {
        if (data_.size() != times_.size() * layout_.size()) {
            throw std::invalid_argument("SigTrajectory: data size mismatch");
        }
    }

    std::size_t points() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    double gamma() const noexcept { return gamma_; }
    int trunc_level() const noexcept { return layout_.max_level(); }
    const DenseLayout& layout() const noexcept { return layout_; }

    std::span<const double> row(std::size_t k) const {
        return std::span<const double>(data_).subspan(k * layout_.size(), layout_.size());
    }
    double coeff(std::size_t k, const Word& w) const { return data_[k * layout_.size() + layout_.index(w)]; }

    TensorPoly<double> at(std::size_t k) const {
        TensorPoly<double> out(alphabet_, trunc_level());
        auto const r = row(k);
        for (std::size_t i = 0; i < r.size(); ++i) {
            out.accumulate(layout_.word_at(i), r[i]);
        }
        return out;
    }
    TensorPoly<double> end() const { return at(points() - 1); }

private:
    std::vector<double> times_;
    Alphabet alphabet_;
    double gamma_;
    DenseLayout layout_;
    std::vector<double> data_;
};

/// Runs the level-by-level recursion and hands every row (k, signature over
/// [t_0, t_k]) to `visit`. The rows passed are only valid during the call.
template <class Visitor>
void sweep_gamma_signature(const SamplePath& path, double gamma, int trunc_level, Visitor&& visit) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("gamma_signature: gamma must lie in [0, 1]");
    }
    if (trunc_level < 0) {
        throw std::invalid_argument("gamma_signature: negative truncation level");
    }
    int const dh = path.dim();
    auto const letters = static_cast<std::size_t>(dh);
    DenseLayout const layout(dh, trunc_level);
    std::vector<double> prev(layout.size(), 0.0);
    std::vector<double> next(layout.size(), 0.0);
    prev[0] = 1.0;
    visit(std::size_t{0}, std::span<const double>(prev));
    if (trunc_level == 0) {
        for (std::size_t k = 1; k < path.points(); ++k) {
            visit(k, std::span<const double>(prev));
        }
        return;
    }

    std::size_t const compensated = trunc_level >= 2 ? layout.offset(3) : layout.offset(2);
    std::vector<detail::CompensatedSum> acc(compensated);
    std::vector<double> dx(letters);

    for (std::size_t k = 0; k + 1 < path.points(); ++k) {
        for (std::size_t a = 0; a < letters; ++a) {
            dx[a] = path.increment(k, static_cast<int>(a));
        }
        next[0] = 1.0;
        for (std::size_t a = 0; a < letters; ++a) {
            acc[1 + a].add(dx[a]);
            next[1 + a] = acc[1 + a].value();
        }
        for (int m = 2; m <= trunc_level; ++m) {
            std::size_t const lo = layout.offset(m - 1);
            std::size_t const hi = layout.offset(m);
            double* dst = next.data() + hi;
            double const* src = prev.data() + hi;
            for (std::size_t p = lo; p < hi; ++p) {
                double const eval = prev[p] + gamma * (next[p] - prev[p]);
                std::size_t const child = (p - lo) * letters;
                if (m == 2) {
                    for (std::size_t a = 0; a < letters; ++a) {
                        auto& s = acc[hi + child + a];
                        s.add(eval * dx[a]);
                        dst[child + a] = s.value();
                    }
                } else {
                    for (std::size_t a = 0; a < letters; ++a) {
                        dst[child + a] = src[child + a] + eval * dx[a];
                    }
                }
            }
        }
        visit(k + 1, std::span<const double>(next));
        std::swap(prev, next);
    }
}

inline SigTrajectory gamma_signature(const SamplePath& path, double gamma, int trunc_level) {
    DenseLayout const layout(path.dim(), std::max(trunc_level, 0));
    std::vector<double> data;
    data.reserve(path.points() * layout.size());
    sweep_gamma_signature(path, gamma, trunc_level,
                          [&](std::size_t, std::span<const double> row) { data.insert(data.end(), row.begin(), row.end()); });
    return SigTrajectory(std::vector<double>(path.times().begin(), path.times().end()), path.alphabet(), gamma,
                         trunc_level, std::move(data));
}

/// Signature over the whole grid, dense, without keeping the trajectory.
inline std::vector<double> end_signature(const SamplePath& path, double gamma, int trunc_level) {
    std::vector<double> out;
    sweep_gamma_signature(path, gamma, trunc_level, [&](std::size_t k, std::span<const double> row) {
        if (k + 1 == path.points()) {
            out.assign(row.begin(), row.end());
        }
    });
    return out;
}

/// Independent construction through Chen's relation: each step contributes the
/// group element with graded parts gamma^{m-1} (ΔX)^{⊗m}, and the trajectory is
/// the running left-to-right product.
inline SigTrajectory gamma_signature_chen(const SamplePath& path, double gamma, int trunc_level) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("gamma_signature_chen: gamma must lie in [0, 1]");
    }
    int const N = std::max(trunc_level, 0);
    auto const letters = static_cast<std::size_t>(path.dim());
    DenseLayout const layout(path.dim(), N);
    std::size_t const size = layout.size();
    std::vector<double> data(path.points() * size, 0.0);
    data[0] = 1.0;
    std::vector<double> step(size, 0.0);
    for (std::size_t k = 0; k + 1 < path.points(); ++k) {
        std::fill(step.begin(), step.end(), 0.0);
        step[0] = 1.0;
        if (N >= 1) {
            for (std::size_t a = 0; a < letters; ++a) {
                step[1 + a] = path.increment(k, static_cast<int>(a));
            }
        }
        for (int m = 2; m <= N; ++m) {
            std::size_t const lo = layout.offset(m - 1);
            std::size_t const hi = layout.offset(m);
            for (std::size_t p = lo; p < hi; ++p) {
                for (std::size_t a = 0; a < letters; ++a) {
                    step[hi + (p - lo) * letters + a] = gamma * step[p] * step[1 + a];
                }
            }
        }
        double const* prev = data.data() + k * size;
        double* next = data.data() + (k + 1) * size;
        for (int m = 0; m <= N; ++m) {
            std::size_t const om = layout.offset(m);
            for (std::size_t i = 0; i < layout.level_size(m); ++i) {
                next[om + i] = prev[om + i];
            }
            for (int j = 0; j < m; ++j) {
                std::size_t const oj = layout.offset(j);
                std::size_t const og = layout.offset(m - j);
                std::size_t const gs = layout.level_size(m - j);
                for (std::size_t u = 0; u < layout.level_size(j); ++u) {
                    double const pu = prev[oj + u];
                    if (pu == 0.0) {
                        continue;
                    }
                    for (std::size_t v = 0; v < gs; ++v) {
                        next[om + u * gs + v] += pu * step[og + v];
                    }
                }
            }
        }
    }
    return SigTrajectory(std::vector<double>(path.times().begin(), path.times().end()), path.alphabet(), gamma, N,
                         std::move(data));
}

/// (S_{t_k})^{-1} ⊗ S_{t_m}
inline TensorPoly<double> sig_increment(const SigTrajectory& traj, std::size_t k, std::size_t m) {
    if (k > m || m >= traj.points()) {
        throw std::invalid_argument("sig_increment: need k <= m < points");
    }
    return concat(group_inverse(traj.at(k)), traj.at(m));
}

/// p-variation restricted to subpartitions of the sample grid (Euclidean norm),
/// exact by dynamic programming over the last visited point.
inline double grid_p_variation(const SamplePath& path, double p) {
    if (!(p >= 1.0)) {
        throw std::invalid_argument("grid_p_variation: p must be >= 1");
    }
    std::size_t const n = path.points();
    auto dist_p = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (int c = 0; c < path.dim(); ++c) {
            double const d = path.value(j, c) - path.value(i, c);
            s += d * d;
        }
        return std::pow(std::sqrt(s), p);
    };
    std::vector<double> best(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        double b = 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            b = std::max(b, best[i] + dist_p(i, j));
        }
        best[j] = b;
    }
    return std::pow(best[n - 1], 1.0 / p);
}

namespace detail {
inline void check_same_alphabet(const std::vector<SigTrajectory>& trajs) {
    for (auto const& t : trajs) {
        if (!(t.alphabet() == trajs.front().alphabet()) || t.trunc_level() != trajs.front().trunc_level()) {
            throw std::invalid_argument("feature matrix: trajectories differ in alphabet or level");
        }
    }
}
}  // namespace detail

/// Design matrix of ⟨e_I, S_t⟩: one row per trajectory end point, or one row
/// per grid point of every trajectory (stacked) when at_end is false.
inline Eigen::MatrixXd feature_matrix(const std::vector<SigTrajectory>& trajs, const std::vector<Word>& words,
                                      bool at_end) {
    if (trajs.empty()) {
        return Eigen::MatrixXd(0, static_cast<Eigen::Index>(words.size()));
    }
    detail::check_same_alphabet(trajs);
    auto const& layout = trajs.front().layout();
    std::vector<std::size_t> idx;
    for (auto const& w : words) {
        if (static_cast<int>(w.size()) > layout.max_level()) {
            throw std::invalid_argument("feature_matrix: word '" + to_string(w) + "' longer than truncation level");
        }
        idx.push_back(layout.index(w));
    }
    std::size_t rows = 0;
    for (auto const& t : trajs) {
        rows += at_end ? 1 : t.points();
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(words.size()));
    Eigen::Index r = 0;
    for (auto const& t : trajs) {
        std::size_t const first = at_end ? t.points() - 1 : 0;
        for (std::size_t k = first; k < t.points(); ++k, ++r) {
            auto const row = t.row(k);
            for (std::size_t c = 0; c < idx.size(); ++c) {
                X(r, static_cast<Eigen::Index>(c)) = row[idx[c]];
            }
        }
    }
    return X;
}

/// Rows ⟨ell_c, S_{t_k}⟩ for k = first_point..n of a single trajectory.
inline Eigen::MatrixXd functional_matrix(const SigTrajectory& traj, const std::vector<TensorPoly<double>>& functionals,
                                         std::size_t first_point = 0) {
    auto const& layout = traj.layout();
    std::vector<std::vector<std::pair<std::size_t, double>>> sparse;
    for (auto const& f : functionals) {
        if (!(f.alphabet() == traj.alphabet())) {
            throw std::invalid_argument("functional_matrix: functional alphabet differs from trajectory");
        }
        auto& s = sparse.emplace_back();
        for (auto const& [w, c] : f.terms()) {
            if (static_cast<int>(w.size()) > layout.max_level()) {
                throw std::invalid_argument("functional_matrix: word '" + to_string(w) +
                                            "' longer than truncation level");
            }
            s.emplace_back(layout.index(w), c);
        }
    }
    auto const rows = static_cast<Eigen::Index>(traj.points() - first_point);
    Eigen::MatrixXd X(rows, static_cast<Eigen::Index>(functionals.size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        auto const row = traj.row(first_point + static_cast<std::size_t>(r));
        for (std::size_t c = 0; c < sparse.size(); ++c) {
            double v = 0.0;
            for (auto const& [i, w] : sparse[c]) {
                v += w * row[i];
            }
            X(r, static_cast<Eigen::Index>(c)) = v;
        }
    }
    return X;
}

}  // namespace itosig

#endif  // ITOSIG_SIGNATURE_HPP
