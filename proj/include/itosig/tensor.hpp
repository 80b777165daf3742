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

// Level-truncated free tensor algebra over an augmented alphabet.
//
// Letters are laid out as (time, path_1..path_d, bracket_11, bracket_12, ...,
// bracket_1d, bracket_22, ..., bracket_dd). Letters that are not present in an
// alphabet are skipped, so an alphabet without time starts with path_1 at 0.
//
// TensorPoly is generic in its coefficient type so that algebraic identities
// can be checked in exact rational arithmetic; signatures use double.

#ifndef ITOSIG_TENSOR_HPP
#define ITOSIG_TENSOR_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

namespace itosig {

using Letter = std::uint16_t;

class Alphabet {
public:
    Alphabet(int d, bool has_time, bool has_brackets)
        : d_(d), has_time_(has_time), has_brackets_(has_brackets) {
        if (d < 1) {
            throw std::invalid_argument("Alphabet: base dimension must be positive");
        }
    }

    int base_dim() const noexcept { return d_; }
    bool has_time() const noexcept { return has_time_; }
    bool has_brackets() const noexcept { return has_brackets_; }

    // d-hat
    int size() const noexcept {
        return (has_time_ ? 1 : 0) + d_ + (has_brackets_ ? d_ * (d_ + 1) / 2 : 0);
    }

    Letter time() const {
        if (!has_time_) {
            throw std::invalid_argument("Alphabet: no time letter");
        }
        return 0;
    }

    // i is 1-based, as in X^1..X^d
    Letter path(int i) const {
        if (i < 1 || i > d_) {
            throw std::invalid_argument("Alphabet: path component out of range");
        }
        return static_cast<Letter>((has_time_ ? 1 : 0) + i - 1);
    }

    // Symmetric in (i, j); absent unless both are in 1..d and brackets exist.
    std::optional<Letter> bracket(int i, int j) const {
        if (!has_brackets_ || i < 1 || j < 1 || i > d_ || j > d_) {
            return std::nullopt;
        }
        if (i > j) {
            std::swap(i, j);
        }
        // rows 1..i-1 hold d, d-1, ..., d-i+2 entries
        int const before = (i - 1) * d_ - (i - 1) * (i - 2) / 2;
        return static_cast<Letter>((has_time_ ? 1 : 0) + d_ + before + (j - i));
    }

    std::optional<int> path_component(Letter a) const noexcept {
        int const first = has_time_ ? 1 : 0;
        if (a >= first && a < first + d_) {
            return a - first + 1;
        }
        return std::nullopt;
    }

    bool is_time(Letter a) const noexcept { return has_time_ && a == 0; }

    // The bracket letter that two path letters contract into.
    std::optional<Letter> contraction(Letter a, Letter b) const {
        auto const i = path_component(a);
        auto const j = path_component(b);
        if (!i || !j) {
            return std::nullopt;
        }
        return bracket(*i, *j);
    }

    bool contains(Letter a) const noexcept { return a < size(); }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    int d_;
    bool has_time_;
    bool has_brackets_;
};

/// A multi-index over an alphabet. Ordered graded-lexicographically: shorter
/// words first, then lexicographic by letter.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter back() const { return letters_.back(); }
    std::span<const Letter> letters() const noexcept { return letters_; }

    // I' : drop the last letter
    Word prefix() const {
        if (letters_.empty()) {
            throw std::logic_error("Word::prefix of empty word");
        }
        return Word(std::vector<Letter>(letters_.begin(), letters_.end() - 1));
    }

    Word first(std::size_t n) const {
        return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    Word appended(Letter a) const {
        Word out = *this;
        out.letters_.push_back(a);
        return out;
    }

    Word concatenated(const Word& other) const {
        Word out = *this;
        out.letters_.insert(out.letters_.end(), other.letters_.begin(), other.letters_.end());
        return out;
    }

    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        if (auto c = a.size() <=> b.size(); c != 0) {
            return c;
        }
        return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                      b.letters_.begin(), b.letters_.end());
    }
    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Letter> letters_;
};

inline std::string to_string(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) {
            out += '.';
        }
        out += std::to_string(w[i]);
    }
    return out;
}

inline Word parse_word(std::string_view text) {
    std::vector<Letter> letters;
    if (text.empty()) {
        return Word{};
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto const dot = text.find('.', pos);
        auto const tok = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        if (tok.empty()) {
            throw std::invalid_argument("parse_word: empty letter in '" + std::string(text) + "'");
        }
        unsigned long v = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') {
                throw std::invalid_argument("parse_word: bad letter in '" + std::string(text) + "'");
            }
            v = v * 10 + static_cast<unsigned long>(c - '0');
        }
        letters.push_back(static_cast<Letter>(v));
        if (dot == std::string_view::npos) {
            break;
        }
        pos = dot + 1;
    }
    return Word(std::move(letters));
}

/// Number of words of length 0..max_level over `letters` letters.
inline std::size_t word_count(int letters, int max_level) {
    std::size_t total = 0;
    std::size_t level_size = 1;
    for (int m = 0; m <= max_level; ++m) {
        total += level_size;
        level_size *= static_cast<std::size_t>(letters);
    }
    return total;
}

inline std::vector<Word> enumerate_words(const Alphabet& alphabet, int max_level) {
    if (max_level < 0) {
        throw std::invalid_argument("enumerate_words: negative level");
    }
    std::vector<Word> out;
    out.reserve(word_count(alphabet.size(), max_level));
    out.emplace_back();
    std::size_t level_begin = 0;
    for (int m = 1; m <= max_level; ++m) {
        std::size_t const level_end = out.size();
        for (std::size_t k = level_begin; k < level_end; ++k) {
            for (int a = 0; a < alphabet.size(); ++a) {
                out.push_back(out[k].appended(static_cast<Letter>(a)));
            }
        }
        level_begin = level_end;
    }
    return out;
}

/// Flat index of words in graded-lex order; the layout of dense signature rows.
class DenseLayout {
public:
    DenseLayout(int letters, int max_level) : letters_(letters), max_level_(max_level) {
        std::size_t size = 1;
        offsets_.push_back(0);
        for (int m = 0; m <= max_level; ++m) {
            offsets_.push_back(offsets_.back() + size);
            size *= static_cast<std::size_t>(letters);
        }
    }

    int letters() const noexcept { return letters_; }
    int max_level() const noexcept { return max_level_; }
    std::size_t size() const noexcept { return offsets_.back(); }
    std::size_t offset(int level) const { return offsets_.at(static_cast<std::size_t>(level)); }
    std::size_t level_size(int level) const {
        return offsets_.at(static_cast<std::size_t>(level) + 1) - offsets_.at(static_cast<std::size_t>(level));
    }

    std::size_t index(const Word& w) const {
        if (static_cast<int>(w.size()) > max_level_) {
            throw std::invalid_argument("DenseLayout: word '" + to_string(w) + "' exceeds truncation level");
        }
        std::size_t idx = 0;
        for (Letter a : w.letters()) {
            if (a >= letters_) {
                throw std::invalid_argument("DenseLayout: letter out of range in '" + to_string(w) + "'");
            }
            idx = idx * static_cast<std::size_t>(letters_) + a;
        }
        return offsets_[w.size()] + idx;
    }

    Word word_at(std::size_t flat) const {
        int level = 0;
        while (offsets_[static_cast<std::size_t>(level) + 1] <= flat) {
            ++level;
        }
        std::size_t idx = flat - offsets_[static_cast<std::size_t>(level)];
        std::vector<Letter> letters(static_cast<std::size_t>(level));
        for (int p = level - 1; p >= 0; --p) {
            letters[static_cast<std::size_t>(p)] = static_cast<Letter>(idx % static_cast<std::size_t>(letters_));
            idx /= static_cast<std::size_t>(letters_);
        }
        return Word(std::move(letters));
    }

private:
    int letters_;
    int max_level_;
    std::vector<std::size_t> offsets_;
};

/// Truncated tensor algebra element in canonical sparse form: no word longer
/// than the truncation level and no exactly-zero coefficient is ever stored.
template <class Scalar>
class TensorPoly {
public:
    using scalar_type = Scalar;
    using Terms = std::map<Word, Scalar>;

    TensorPoly(Alphabet alphabet, int trunc_level) : alphabet_(alphabet), level_(trunc_level) {
        if (trunc_level < 0) {
            throw std::invalid_argument("TensorPoly: negative truncation level");
        }
    }

    static TensorPoly unit(Alphabet alphabet, int trunc_level) {
        TensorPoly out(alphabet, trunc_level);
        out.add(Word{}, Scalar(1));
        return out;
    }

    static TensorPoly basis(Alphabet alphabet, int trunc_level, const Word& w, Scalar c = Scalar(1)) {
        TensorPoly out(alphabet, trunc_level);
        out.add(w, c);
        return out;
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    int trunc_level() const noexcept { return level_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Scalar coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    TensorPoly& add(const Word& w, const Scalar& c) {
        if (static_cast<int>(w.size()) > level_) {
            throw std::invalid_argument("TensorPoly: word '" + to_string(w) + "' exceeds truncation level");
        }
        for (Letter a : w.letters()) {
            if (!alphabet_.contains(a)) {
                throw std::invalid_argument("TensorPoly: letter out of range in '" + to_string(w) + "'");
            }
        }
        accumulate(w, c);
        return *this;
    }

    // Used by the products below; the word is known to be valid.
    void accumulate(const Word& w, const Scalar& c) {
        if (c == Scalar(0)) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second == Scalar(0)) {
                terms_.erase(it);
            }
        }
    }

    // Terms of one homogeneous degree.
    TensorPoly degree_part(int m) const {
        TensorPoly out(alphabet_, level_);
        for (auto const& [w, c] : terms_) {
            if (static_cast<int>(w.size()) == m) {
                out.terms_.emplace(w, c);
            }
        }
        return out;
    }

    TensorPoly truncated(int new_level) const {
        TensorPoly out(alphabet_, new_level);
        for (auto const& [w, c] : terms_) {
            if (static_cast<int>(w.size()) <= new_level) {
                out.terms_.emplace(w, c);
            }
        }
        return out;
    }

    friend TensorPoly operator+(const TensorPoly& a, const TensorPoly& b) {
        check_compatible(a, b, "operator+");
        TensorPoly out = a;
        for (auto const& [w, c] : b.terms_) {
            out.accumulate(w, c);
        }
        return out;
    }

    friend TensorPoly operator-(const TensorPoly& a, const TensorPoly& b) {
        check_compatible(a, b, "operator-");
        TensorPoly out = a;
        for (auto const& [w, c] : b.terms_) {
            out.accumulate(w, -c);
        }
        return out;
    }

    friend TensorPoly operator*(const Scalar& s, const TensorPoly& a) {
        TensorPoly out(a.alphabet_, a.level_);
        for (auto const& [w, c] : a.terms_) {
            out.accumulate(w, s * c);
        }
        return out;
    }

    friend bool operator==(const TensorPoly& a, const TensorPoly& b) {
        return a.alphabet_ == b.alphabet_ && a.level_ == b.level_ && a.terms_ == b.terms_;
    }

    static void check_compatible(const TensorPoly& a, const TensorPoly& b, const char* op) {
        if (!(a.alphabet_ == b.alphabet_) || a.level_ != b.level_) {
            throw std::invalid_argument(std::string(op) + ": mismatched alphabet or truncation level");
        }
    }

private:
    Alphabet alphabet_;
    int level_;
    Terms terms_;
};

/// Graded convolution product, truncated at the common level.
template <class Scalar>
TensorPoly<Scalar> concat(const TensorPoly<Scalar>& a, const TensorPoly<Scalar>& b) {
    TensorPoly<Scalar>::check_compatible(a, b, "concat");
    int const level = a.trunc_level();
    TensorPoly<Scalar> out(a.alphabet(), level);
    for (auto const& [u, cu] : a.terms()) {
        for (auto const& [v, cv] : b.terms()) {
            if (static_cast<int>(u.size() + v.size()) > level) {
                // terms are graded, so longer v only get worse
                break;
            }
            out.accumulate(u.concatenated(v), cu * cv);
        }
    }
    return out;
}

/// a ⊗ e_letter
template <class Scalar>
TensorPoly<Scalar> concat_letter(const TensorPoly<Scalar>& a, Letter letter) {
    TensorPoly<Scalar> out(a.alphabet(), a.trunc_level());
    for (auto const& [u, cu] : a.terms()) {
        if (static_cast<int>(u.size()) < a.trunc_level()) {
            out.accumulate(u.appended(letter), cu);
        }
    }
    return out;
}

namespace detail {

// Table over prefix lengths (a, b) of I and J; entry (a, b) is the product of
// the length-a prefix of I with the length-b prefix of J. Each entry peels the
// last letter of either side, plus the contraction of both last letters when
// `with_contraction` is set.
template <class Scalar>
std::map<Word, Scalar> prefix_product(const Alphabet& alphabet, const Word& I, const Word& J,
                                      bool with_contraction) {
    using Terms = std::map<Word, Scalar>;
    std::size_t const n = I.size();
    std::size_t const m = J.size();
    std::vector<Terms> table((n + 1) * (m + 1));
    auto at = [&](std::size_t a, std::size_t b) -> Terms& { return table[a * (m + 1) + b]; };
    auto add_shifted = [](Terms& dst, const Terms& src, Letter letter) {
        for (auto const& [w, c] : src) {
            auto [it, inserted] = dst.try_emplace(w.appended(letter), c);
            if (!inserted) {
                it->second += c;
            }
        }
    };
    for (std::size_t a = 0; a <= n; ++a) {
        at(a, 0).emplace(I.first(a), Scalar(1));
    }
    for (std::size_t b = 1; b <= m; ++b) {
        at(0, b).emplace(J.first(b), Scalar(1));
    }
    for (std::size_t a = 1; a <= n; ++a) {
        for (std::size_t b = 1; b <= m; ++b) {
            Terms& cell = at(a, b);
            add_shifted(cell, at(a - 1, b), I[a - 1]);
            add_shifted(cell, at(a, b - 1), J[b - 1]);
            if (with_contraction) {
                if (auto eps = alphabet.contraction(I[a - 1], J[b - 1])) {
                    add_shifted(cell, at(a - 1, b - 1), *eps);
                }
            }
        }
    }
    Terms out = std::move(at(n, m));
    std::erase_if(out, [](auto const& kv) { return kv.second == Scalar(0); });
    return out;
}

template <class Scalar>
TensorPoly<Scalar> from_terms(const Alphabet& alphabet, int level, const std::map<Word, Scalar>& terms) {
    TensorPoly<Scalar> out(alphabet, level);
    for (auto const& [w, c] : terms) {
        if (static_cast<int>(w.size()) <= level) {
            out.accumulate(w, c);
        }
    }
    return out;
}

inline int checked_level(const Word& I, const Word& J, int trunc_level) {
    int const needed = static_cast<int>(I.size() + J.size());
    if (trunc_level < 0) {
        return needed;
    }
    if (trunc_level < needed) {
        throw std::invalid_argument("product of '" + to_string(I) + "' and '" + to_string(J) +
                                    "' exceeds truncation level");
    }
    return trunc_level;
}

}  // namespace detail

/// e_I ⧢ e_J. A negative trunc_level means |I| + |J|.
template <class Scalar = double>
TensorPoly<Scalar> shuffle(const Alphabet& alphabet, const Word& I, const Word& J, int trunc_level = -1) {
    int const level = detail::checked_level(I, J, trunc_level);
    return detail::from_terms(alphabet, level, detail::prefix_product<Scalar>(alphabet, I, J, false));
}

/// Quasi-shuffle: the shuffle recursion plus the bracket contraction of the two
/// last letters, dropped whenever that bracket letter is absent.
template <class Scalar = double>
TensorPoly<Scalar> quasi_shuffle(const Alphabet& alphabet, const Word& I, const Word& J, int trunc_level = -1) {
    if (!alphabet.has_brackets()) {
        throw std::invalid_argument("quasi_shuffle: alphabet has no bracket letters");
    }
    int const level = detail::checked_level(I, J, trunc_level);
    return detail::from_terms(alphabet, level, detail::prefix_product<Scalar>(alphabet, I, J, true));
}

namespace detail {
template <class Scalar, class WordProduct>
TensorPoly<Scalar> bilinear(const TensorPoly<Scalar>& a, const TensorPoly<Scalar>& b, WordProduct&& product) {
    TensorPoly<Scalar>::check_compatible(a, b, "bilinear product");
    TensorPoly<Scalar> out(a.alphabet(), a.trunc_level());
    for (auto const& [u, cu] : a.terms()) {
        for (auto const& [v, cv] : b.terms()) {
            if (static_cast<int>(u.size() + v.size()) > a.trunc_level()) {
                break;
            }
            auto const uv = product(u, v);
            for (auto const& [w, c] : uv.terms()) {
                out.accumulate(w, cu * cv * c);
            }
        }
    }
    return out;
}
}  // namespace detail

template <class Scalar>
TensorPoly<Scalar> shuffle(const TensorPoly<Scalar>& a, const TensorPoly<Scalar>& b) {
    return detail::bilinear(a, b, [&](const Word& u, const Word& v) { return shuffle<Scalar>(a.alphabet(), u, v); });
}

template <class Scalar>
TensorPoly<Scalar> quasi_shuffle(const TensorPoly<Scalar>& a, const TensorPoly<Scalar>& b) {
    return detail::bilinear(a, b,
                            [&](const Word& u, const Word& v) { return quasi_shuffle<Scalar>(a.alphabet(), u, v); });
}

/// Inverse in the truncated group: Σ_{k=0..N} (1 - a)^{⊗k}.
template <class Scalar>
TensorPoly<Scalar> group_inverse(const TensorPoly<Scalar>& a) {
    if (a.coeff(Word{}) != Scalar(1)) {
        throw std::domain_error("group_inverse: scalar coefficient must be 1");
    }
    auto const unit = TensorPoly<Scalar>::unit(a.alphabet(), a.trunc_level());
    auto const x = unit - a;
    auto power = unit;
    auto out = unit;
    for (int k = 1; k <= a.trunc_level(); ++k) {
        power = concat(power, x);
        if (power.is_zero()) {
            break;
        }
        out = out + power;
    }
    return out;
}

/// ⟨ell, a⟩ over the common graded support.
template <class Scalar>
Scalar pair(const TensorPoly<Scalar>& ell, const TensorPoly<Scalar>& a) {
    if (!(ell.alphabet() == a.alphabet())) {
        throw std::invalid_argument("pair: mismatched alphabet");
    }
    Scalar out(0);
    for (auto const& [w, c] : ell.terms()) {
        out += c * a.coeff(w);
    }
    return out;
}

/// The functional ℓ^I with ⟨e_I, Itô signature⟩ = ⟨ℓ^I, Stratonovich signature⟩
/// on a path extended by its brackets:
///   ℓ^I = ℓ^{I'} ⊗ e_{i_n} - ½ ℓ^{I''} ⊗ ε_{i_{n-1} i_n}.
template <class Scalar = double>
TensorPoly<Scalar> ito_strat_functional(const Alphabet& alphabet, const Word& I, int trunc_level = -1) {
    static_assert(!std::is_integral_v<Scalar>, "ito_strat_functional needs halves");
    if (!alphabet.has_brackets()) {
        throw std::invalid_argument("ito_strat_functional: alphabet has no bracket letters");
    }
    for (Letter a : I.letters()) {
        if (!alphabet.contains(a)) {
            throw std::invalid_argument("ito_strat_functional: letter out of range in '" + to_string(I) + "'");
        }
    }
    int const level = trunc_level < 0 ? static_cast<int>(I.size()) : trunc_level;
    if (level < static_cast<int>(I.size())) {
        throw std::invalid_argument("ito_strat_functional: truncation level below word length");
    }
    Scalar const half = Scalar(1) / Scalar(2);
    auto prev2 = TensorPoly<Scalar>::unit(alphabet, level);  // ℓ^∅
    if (I.empty()) {
        return prev2;
    }
    auto prev1 = TensorPoly<Scalar>::basis(alphabet, level, Word{I[0]});
    for (std::size_t k = 1; k < I.size(); ++k) {
        auto next = concat_letter(prev1, I[k]);
        if (auto eps = alphabet.contraction(I[k - 1], I[k])) {
            next = next - half * concat_letter(prev2, *eps);
        }
        prev2 = std::move(prev1);
        prev1 = std::move(next);
    }
    return prev1;
}

// JSON -----------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const Alphabet& a) {
    j = nlohmann::json{{"d", a.base_dim()},
                       {"has_time", a.has_time()},
                       {"has_brackets", a.has_brackets()},
                       {"total_letters", a.size()}};
}

inline Alphabet alphabet_from_json(const nlohmann::json& j) {
    return Alphabet(j.at("d").get<int>(), j.at("has_time").get<bool>(), j.at("has_brackets").get<bool>());
}

inline nlohmann::json to_json(const TensorPoly<double>& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto const& [w, c] : p.terms()) {
        std::vector<Letter> letters(w.letters().begin(), w.letters().end());
        terms.push_back({{"word", letters}, {"coeff", c}});
    }
    return nlohmann::json{{"trunc_level", p.trunc_level()}, {"alphabet", p.alphabet()}, {"terms", terms}};
}

inline TensorPoly<double> tensor_from_json(const nlohmann::json& j) {
    TensorPoly<double> out(alphabet_from_json(j.at("alphabet")), j.at("trunc_level").get<int>());
    for (auto const& t : j.at("terms")) {
        out.add(Word(t.at("word").get<std::vector<Letter>>()), t.at("coeff").get<double>());
    }
    return out;
}

}  // namespace itosig

#endif  // ITOSIG_TENSOR_HPP
