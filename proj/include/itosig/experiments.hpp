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

#ifndef ITOSIG_EXPERIMENTS_HPP
#define ITOSIG_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "itosig/io.hpp"
#include "itosig/models.hpp"
#include "itosig/parallel.hpp"
#include "itosig/payoffs.hpp"
#include "itosig/regress.hpp"
#include "itosig/signature.hpp"
#include "itosig/tensor.hpp"

namespace itosig {

/// Malformed or invalid configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { heston_calib, cantor_calib, heston2_pricing, cantor2_pricing, check };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::heston_calib: return "heston-calib";
        case ExperimentKind::cantor_calib: return "cantor-calib";
        case ExperimentKind::heston2_pricing: return "heston2-pricing";
        case ExperimentKind::cantor2_pricing: return "cantor2-pricing";
        case ExperimentKind::check: return "check";
    }
    return "?";
}

inline bool is_calibration(ExperimentKind k) {
    return k == ExperimentKind::heston_calib || k == ExperimentKind::cantor_calib;
}
inline bool is_pricing(ExperimentKind k) {
    return k == ExperimentKind::heston2_pricing || k == ExperimentKind::cantor2_pricing;
}

enum class RegressionKind { lasso, ridge };

// How the Itô scheme of the Cantor calibration obtains its bracket column.
enum class CantorQv {
    clock,    // the simulated clock C(t), the exact QV of W_C
    follmer,  // the discrete Föllmer QV of the sampled W_C
};

struct SignatureSpec {
    int trunc_level = 2;  // N
    BracketConvention convention = BracketConvention::follmer;
    std::optional<std::vector<double>> strat_rho;  // per letter; Heston default (0, 1, rho)
    CantorQv cantor_qv = CantorQv::clock;
};

struct RegressionSpec {
    RegressionKind kind = RegressionKind::lasso;
    double alpha = 1e-5;
    bool standardize = false;
    double tol = 1e-10;
    int max_iter = 1000000;
};

struct SampleSizes {
    int n_train = 1;
    int n_test = 1000;
    int n_mc = 1;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::heston_calib;
    HestonParams heston{};
    Heston2Params heston2{};
    CantorParams cantor{};
    double T = 1.0;
    int n = 2000;
    double test_T = 0.5;  // calibration test horizon, same step size as training
    SignatureSpec signature{};
    RegressionSpec regression{};
    SampleSizes samples{};
    std::uint64_t master_seed = 0;
    std::string output_dir;
    unsigned threads = 0;  // 0: hardware concurrency; never affects results
    nlohmann::json check = nlohmann::json::object();

    SimGrid grid() const { return SimGrid{T, n, master_seed}; }
    int test_steps() const { return static_cast<int>(std::llround(test_T / (T / n))); }

    void validate() const;
    nlohmann::json to_json() const;
    std::string hash() const;
};

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    std::set<std::string> const ok(allowed.begin(), allowed.end());
    for (auto const& [k, v] : j.items()) {
        if (!ok.count(k)) {
            throw ConfigError(where + ": unknown key '" + k + "'");
        }
    }
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

inline HestonParams heston_from_json(const nlohmann::json& j, const std::string& where, HestonParams p) {
    check_keys(j, {"s0", "v0", "mu", "kappa", "theta", "sigma", "rho"}, where);
    read_opt(j, "s0", p.s0);
    read_opt(j, "v0", p.v0);
    read_opt(j, "mu", p.mu);
    read_opt(j, "kappa", p.kappa);
    read_opt(j, "theta", p.theta);
    read_opt(j, "sigma", p.sigma);
    read_opt(j, "rho", p.rho);
    return p;
}

inline nlohmann::json heston_to_json(const HestonParams& p) {
    return {{"s0", p.s0}, {"v0", p.v0},       {"mu", p.mu},  {"kappa", p.kappa},
            {"theta", p.theta}, {"sigma", p.sigma}, {"rho", p.rho}};
}

// Driver names in corr4 order.
inline int driver_index(const std::string& name) {
    static const char* const names[] = {"B1", "B2", "W1", "W2"};
    for (int i = 0; i < 4; ++i) {
        if (name == names[i]) {
            return i;
        }
    }
    throw ConfigError("heston2.correlations: unknown driver '" + name + "' (use B1, B2, W1, W2)");
}

inline Eigen::Matrix4d corr4_from_json(const nlohmann::json& j) {
    Eigen::Matrix4d c = Eigen::Matrix4d::Identity();
    for (auto const& [key, v] : j.items()) {
        if (key.size() != 4) {
            throw ConfigError("heston2.correlations: key '" + key + "' must name two drivers, e.g. B1W1");
        }
        int const a = driver_index(key.substr(0, 2));
        int const b = driver_index(key.substr(2, 2));
        if (a == b) {
            throw ConfigError("heston2.correlations: '" + key + "' pairs a driver with itself");
        }
        c(a, b) = c(b, a) = v.get<double>();
    }
    return c;
}

inline nlohmann::json corr4_to_json(const Eigen::Matrix4d& c) {
    static const char* const names[] = {"B1", "B2", "W1", "W2"};
    nlohmann::json out = nlohmann::json::object();
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            out[std::string(names[a]) + names[b]] = c(a, b);
        }
    }
    return out;
}

inline CantorParams cantor_from_json(const nlohmann::json& j, CantorParams p) {
    check_keys(j, {"s0", "vol", "nu", "rho", "cantor_depth"}, "model.cantor");
    read_opt(j, "s0", p.s0);
    read_opt(j, "nu", p.nu);
    read_opt(j, "rho", p.rho);
    read_opt(j, "cantor_depth", p.cantor_depth);
    if (j.contains("vol")) {
        auto const v = j.at("vol").get<std::string>();
        if (v == "tanh") {
            p.vol = CantorVol::tanh;
        } else if (v == "multiplicative") {
            p.vol = CantorVol::multiplicative;
        } else {
            throw ConfigError("model.cantor.vol: expected 'tanh' or 'multiplicative', got '" + v + "'");
        }
    }
    return p;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::heston_calib, ExperimentKind::cantor_calib, ExperimentKind::heston2_pricing,
                   ExperimentKind::cantor2_pricing, ExperimentKind::check}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("experiment: unknown id '" + s + "'");
}

/// Defaults per experiment id; a config file only needs to override what differs.
inline ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
        case ExperimentKind::heston_calib:
            break;
        case ExperimentKind::cantor_calib:
            c.cantor = CantorParams{};
            break;
        case ExperimentKind::heston2_pricing:
            c.heston2.assets[0] = HestonParams{100.0, 0.04, 0.0, 2.0, 0.04, 0.5, 0.0};
            c.heston2.assets[1] = HestonParams{80.0, 0.09, 0.0, 1.8, 0.09, 0.6, 0.0};
            c.heston2.corr4 = detail::corr4_from_json({{"B1B2", 0.3}, {"W1W2", 0.5}, {"B1W1", -0.6}, {"B2W2", -0.5}});
            break;
        case ExperimentKind::cantor2_pricing:
            c.cantor.s0 = {100.0, 80.0};
            c.cantor.vol = CantorVol::multiplicative;
            c.cantor.nu = {0.2, 0.3};
            c.cantor.rho = 0.6;
            break;
        case ExperimentKind::check:
            c.n = 200;
            break;
    }
    if (is_pricing(kind)) {
        c.n = 252;
        c.regression.kind = RegressionKind::ridge;
        c.regression.alpha = 1e-6;
        c.samples = SampleSizes{15000, 5000, 25000};
    }
    return c;
}

inline void ExperimentConfig::validate() const {
    try {
        grid().validate();
        if (signature.trunc_level < 1) {
            throw std::invalid_argument("signature.trunc_level must be >= 1");
        }
        if (samples.n_train < 1 || samples.n_test < 1 || samples.n_mc < 1) {
            throw std::invalid_argument("samples: n_train, n_test and n_mc must be >= 1");
        }
        if (!(regression.alpha >= 0.0) || !(regression.tol > 0.0) || regression.max_iter < 1) {
            throw std::invalid_argument("regression: need alpha >= 0, tol > 0, max_iter >= 1");
        }
        switch (kind) {
            case ExperimentKind::heston_calib:
                heston.validate();
                if (signature.strat_rho && signature.strat_rho->size() != 3) {
                    throw std::invalid_argument("signature.strat_rho needs one entry per letter (t, W, B)");
                }
                break;
            case ExperimentKind::cantor_calib:
                cantor.validate(1);
                if (T > 1.0) {
                    throw std::invalid_argument("grid.T must be <= 1 for the Cantor clock");
                }
                break;
            case ExperimentKind::heston2_pricing:
                heston2.validate();
                break;
            case ExperimentKind::cantor2_pricing:
                cantor.validate(2);
                if (T > 1.0) {
                    throw std::invalid_argument("grid.T must be <= 1 for the Cantor clock");
                }
                for (double s : cantor.s0) {
                    if (!(s > 0.0)) {
                        throw std::invalid_argument("model.cantor.s0 must be positive for log-price features");
                    }
                }
                break;
            case ExperimentKind::check:
                break;
        }
        if (is_calibration(kind)) {
            if (!(test_T > 0.0 && test_T <= T) || test_steps() < 1) {
                throw std::invalid_argument("grid.test_T must lie in (0, T] and span at least one step");
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config (") + to_string(kind) + "): " + e.what());
    }
}

inline nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json model = nlohmann::json::object();
    switch (kind) {
        case ExperimentKind::heston_calib:
            model["heston"] = detail::heston_to_json(heston);
            break;
        case ExperimentKind::heston2_pricing: {
            nlohmann::json assets = nlohmann::json::array();
            for (auto const& a : heston2.assets) {
                auto aj = detail::heston_to_json(a);
                aj.erase("rho");
                assets.push_back(aj);
            }
            model["heston2"] = {{"assets", assets}, {"correlations", detail::corr4_to_json(heston2.corr4)}};
            break;
        }
        case ExperimentKind::cantor_calib:
        case ExperimentKind::cantor2_pricing:
            model["cantor"] = {{"s0", cantor.s0},
                               {"vol", cantor.vol == CantorVol::tanh ? "tanh" : "multiplicative"},
                               {"nu", cantor.nu},
                               {"rho", cantor.rho},
                               {"cantor_depth", cantor.cantor_depth}};
            break;
        case ExperimentKind::check:
            break;
    }
    nlohmann::json sig = {{"trunc_level", signature.trunc_level},
                          {"bracket_convention", signature.convention == BracketConvention::follmer ? "follmer" : "scaled"},
                          {"cantor_qv", signature.cantor_qv == CantorQv::clock ? "clock" : "follmer"}};
    if (signature.strat_rho) {
        sig["strat_rho"] = *signature.strat_rho;
    }
    return {{"experiment", to_string(kind)},
            {"model", model},
            {"grid", {{"T", T}, {"n", n}, {"test_T", test_T}}},
            {"signature", sig},
            {"regression",
             {{"kind", regression.kind == RegressionKind::lasso ? "lasso" : "ridge"},
              {"alpha", regression.alpha},
              {"standardize", regression.standardize},
              {"tol", regression.tol},
              {"max_iter", regression.max_iter}}},
            {"samples", {{"n_train", samples.n_train}, {"n_test", samples.n_test}, {"n_mc", samples.n_mc}}},
            {"check", check},
            {"master_seed", master_seed},
            {"output_dir", output_dir}};
}

/// FNV-1a of the normalized config, excluding the seed and output directory
/// (both are reported separately).
inline std::string ExperimentConfig::hash() const {
    auto j = to_json();
    j.erase("master_seed");
    j.erase("output_dir");
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << detail::fnv1a(j.dump());
    return os.str();
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    try {
        detail::check_keys(j,
                           {"experiment", "model", "grid", "signature", "regression", "samples", "master_seed",
                            "output_dir", "threads", "check"},
                           "config");
        if (!j.contains("experiment")) {
            throw ConfigError("config: missing 'experiment'");
        }
        ExperimentConfig c = default_config(experiment_kind_from_string(j.at("experiment").get<std::string>()));
        if (j.contains("model")) {
            auto const& m = j.at("model");
            detail::check_keys(m, {"heston", "heston2", "cantor"}, "model");
            if (m.contains("heston")) {
                c.heston = detail::heston_from_json(m.at("heston"), "model.heston", c.heston);
            }
            if (m.contains("heston2")) {
                auto const& h = m.at("heston2");
                detail::check_keys(h, {"assets", "correlations", "corr4"}, "model.heston2");
                if (h.contains("assets")) {
                    auto const& a = h.at("assets");
                    if (!a.is_array() || a.size() != 2) {
                        throw ConfigError("model.heston2.assets: expected two assets");
                    }
                    for (std::size_t i = 0; i < 2; ++i) {
                        c.heston2.assets[i] = detail::heston_from_json(a[i], "model.heston2.assets", c.heston2.assets[i]);
                        c.heston2.assets[i].rho = 0.0;
                    }
                }
                if (h.contains("correlations") && h.contains("corr4")) {
                    throw ConfigError("model.heston2: give either 'correlations' or 'corr4'");
                }
                if (h.contains("correlations")) {
                    c.heston2.corr4 = detail::corr4_from_json(h.at("correlations"));
                }
                if (h.contains("corr4")) {
                    auto const rows = h.at("corr4").get<std::vector<std::vector<double>>>();
                    if (rows.size() != 4) {
                        throw ConfigError("model.heston2.corr4: expected a 4x4 matrix");
                    }
                    for (int r = 0; r < 4; ++r) {
                        if (rows[static_cast<std::size_t>(r)].size() != 4) {
                            throw ConfigError("model.heston2.corr4: expected a 4x4 matrix");
                        }
                        for (int s = 0; s < 4; ++s) {
                            c.heston2.corr4(r, s) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
                        }
                    }
                }
            }
            if (m.contains("cantor")) {
                c.cantor = detail::cantor_from_json(m.at("cantor"), c.cantor);
            }
        }
        if (j.contains("grid")) {
            auto const& g = j.at("grid");
            detail::check_keys(g, {"T", "n", "test_T"}, "grid");
            detail::read_opt(g, "T", c.T);
            detail::read_opt(g, "n", c.n);
            if (g.contains("test_T")) {
                c.test_T = g.at("test_T").get<double>();
            } else {
                c.test_T = c.T / 2;
            }
        }
        if (j.contains("signature")) {
            auto const& s = j.at("signature");
            detail::check_keys(s, {"trunc_level", "bracket_convention", "strat_rho", "cantor_qv"}, "signature");
            detail::read_opt(s, "trunc_level", c.signature.trunc_level);
            if (s.contains("bracket_convention")) {
                auto const v = s.at("bracket_convention").get<std::string>();
                if (v == "follmer") {
                    c.signature.convention = BracketConvention::follmer;
                } else if (v == "scaled") {
                    c.signature.convention = BracketConvention::scaled;
                } else {
                    throw ConfigError("signature.bracket_convention: expected 'follmer' or 'scaled'");
                }
            }
            if (s.contains("strat_rho")) {
                c.signature.strat_rho = s.at("strat_rho").get<std::vector<double>>();
            }
            if (s.contains("cantor_qv")) {
                auto const v = s.at("cantor_qv").get<std::string>();
                if (v == "clock") {
                    c.signature.cantor_qv = CantorQv::clock;
                } else if (v == "follmer") {
                    c.signature.cantor_qv = CantorQv::follmer;
                } else {
                    throw ConfigError("signature.cantor_qv: expected 'clock' or 'follmer'");
                }
            }
        }
        if (j.contains("regression")) {
            auto const& r = j.at("regression");
            detail::check_keys(r, {"kind", "alpha", "standardize", "tol", "max_iter"}, "regression");
            if (r.contains("kind")) {
                auto const v = r.at("kind").get<std::string>();
                if (v == "lasso") {
                    c.regression.kind = RegressionKind::lasso;
                } else if (v == "ridge") {
                    c.regression.kind = RegressionKind::ridge;
                } else {
                    throw ConfigError("regression.kind: expected 'lasso' or 'ridge'");
                }
            }
            detail::read_opt(r, "alpha", c.regression.alpha);
            detail::read_opt(r, "standardize", c.regression.standardize);
            detail::read_opt(r, "tol", c.regression.tol);
            detail::read_opt(r, "max_iter", c.regression.max_iter);
        }
        if (j.contains("samples")) {
            auto const& s = j.at("samples");
            detail::check_keys(s, {"n_train", "n_test", "n_mc"}, "samples");
            detail::read_opt(s, "n_train", c.samples.n_train);
            detail::read_opt(s, "n_test", c.samples.n_test);
            detail::read_opt(s, "n_mc", c.samples.n_mc);
        }
        detail::read_opt(j, "master_seed", c.master_seed);
        detail::read_opt(j, "output_dir", c.output_dir);
        detail::read_opt(j, "threads", c.threads);
        if (j.contains("check")) {
            c.check = j.at("check");
        }
        c.validate();
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open config file '" + file + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + file + "': " + e.what());
    }
    return config_from_json(j);
}

// Output helpers ---------------------------------------------------------------

inline std::string header_line(const std::string& hash, std::uint64_t seed) {
    return "# itosig config_hash=" + hash + " seed=" + std::to_string(seed);
}

inline nlohmann::json meta_json(const std::string& hash, std::uint64_t seed) {
    return {{"config_hash", hash}, {"seed", seed}};
}

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    }
    return out;
}

// Path index ranges for the independent samples of one experiment.
inline constexpr std::uint64_t kTestStream = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kMcStream = std::uint64_t{2} << 32;

// Calibration ------------------------------------------------------------------

struct SchemeResult {
    std::string scheme;  // "strat" or "ito"
    RegressionFit fit;
    double in_sample_mse = 0.0;
    double out_sample_mse = 0.0;
};

struct CalibrationReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<SchemeResult> schemes;
    std::vector<double> t, target, pred_strat, pred_ito;
    int degenerate_steps = 0;
};

/// Word-indexed feature functionals of one calibration scheme.
struct FeatureScheme {
    std::vector<std::string> labels;  // the word I of each coefficient ℓ_I
    std::vector<TensorPoly<double>> functionals;
    double gamma = 0.0;
    int sig_level = 0;
};

/// ẽ_I = e_I⊗e_1 − ½ ρ_{i_last} e_{I'}⊗e_0 for |I| <= N, with ẽ_∅ = e_1.
inline FeatureScheme heston_strat_scheme(int N, const std::vector<double>& rho) {
    Alphabet const a(2, true, false);
    FeatureScheme s{{}, {}, 0.5, N + 1};
    for (auto const& I : enumerate_words(a, N)) {
        auto f = TensorPoly<double>::basis(a, N + 1, I.appended(a.path(1)));
        if (!I.empty()) {
            double const r = rho.at(I.back());
            if (r != 0.0) {
                f = f - TensorPoly<double>::basis(a, N + 1, I.prefix().appended(a.time()), 0.5 * r);
            }
        }
        s.labels.push_back(to_string(I));
        s.functionals.push_back(std::move(f));
    }
    return s;
}

/// e_I⊗e_1 for |I| <= max_len on an alphabet whose letter 1 is the asset driver.
inline FeatureScheme ito_scheme(const Alphabet& a, int max_len) {
    FeatureScheme s{{}, {}, 0.0, max_len + 1};
    for (auto const& I : enumerate_words(a, max_len)) {
        s.labels.push_back(to_string(I));
        s.functionals.push_back(TensorPoly<double>::basis(a, max_len + 1, I.appended(a.path(1))));
    }
    return s;
}

/// e_I for 1 <= |I| <= N; the empty word is pinned to S_0.
inline FeatureScheme plain_scheme(const Alphabet& a, int N, double gamma) {
    FeatureScheme s{{}, {}, gamma, N};
    for (auto const& I : enumerate_words(a, N)) {
        if (I.empty()) {
            continue;
        }
        s.labels.push_back(to_string(I));
        s.functionals.push_back(TensorPoly<double>::basis(a, N, I));
    }
    return s;
}

/// The two schemes' input paths for one simulated calibration path.
struct CalibrationInputs {
    SamplePath strat_path;
    SamplePath ito_path;
    std::vector<double> target;
};

inline CalibrationInputs calibration_inputs(const ExperimentConfig& c, const SamplePath& sim) {
    std::vector<double> target(sim.points());
    for (std::size_t k = 0; k < sim.points(); ++k) {
        target[k] = sim.value(k, 0);
    }
    if (c.kind == ExperimentKind::heston_calib) {
        auto const drivers = sim.columns({2, 3});  // (W^Q, B^Q)
        return {augment_path(drivers, 0.5, true, false), augment_path(drivers, 0.0, true, false), std::move(target)};
    }
    auto const w = sim.columns({1});
    SamplePath ito_path = [&] {
        if (c.signature.cantor_qv == CantorQv::follmer) {
            return augment_path(w, 0.0, true, true, c.signature.convention);
        }
        std::vector<double> v;
        v.reserve(sim.points() * 3);
        for (std::size_t k = 0; k < sim.points(); ++k) {
            v.insert(v.end(), {sim.times()[k], sim.value(k, 1), sim.value(k, 2) - sim.value(0, 2)});
        }
        return SamplePath(std::vector<double>(sim.times().begin(), sim.times().end()), std::move(v),
                          Alphabet(1, true, true));
    }();
    return {augment_path(w, 0.5, true, false), std::move(ito_path), std::move(target)};
}

struct CalibrationSchemes {
    FeatureScheme strat;
    FeatureScheme ito;
};

inline CalibrationSchemes calibration_schemes(const ExperimentConfig& c) {
    int const N = c.signature.trunc_level;
    if (c.kind == ExperimentKind::heston_calib) {
        auto const rho = c.signature.strat_rho.value_or(std::vector<double>{0.0, 1.0, c.heston.rho});
        return {heston_strat_scheme(N, rho), ito_scheme(Alphabet(2, true, false), N)};
    }
    return {plain_scheme(Alphabet(1, true, false), N, 0.5), ito_scheme(Alphabet(1, true, true), N - 1)};
}

/// Features at every grid point t_0..t_n (row 0 is identically zero).
inline Eigen::MatrixXd scheme_features(const FeatureScheme& s, const SamplePath& path) {
    return functional_matrix(gamma_signature(path, s.gamma, s.sig_level), s.functionals, 0);
}

inline SimulatedPath simulate_calibration_path(const ExperimentConfig& c, const SimGrid& grid, std::uint64_t index) {
    if (c.kind == ExperimentKind::heston_calib) {
        return simulate_heston(c.heston, grid, index);
    }
    return simulate_cantor_sde(c.cantor, grid, index, 1);
}

inline RegressionFit fit_scheme(const ExperimentConfig& c, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                double s0, const std::vector<std::string>& labels) {
    if (c.regression.kind == RegressionKind::ridge) {
        // ridge has no offset; regress the excess over S_0 and pin it back
        RegressionFit fit = ridge_fit(X, (y.array() - s0).matrix(), c.regression.alpha, labels);
        fit.offset = s0;
        fit.pinned_intercept = true;
        fit.diagnostics.in_sample_mse = mse(predict(fit, X), y);
        return fit;
    }
    LassoOptions o;
    o.max_iter = c.regression.max_iter;
    o.tol = c.regression.tol;
    o.offset = s0;
    o.pin_intercept = true;
    o.standardize = c.regression.standardize;
    o.words = labels;
    return lasso_fit(X, y, c.regression.alpha, o);
}

inline CalibrationReport run_calibration(const ExperimentConfig& c) {
    if (!is_calibration(c.kind)) {
        throw ConfigError(std::string("calibrate: experiment '") + to_string(c.kind) + "' is not a calibration");
    }
    c.validate();
    auto const schemes = calibration_schemes(c);
    SimGrid const grid = c.grid();
    auto const sim = simulate_calibration_path(c, grid, 0);
    auto const in = calibration_inputs(c, sim.path);
    auto const n = static_cast<Eigen::Index>(grid.n);
    Eigen::VectorXd const y = Eigen::Map<const Eigen::VectorXd>(in.target.data() + 1, n);
    double const s0 = in.target.front();

    CalibrationReport rep;
    rep.config_hash = c.hash();
    rep.seed = c.master_seed;
    rep.degenerate_steps = sim.degenerate_steps;
    rep.t.assign(sim.path.times().begin(), sim.path.times().end());
    rep.target = in.target;

    std::vector<const FeatureScheme*> const order{&schemes.strat, &schemes.ito};
    std::vector<const SamplePath*> const paths{&in.strat_path, &in.ito_path};
    char const* const names[] = {"strat", "ito"};
    for (std::size_t s = 0; s < 2; ++s) {
        Eigen::MatrixXd const F = scheme_features(*order[s], *paths[s]);
        SchemeResult r;
        r.scheme = names[s];
        r.fit = fit_scheme(c, F.bottomRows(n), y, s0, order[s]->labels);
        r.in_sample_mse = r.fit.diagnostics.in_sample_mse;
        Eigen::VectorXd const pred = predict(r.fit, F);
        (s == 0 ? rep.pred_strat : rep.pred_ito).assign(pred.data(), pred.data() + pred.size());
        rep.schemes.push_back(std::move(r));
    }

    // fresh paths on [0, test_T] with the training step size
    SimGrid const test_grid{c.test_T, c.test_steps(), c.master_seed};
    auto const n_test = static_cast<std::size_t>(c.samples.n_test);
    std::vector<double> errs(n_test * 2);
    parallel_for(
        n_test,
        [&](std::size_t j) {
            auto const tsim = simulate_calibration_path(c, test_grid, kTestStream + j);
            auto const tin = calibration_inputs(c, tsim.path);
            auto const m = static_cast<Eigen::Index>(test_grid.n);
            Eigen::VectorXd const ty = Eigen::Map<const Eigen::VectorXd>(tin.target.data() + 1, m);
            for (std::size_t s = 0; s < 2; ++s) {
                Eigen::MatrixXd const F = scheme_features(*order[s], s == 0 ? tin.strat_path : tin.ito_path);
                auto fit = rep.schemes[s].fit;
                fit.offset = tin.target.front();
                errs[j * 2 + s] = mse(predict(fit, F.bottomRows(m)), ty);
            }
        },
        c.threads);
    for (std::size_t s = 0; s < 2; ++s) {
        detail::CompensatedSum acc;
        for (std::size_t j = 0; j < n_test; ++j) {
            acc.add(errs[j * 2 + s]);
        }
        rep.schemes[s].out_sample_mse = acc.value() / static_cast<double>(n_test);
    }
    return rep;
}

inline void write_calibration(const CalibrationReport& rep, const std::filesystem::path& dir) {
    auto const head = header_line(rep.config_hash, rep.seed);
    {
        auto out = open_output(dir, "mse_summary.csv");
        out << head << "\nscheme,in_sample_mse,out_sample_mse\n";
        for (auto const& s : rep.schemes) {
            out << s.scheme << ',' << format_double(s.in_sample_mse) << ',' << format_double(s.out_sample_mse)
                << '\n';
        }
    }
    {
        auto out = open_output(dir, "trajectory.csv");
        out << head << "\nt,target,pred_strat,pred_ito\n";
        for (std::size_t k = 0; k < rep.t.size(); ++k) {
            out << format_double(rep.t[k]) << ',' << format_double(rep.target[k]) << ','
                << format_double(rep.pred_strat[k]) << ',' << format_double(rep.pred_ito[k]) << '\n';
        }
    }
    for (auto const& s : rep.schemes) {
        auto j = to_json(s.fit);
        j["meta"] = meta_json(rep.config_hash, rep.seed);
        j["out_sample_mse"] = s.out_sample_mse;
        auto out = open_output(dir, "fit_" + s.scheme + ".json");
        out << j.dump(2) << '\n';
    }
}

// Pricing ----------------------------------------------------------------------

struct PricingScheme {
    std::string scheme;
    RegressionFit fit;
    double in_sample_mse = 0.0;
    double out_sample_mse = 0.0;
    double price = 0.0;
};

struct PayoffResult {
    PayoffSpec spec;
    bool skipped = false;
    std::string skip_reason;
    double mc_price = 0.0;
    double mc_stderr = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::vector<PricingScheme> schemes;
};

struct PricingReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<PayoffResult> payoffs;
    int rejected_paths = 0;  // paths with a non-positive price, excluded
    std::vector<std::string> strat_words, ito_words;
};

/// End-point features and payoff statistics of one sample.
struct PricingSample {
    Eigen::MatrixXd strat;  // rows: paths
    Eigen::MatrixXd ito;
    Eigen::MatrixXd stats;  // rows: paths, cols: payoffs; NaN where undefined
    int rejected = 0;
};

/// Log-price path of the two assets, shifted to start at zero. Empty if a
/// price is not positive.
inline std::optional<SamplePath> log_price_path(const SamplePath& sim) {
    std::vector<double> v;
    v.reserve(sim.points() * 2);
    double const l0 = std::log(sim.value(0, 0));
    double const l1 = std::log(sim.value(0, 1));
    for (std::size_t k = 0; k < sim.points(); ++k) {
        double const a = sim.value(k, 0);
        double const b = sim.value(k, 1);
        if (!(a > 0.0) || !(b > 0.0)) {
            return std::nullopt;
        }
        v.push_back(std::log(a) - l0);
        v.push_back(std::log(b) - l1);
    }
    return SamplePath(std::vector<double>(sim.times().begin(), sim.times().end()), std::move(v), 2);
}

inline PricingSample pricing_sample(const ExperimentConfig& c, const std::vector<PayoffSpec>& specs,
                                    std::uint64_t first_index, int count) {
    SimGrid const grid = c.grid();
    int const N = c.signature.trunc_level;
    DenseLayout const ls(Alphabet(2, true, false).size(), N);
    DenseLayout const li(Alphabet(2, true, true).size(), N);
    auto const rows = static_cast<std::size_t>(count);
    std::vector<std::vector<double>> strat(rows), ito(rows), stats(rows);
    std::vector<char> ok(rows, 0);
    parallel_for(
        rows,
        [&](std::size_t i) {
            auto const sim = c.kind == ExperimentKind::heston2_pricing
                                 ? simulate_heston2(c.heston2, grid, first_index + i)
                                 : simulate_cantor_sde(c.cantor, grid, first_index + i, 2);
            auto const lp = log_price_path(sim.path);
            if (!lp) {
                return;
            }
            strat[i] = end_signature(augment_path(*lp, 0.5, true, false), 0.5, N);
            ito[i] = end_signature(augment_path(*lp, 0.0, true, true, c.signature.convention), 0.0, N);
            for (auto const& sp : specs) {
                auto const rs = realized_stats(*lp, sp.asset_i, sp.asset_j);
                stats[i].push_back(needs_corr(sp.kind) && !rs.corr_ij ? std::nan("") : statistic(sp, rs));
            }
            ok[i] = 1;
        },
        c.threads);
    PricingSample out;
    std::size_t kept = 0;
    for (char f : ok) {
        kept += f ? 1 : 0;
    }
    out.rejected = static_cast<int>(rows - kept);
    out.strat.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(ls.size()));
    out.ito.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(li.size()));
    out.stats.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(specs.size()));
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!ok[i]) {
            continue;
        }
        for (std::size_t k = 0; k < strat[i].size(); ++k) {
            out.strat(r, static_cast<Eigen::Index>(k)) = strat[i][k];
        }
        for (std::size_t k = 0; k < ito[i].size(); ++k) {
            out.ito(r, static_cast<Eigen::Index>(k)) = ito[i][k];
        }
        for (std::size_t k = 0; k < specs.size(); ++k) {
            out.stats(r, static_cast<Eigen::Index>(k)) = stats[i][k];
        }
        ++r;
    }
    if (kept == 0) {
        throw std::runtime_error("pricing: every simulated path has a non-positive price");
    }
    return out;
}

inline std::vector<std::string> dense_labels(const Alphabet& a, int N) {
    DenseLayout const layout(a.size(), N);
    std::vector<std::string> out(layout.size());
    for (auto const& w : enumerate_words(a, N)) {
        out[layout.index(w)] = to_string(w);
    }
    return out;
}

inline double mean_of(const Eigen::VectorXd& v) {
    detail::CompensatedSum acc;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        acc.add(v[i]);
    }
    return acc.value() / static_cast<double>(v.size());
}

inline PricingReport run_pricing(const ExperimentConfig& c) {
    if (!is_pricing(c.kind)) {
        throw ConfigError(std::string("price: experiment '") + to_string(c.kind) + "' is not a pricing experiment");
    }
    c.validate();
    auto specs = standard_payoffs();
    auto const train = pricing_sample(c, specs, 0, c.samples.n_train);
    auto const test = pricing_sample(c, specs, kTestStream, c.samples.n_test);
    auto const mc = pricing_sample(c, specs, kMcStream, c.samples.n_mc);

    PricingReport rep;
    rep.config_hash = c.hash();
    rep.seed = c.master_seed;
    rep.rejected_paths = train.rejected + test.rejected + mc.rejected;
    rep.strat_words = dense_labels(Alphabet(2, true, false), c.signature.trunc_level);
    rep.ito_words = dense_labels(Alphabet(2, true, true), c.signature.trunc_level);

    for (std::size_t p = 0; p < specs.size(); ++p) {
        auto const col = static_cast<Eigen::Index>(p);
        PayoffResult res;
        auto const undefined = [&](const PricingSample& s) { return !s.stats.col(col).allFinite(); };
        if (undefined(train) || undefined(test) || undefined(mc)) {
            res.spec = specs[p];
            res.spec.strike = std::nan("");
            res.skipped = true;
            res.skip_reason = "realized correlation undefined on a path with zero realized variance";
            rep.payoffs.push_back(std::move(res));
            continue;
        }
        specs[p].strike = mean_of(train.stats.col(col));
        res.spec = specs[p];
        auto const payoff = [&](const PricingSample& s) {
            Eigen::VectorXd y(s.stats.rows());
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                y[i] = payoff_from_statistic(specs[p], s.stats(i, col));
            }
            return y;
        };
        Eigen::VectorXd const y_train = payoff(train);
        Eigen::VectorXd const y_test = payoff(test);
        Eigen::VectorXd const y_mc = payoff(mc);
        res.mc_price = mean_of(y_mc);
        double const m = static_cast<double>(y_mc.size());
        double const var = y_mc.size() > 1 ? (y_mc.array() - res.mc_price).square().sum() / (m - 1.0) : 0.0;
        res.mc_stderr = std::sqrt(var / m);
        res.ci_lo = res.mc_price - 1.96 * res.mc_stderr;
        res.ci_hi = res.mc_price + 1.96 * res.mc_stderr;

        struct Part {
            const char* name;
            const Eigen::MatrixXd PricingSample::*X;
            const std::vector<std::string>* words;
        };
        for (auto const& part : {Part{"strat", &PricingSample::strat, &rep.strat_words},
                                 Part{"ito", &PricingSample::ito, &rep.ito_words}}) {
            PricingScheme ps;
            ps.scheme = part.name;
            if (c.regression.kind == RegressionKind::ridge) {
                ps.fit = ridge_fit(train.*part.X, y_train, c.regression.alpha, *part.words);
            } else {
                LassoOptions o;
                o.max_iter = c.regression.max_iter;
                o.tol = c.regression.tol;
                o.pin_intercept = false;
                o.standardize = c.regression.standardize;
                o.words = *part.words;
                ps.fit = lasso_fit(train.*part.X, y_train, c.regression.alpha, o);
            }
            ps.in_sample_mse = ps.fit.diagnostics.in_sample_mse;
            ps.out_sample_mse = mse(predict(ps.fit, test.*part.X), y_test);
            ps.price = mean_of(predict(ps.fit, mc.*part.X));
            res.schemes.push_back(std::move(ps));
        }
        rep.payoffs.push_back(std::move(res));
    }
    return rep;
}

inline void write_pricing(const PricingReport& rep, const std::filesystem::path& dir) {
    auto const head = header_line(rep.config_hash, rep.seed);
    {
        auto out = open_output(dir, "prices.csv");
        out << head << "\npayoff,scheme,price,mc_price,ci_lo,ci_hi\n";
        for (auto const& p : rep.payoffs) {
            for (auto const& s : p.schemes) {
                out << p.spec.name() << ',' << s.scheme << ',' << format_double(s.price) << ','
                    << format_double(p.mc_price) << ',' << format_double(p.ci_lo) << ',' << format_double(p.ci_hi)
                    << '\n';
            }
        }
    }
    {
        auto out = open_output(dir, "mse_summary.csv");
        out << head << "\npayoff,scheme,in_sample_mse,out_sample_mse\n";
        for (auto const& p : rep.payoffs) {
            for (auto const& s : p.schemes) {
                out << p.spec.name() << ',' << s.scheme << ',' << format_double(s.in_sample_mse) << ','
                    << format_double(s.out_sample_mse) << '\n';
            }
        }
    }
    {
        auto out = open_output(dir, "strikes.csv");
        out << head << "\npayoff,strike,status\n";
        for (auto const& p : rep.payoffs) {
            out << p.spec.name() << ',' << (p.skipped ? std::string("nan") : format_double(p.spec.strike)) << ','
                << (p.skipped ? "skipped: " + p.skip_reason : std::string("ok")) << '\n';
        }
    }
    for (const char* scheme : {"strat", "ito"}) {
        nlohmann::json j;
        j["meta"] = meta_json(rep.config_hash, rep.seed);
        j["rejected_paths"] = rep.rejected_paths;
        nlohmann::json fits = nlohmann::json::object();
        for (auto const& p : rep.payoffs) {
            if (p.skipped) {
                fits[p.spec.name()] = {{"skipped", p.skip_reason}};
                continue;
            }
            for (auto const& s : p.schemes) {
                if (s.scheme == scheme) {
                    auto fj = to_json(s.fit);
                    fj["strike"] = p.spec.strike;
                    fj["out_sample_mse"] = s.out_sample_mse;
                    fj["price"] = s.price;
                    fits[p.spec.name()] = fj;
                }
            }
        }
        j["payoffs"] = fits;
        auto out = open_output(dir, std::string("fit_") + scheme + ".json");
        out << j.dump(2) << '\n';
    }
}

}  // namespace itosig

#endif  // ITOSIG_EXPERIMENTS_HPP
