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

// Command-line front end: check, calibrate, price, sigdump.
// Exit codes: 0 success, 1 check failure, 2 configuration or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "itosig/checks.hpp"
#include "itosig/experiments.hpp"
#include "itosig/io.hpp"
#include "itosig/signature.hpp"

namespace {

using namespace itosig;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common(CLI::App* app, CommonFlags& f, bool config_required) {
    auto* opt = app->add_option("--config", f.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    if (config_required) {
        opt->required();
    }
    app->add_option("--seed", f.seed, "master seed (overrides the config)");
    app->add_option("--out", f.out, "output directory (overrides the config)");
}

ExperimentConfig resolve(const CommonFlags& f, ExperimentKind fallback) {
    ExperimentConfig c = f.config.empty() ? default_config(fallback) : load_config(f.config);
    if (f.seed) {
        c.master_seed = *f.seed;
    }
    if (!f.out.empty()) {
        c.output_dir = f.out;
    }
    if (c.output_dir.empty()) {
        c.output_dir = std::string("results/") + to_string(c.kind);
    }
    return c;
}

int cmd_check(const CommonFlags& f, const std::string& filter) {
    auto const c = resolve(f, ExperimentKind::check);
    if (c.kind != ExperimentKind::check) {
        throw ConfigError(std::string("check: config experiment is '") + to_string(c.kind) + "', expected 'check'");
    }
    auto const rep = run_checks(c, filter);
    for (auto const& r : rep.results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name;
        if (!r.passed) {
            std::cout << ": " << r.detail;
        }
        std::cout << '\n';
    }
    auto out = open_output(c.output_dir, "check_summary.json");
    out << rep.to_json().dump(2) << '\n';
    std::cout << (rep.passed() ? "all checks passed" : "some checks FAILED") << " (" << rep.results.size()
              << " checks; summary in " << (std::filesystem::path(c.output_dir) / "check_summary.json").string()
              << ")\n";
    return rep.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_calibrate(const CommonFlags& f) {
    auto const c = resolve(f, ExperimentKind::heston_calib);
    auto const rep = run_calibration(c);
    write_calibration(rep, c.output_dir);
    std::cout << header_line(rep.config_hash, rep.seed) << '\n' << "scheme,in_sample_mse,out_sample_mse\n";
    for (auto const& s : rep.schemes) {
        std::cout << s.scheme << ',' << format_double(s.in_sample_mse) << ',' << format_double(s.out_sample_mse)
                  << '\n';
        if (!s.fit.diagnostics.converged) {
            std::cerr << "warning: " << s.scheme << " lasso stopped at max_iter without meeting tol\n";
        }
    }
    if (rep.degenerate_steps > 0) {
        std::cerr << "warning: " << rep.degenerate_steps << " steps with vanishing variance in the training path\n";
    }
    return kExitOk;
}

int cmd_price(const CommonFlags& f) {
    auto const c = resolve(f, ExperimentKind::heston2_pricing);
    auto const rep = run_pricing(c);
    write_pricing(rep, c.output_dir);
    std::cout << header_line(rep.config_hash, rep.seed) << '\n' << "payoff,scheme,price,mc_price,ci_lo,ci_hi\n";
    for (auto const& p : rep.payoffs) {
        if (p.skipped) {
            std::cerr << "skipped " << p.spec.name() << ": " << p.skip_reason << '\n';
        }
        for (auto const& s : p.schemes) {
            std::cout << p.spec.name() << ',' << s.scheme << ',' << format_double(s.price) << ','
                      << format_double(p.mc_price) << ',' << format_double(p.ci_lo) << ','
                      << format_double(p.ci_hi) << '\n';
        }
    }
    if (rep.rejected_paths > 0) {
        std::cerr << "warning: " << rep.rejected_paths << " paths with a non-positive price were excluded\n";
    }
    return kExitOk;
}

struct SigdumpFlags {
    std::string input;
    double gamma = 0.0;
    int level = 2;
    bool time = false;
    bool brackets = false;
    std::string convention = "follmer";
    bool end_only = false;
    std::string out;
};

int cmd_sigdump(const SigdumpFlags& f) {
    std::ifstream in(f.input);
    if (!in) {
        throw ConfigError("sigdump: cannot open '" + f.input + "'");
    }
    SamplePath path = [&] {
        try {
            return read_path_csv(in);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sigdump: ") + e.what());
        }
    }();
    BracketConvention conv = BracketConvention::follmer;
    if (f.convention == "scaled") {
        conv = BracketConvention::scaled;
    } else if (f.convention != "follmer") {
        throw ConfigError("sigdump: --convention must be 'follmer' or 'scaled'");
    }
    if (f.level < 0) {
        throw ConfigError("sigdump: --level must be >= 0");
    }
    if (f.time || f.brackets) {
        path = augment_path(path, f.gamma, f.time, f.brackets, conv);
    }
    auto traj = gamma_signature(path, f.gamma, f.level);
    nlohmann::json const params = {{"input", std::filesystem::path(f.input).filename().string()},
                                   {"gamma", f.gamma},
                                   {"level", f.level},
                                   {"time", f.time},
                                   {"brackets", f.brackets},
                                   {"convention", f.convention}};
    std::ostringstream hs;
    hs << std::hex;
    hs.width(16);
    hs.fill('0');
    hs << detail::fnv1a(params.dump());
    if (f.end_only) {
        auto const end = traj.points() - 1;
        traj = SigTrajectory({traj.times()[end]}, traj.alphabet(), traj.gamma(), traj.trunc_level(),
                             std::vector<double>(traj.row(end).begin(), traj.row(end).end()));
    }
    auto emit = [&](std::ostream& os) {
        os << header_line(hs.str(), 0) << '\n';
        write_signature_csv(os, traj);
    };
    if (f.out.empty()) {
        emit(std::cout);
    } else {
        auto out = open_output(f.out, "signature.csv");
        emit(out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"itosig: discrete gamma-signatures, signature regression experiments and invariant checks"};
    app.require_subcommand(1);

    CommonFlags check_flags, calib_flags, price_flags;
    std::string filter;
    auto* check = app.add_subcommand("check", "run the invariant suites");
    add_common(check, check_flags, false);
    check->add_option("--filter", filter, "run one suite: tensor, signature, models, regress, payoffs, cli");

    auto* calibrate = app.add_subcommand("calibrate", "fit Stratonovich and Itô signature models to one path");
    add_common(calibrate, calib_flags, true);

    auto* price = app.add_subcommand("price", "price realized-variance payoffs by signature regression");
    add_common(price, price_flags, true);

    SigdumpFlags sd;
    auto* sigdump = app.add_subcommand("sigdump", "write the gamma-signature of a path CSV");
    sigdump->add_option("--input", sd.input, "path CSV with header t,x1,...,xd")->required()->check(CLI::ExistingFile);
    sigdump->add_option("--gamma", sd.gamma, "gamma (0 Itô, 0.5 Stratonovich, 1 backward)");
    sigdump->add_option("--level", sd.level, "truncation level");
    sigdump->add_flag("--time", sd.time, "prepend the time letter");
    sigdump->add_flag("--brackets", sd.brackets, "append quadratic-variation letters");
    sigdump->add_option("--convention", sd.convention, "bracket convention: follmer or scaled");
    sigdump->add_flag("--end", sd.end_only, "only the terminal signature");
    sigdump->add_option("--out", sd.out, "output directory (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int const rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*check) {
            return cmd_check(check_flags, filter);
        }
        if (*calibrate) {
            return cmd_calibrate(calib_flags);
        }
        if (*price) {
            return cmd_price(price_flags);
        }
        return cmd_sigdump(sd);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
