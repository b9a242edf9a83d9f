// Batch experiment runner for the inequality workbench: exact dyadic
// coefficients, identity property suites, seminorm estimation, the two
// logarithmic inequalities with proof-chain replay, and the sharpness sweep.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "bgw/parallel.hpp"
#include "bgw/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;

int cmd_coeffs(int k, bool as_json) {
    const bgw::DyadicCoefficients coeffs = bgw::solve_dyadic_system(k);
    if (as_json) {
        std::cout << bgw::to_json(coeffs).dump(2) << '\n';
        return kExitOk;
    }
    std::cout << "a = [";
    for (std::size_t j = 0; j < coeffs.a.size(); ++j) {
        if (j) std::cout << ", ";
        std::cout << bgw::to_string(coeffs.a[j]);
    }
    std::cout << "], a_comb = " << bgw::to_string(coeffs.a_combined) << '\n';
    return kExitOk;
}

bgw::Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 20);
    return bgw::Rational(num(rng), den(rng));
}

int cmd_identities(long trials, unsigned long seed, bool inject_corruption) {
    std::vector<bgw::DyadicCoefficients> solved;
    for (int k = 0; k <= 5; ++k) solved.push_back(bgw::solve_dyadic_system(k));
    if (inject_corruption) {
        for (auto& c : solved) c.a[1] += bgw::Rational(1, 7);
    }

    bool annihilation_ok = true;
    if (!inject_corruption) {
        for (int k = 0; k <= 5; ++k)
            for (int l = 0; l <= k; ++l)
                if (bgw::polynomial_annihilation_check(k, l) != 0) annihilation_ok = false;
    } else {
        // With corrupted coefficients the combination must fail to annihilate.
        bool any_nonzero = false;
        for (int k = 0; k <= 5; ++k) {
            bgw::Rational residual = 0;
            for (int j = 0; j <= k + 1; ++j)
                residual += solved[k].a[j] * bgw::monomial_annulus_average_exact(0, j);
            if (residual != 0) any_nonzero = true;
        }
        annihilation_ok = !any_nonzero;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_k(0, 5);
    std::uniform_int_distribution<int> pick_m(1, 8);
    long pass = 0;
    for (long t = 0; t < trials; ++t) {
        const int k = pick_k(rng);
        const int m = pick_m(rng);
        const bgw::DyadicCoefficients& coeffs = solved[k];
        const bgw::Rational b = random_rational(rng);
        bgw::DyadicSequence seq;
        for (int l = -m; l <= k + m; ++l) seq[l] = random_rational(rng);
        const auto sides = bgw::telescoping_combine(coeffs, b, seq, m);
        const auto tb = bgw::triangle_bound(coeffs, b, seq, m);
        if (sides.lhs == sides.rhs && tb.holds) ++pass;
    }

    std::cout << pass << "/" << trials << " pass";
    if (!annihilation_ok) std::cout << " (annihilation suite FAILED)";
    std::cout << '\n';
    return (pass == trials && annihilation_ok) ? kExitOk : kExitPropertyFailure;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
}

int cmd_seminorm(const std::string& config_path, const std::string& kind, const std::string& out) {
    const bgw::ExperimentConfig cfg = bgw::load_experiment_config(config_path);
    bgw::validate_for_seminorm(cfg);
    if (cfg.workers > 0) bgw::set_worker_count(cfg.workers);
    const bgw::GridField f = bgw::realize_field(cfg);

    bgw::SeminormReport rep;
    if (kind == "bmo") {
        rep = bgw::bmo_norm(f);
    } else if (kind == "holder") {
        rep = bgw::holder_seminorm(f, cfg.eta);
    } else if (kind == "sobolev") {
        rep = bgw::sobolev_seminorm(f, cfg.s, cfg.p);
    } else if (kind == "wsup") {
        rep = bgw::weighted_sup_integral(f, cfg.alpha);
    } else {
        throw std::invalid_argument("unknown seminorm kind '" + kind + "'");
    }
    const std::string body = bgw::to_json(rep).dump(2) + "\n";
    std::cout << body;
    if (!out.empty()) write_file(out, body);
    return kExitOk;
}

int cmd_bgw(const std::string& config_path) {
    const bgw::ExperimentConfig cfg = bgw::load_experiment_config(config_path);
    bgw::validate_for_bgw(cfg);
    if (cfg.workers > 0) bgw::set_worker_count(cfg.workers);
    const bgw::GridField f = bgw::realize_field(cfg);

    const bgw::InequalityReport rep = cfg.mode == "bmo"
                                          ? bgw::check_bgw_bmo(f, cfg.eta, cfg.alpha)
                                          : bgw::check_bgw_sobolev(f, cfg.s, cfg.p, cfg.eta, cfg.alpha);
    write_file(cfg.out_json, bgw::to_json(rep).dump(2) + "\n");
    std::printf("mode=%s lhs=%s core=%s log_arg=%s m0=%d ratio=%s chain=%s\n", cfg.mode.c_str(),
                bgw::format_double(rep.lhs).c_str(), bgw::format_double(rep.core_norm).c_str(),
                bgw::format_double(rep.log_arg).c_str(), rep.m0,
                bgw::format_double(rep.ratio).c_str(), rep.chain_all_hold ? "pass" : "FAIL");
    return rep.chain_all_hold ? kExitOk : kExitPropertyFailure;
}

int cmd_sharpness(const std::string& config_path) {
    const bgw::ExperimentConfig cfg = bgw::load_experiment_config(config_path);
    bgw::validate_for_sharpness(cfg);
    if (cfg.workers > 0) bgw::set_worker_count(cfg.workers);

    bgw::SweepParams params;
    params.deltas = cfg.deltas;
    params.grid = cfg.grid;
    params.s = cfg.s;
    params.p = cfg.p;
    params.eta = cfg.eta;
    params.alpha = cfg.alpha;
    params.gamma_test = cfg.gamma_test;

    const bgw::SharpnessSweep sweep = bgw::sharpness_sweep(params);
    write_file(cfg.out_csv, bgw::sweep_to_csv(sweep));
    write_file(cfg.out_json, bgw::to_json(sweep).dump(2) + "\n");
    for (const bgw::SweepAssertion& a : sweep.assertions)
        std::printf("%-32s %-24s %s  (%s)\n", a.name.c_str(), bgw::format_double(a.value).c_str(),
                    a.pass ? "pass" : "FAIL", a.requirement.c_str());
    return sweep.all_pass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for logarithmic sup-norm inequalities"};
    app.require_subcommand(1);

    int k = 0;
    bool coeffs_json = false;
    CLI::App* coeffs = app.add_subcommand("coeffs", "print the exact dyadic coefficient system");
    coeffs->add_option("k", k, "order of the coefficient system")->required();
    coeffs->add_flag("--json", coeffs_json, "emit JSON instead of the one-line form");

    long trials = 1000;
    unsigned long seed = 0;
    bool inject = false;
    CLI::App* identities =
        app.add_subcommand("identities", "random property suite for the exact identities");
    identities->add_option("--trials", trials, "number of random instances")->required();
    identities->add_option("--seed", seed, "RNG seed");
    identities
        ->add_flag("--inject-corruption", inject,
                   "corrupt the solved coefficients first (negative control)")
        ->group("");  // test hook, hidden from help

    std::string config_path, kind = "bmo", out_path;
    CLI::App* seminorm = app.add_subcommand("seminorm", "estimate one seminorm from a config");
    seminorm->add_option("--config", config_path, "experiment config (JSON)")->required();
    seminorm->add_option("--kind", kind, "bmo | holder | sobolev | wsup")->required();
    seminorm->add_option("--out", out_path, "also write the report to this path");

    std::string bgw_config;
    CLI::App* bgwcmd = app.add_subcommand("bgw", "evaluate one inequality with proof-chain replay");
    bgwcmd->add_option("--config", bgw_config, "experiment config (JSON)")->required();

    std::string sharp_config;
    CLI::App* sharp = app.add_subcommand("sharpness", "log-bump sharpness sweep");
    sharp->add_option("--config", sharp_config, "experiment config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (coeffs->parsed()) {
            if (k < 0) {
                std::cerr << "coeffs: k must be a non-negative integer\n";
                return kExitUsage;
            }
            return cmd_coeffs(k, coeffs_json);
        }
        if (identities->parsed()) {
            if (trials < 1) {
                std::cerr << "identities: trials must be >= 1\n";
                return kExitUsage;
            }
            return cmd_identities(trials, seed, inject);
        }
        if (seminorm->parsed()) return cmd_seminorm(config_path, kind, out_path);
        if (bgwcmd->parsed()) return cmd_bgw(bgw_config);
        if (sharp->parsed()) return cmd_sharpness(sharp_config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPropertyFailure;
    }
    return kExitUsage;
}
