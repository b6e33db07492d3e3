// Batch front-end: JSON experiment configs in, CSV / plain-text reports out.
//
// Subcommands: spectral, pressure, sweep, oracle-check.
// Exit codes: 0 success, 1 usage/config error, 2 mathematical hypothesis
// violation, 3 resource cap exceeded, 4 oracle mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "treepressure/asymptotics.hpp"
#include "treepressure/io.hpp"
#include "treepressure/oracle.hpp"
#include "treepressure/transfer.hpp"

namespace tp = treepressure;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 1;
};

tp::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tp::invalid_input("cannot open config file '" + path + "'");
    tp::json j;
    try {
        in >> j;
    } catch (const tp::json::parse_error& e) {
        throw tp::invalid_input(std::string("config is not valid JSON: ") + e.what());
    }
    return j;
}

// Results go to --out when given, else stdout.
void emit(const CommonArgs& args, const std::string& text) {
    if (args.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw tp::invalid_input("cannot open output file '" + args.out_path + "'");
    out << text;
}

tp::OracleCaps caps_from_env() {
    tp::OracleCaps caps;
    if (const char* env = std::getenv("TREEPRESSURE_CAP")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw tp::invalid_input("TREEPRESSURE_CAP must be a positive integer");
        caps.vertex_cap = v;
        caps.pattern_cap = v;
    }
    return caps;
}

int run_spectral(const CommonArgs& args) {
    const auto cfg = tp::parse_config(load_config(args.config_path), tp::Command::spectral);
    const auto info = tp::spectral(*cfg.tree.single);
    std::ostringstream os;
    tp::write_spectral_report(os, info);
    emit(args, os.str());
    return 0;
}

int run_pressure(const CommonArgs& args) {
    const auto cfg = tp::parse_config(load_config(args.config_path), tp::Command::pressure);
    const auto analysis = tp::analyze_pressure(*cfg.tree.single, *cfg.interaction, cfg.n_max,
                                               cfg.mode, cfg.backend, cfg.tau);
    std::ostringstream os;
    tp::write_series_csv(os, analysis.records);

    std::ostringstream summary;
    summary << "# lambda " << tp::fmt12(analysis.spec_info.lambda) << "\n";
    summary << "# s " << tp::fmt12(tp::max_row_sum(*cfg.interaction)) << "\n";
    summary << "# lower_bound " << tp::fmt12(analysis.bounds.lower) << "\n";
    summary << "# upper_bound " << tp::fmt12(analysis.bounds.upper) << "\n";
    if (analysis.limit) {
        summary << "# estimate " << tp::fmt12(analysis.limit->estimate) << "\n";
        summary << "# converged " << (analysis.limit->converged ? 1 : 0) << "\n";
    }
    std::cout << summary.str();
    emit(args, os.str());
    return 0;
}

int run_sweep(const CommonArgs& args) {
    const auto cfg = tp::parse_config(load_config(args.config_path), tp::Command::sweep);
    tp::SweepRequest req;
    req.family = cfg.tree.family;
    req.ks = cfg.tree.ks;
    req.n_max = cfg.n_max;
    req.tau = cfg.tau;
    req.mode = cfg.mode;
    req.backend = cfg.backend;
    req.threads = args.threads;
    const auto entries = tp::sweep_k(req, *cfg.interaction);
    std::ostringstream os;
    tp::write_sweep_csv(os, entries);
    emit(args, os.str());
    bool any_ok = false;
    for (const auto& e : entries) any_ok |= e.ok;
    return any_ok ? 0 : 2;
}

int run_oracle_check(const CommonArgs& args) {
    const auto cfg = tp::parse_config(load_config(args.config_path), tp::Command::oracle_check);
    const auto caps = caps_from_env();
    const auto& R = *cfg.tree.single;

    std::vector<tp::InteractionSpec> specs;
    if (cfg.interaction) {
        specs.push_back(*cfg.interaction);
    } else {
        std::mt19937_64 rng(args.seed);
        for (int i = 0; i < cfg.random->count; ++i)
            specs.push_back(tp::random_rational_spec(rng, cfg.random->d));
    }

    std::ostringstream os;
    int failures = 0;
    for (std::size_t idx = 0; idx < specs.size(); ++idx) {
        const auto& spec = specs[idx];
        const auto brute = tp::brute_force_both(R, spec, cfg.n, caps);
        for (const tp::Mode mode : {tp::Mode::local, tp::Mode::extendable}) {
            const tp::Rational& expected =
                mode == tp::Mode::local ? brute.local : brute.extendable;
            const auto exact =
                tp::partition_function(R, spec, cfg.n, mode, tp::BackendKind::exact_rational);
            const auto logr =
                tp::partition_function(R, spec, cfg.n, mode, tp::BackendKind::log_real);
            const bool exact_ok = *exact.exactZ == expected;
            const double log_expected = tp::log_of(expected);
            bool log_ok;
            if (std::isinf(log_expected) || std::isinf(logr.logZ))
                log_ok = log_expected == logr.logZ;
            else
                log_ok = std::abs(logr.logZ - log_expected) <=
                         1e-9 * std::max(1.0, std::abs(log_expected));
            const bool ok = exact_ok && log_ok;
            if (!ok) ++failures;
            os << "spec " << idx << " mode "
               << (mode == tp::Mode::local ? "local" : "extendable") << ": brute " << expected
               << " exact " << *exact.exactZ << " log " << tp::fmt12(logr.logZ) << " "
               << (ok ? "PASS" : "FAIL") << "\n";
        }
    }
    os << "oracle check: " << (specs.size() * 2 - failures) << "/" << specs.size() * 2
       << " passed\n";
    emit(args, os.str());
    return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partition functions, pressure and asymptotic-pressure diagnostics "
                 "for nearest-neighbor labelings of restricted trees"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub, bool seed, bool threads) {
        sub->add_option("--config", args.config_path, "JSON experiment config")->required();
        sub->add_option("--out", args.out_path, "output file (default: stdout)");
        if (seed) sub->add_option("--seed", args.seed, "seed for randomized oracle checks");
        if (threads) sub->add_option("--threads", args.threads, "worker threads (0 = auto)");
    };
    auto* spectral = app.add_subcommand("spectral", "classification, Perron data, residue table");
    add_common(spectral, false, false);
    auto* pressure = app.add_subcommand("pressure", "per-n pressure series CSV with bounds");
    add_common(pressure, false, false);
    auto* sweep = app.add_subcommand("sweep", "per-k limit estimates along a tree family");
    add_common(sweep, false, true);
    auto* oracle = app.add_subcommand("oracle-check", "brute-force vs transfer equivalence");
    add_common(oracle, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (spectral->parsed()) return run_spectral(args);
        if (pressure->parsed()) return run_pressure(args);
        if (sweep->parsed()) return run_sweep(args);
        if (oracle->parsed()) return run_oracle_check(args);
        return 1;
    } catch (const tp::resource_limit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const tp::hypothesis_violation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tp::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
