#pragma once

/**
 * JSON experiment configs in, CSV/plain-text reports out.
 *
 * All real-valued fields are printed with 12 significant digits through
 * std::to_chars, so output is locale-independent and byte-reproducible.
 * Exact integer fields (level counts) are printed in full.
 */

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "treepressure/asymptotics.hpp"
#include "treepressure/errors.hpp"
#include "treepressure/interaction.hpp"
#include "treepressure/numeric.hpp"
#include "treepressure/restriction.hpp"
#include "treepressure/transfer.hpp"

namespace treepressure {

using nlohmann::json;

// ============================================================================
// Number formatting
// ============================================================================

inline std::string fmt12(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

// ============================================================================
// JSON -> domain values
// ============================================================================

/// Accepts integers, decimals (read as their exact binary value) and
/// rational strings like "3/2".
inline Rational parse_rational(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_unsigned()) return Rational(j.get<unsigned long long>());
    if (j.is_number_float()) return rational_of(j.get<double>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            const auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(BigInt(s));
            const BigInt num(s.substr(0, slash));
            const BigInt den(s.substr(slash + 1));
            if (den == 0) throw invalid_input(where + ": zero denominator");
            return Rational(num, den);
        } catch (const std::runtime_error&) {
            throw invalid_input(where + ": cannot parse rational '" + s + "'");
        }
    }
    throw invalid_input(where + ": expected a number or rational string");
}

inline void require_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw invalid_input(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) ok = true;
        if (!ok) throw invalid_input(where + ": unknown key '" + key + "'");
    }
}

inline RestrictionMatrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array()) throw invalid_input(where + ": expected an array of arrays of 0/1");
    std::vector<std::vector<int>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw invalid_input(where + ": expected an array of arrays of 0/1");
        std::vector<int> r;
        for (const auto& cell : row) {
            if (!cell.is_number_integer() && !cell.is_number_unsigned())
                throw invalid_input(where + ": matrix entries must be integers");
            r.push_back(cell.get<int>());
        }
        rows.push_back(std::move(r));
    }
    return RestrictionMatrix(rows);
}

// Tree descriptor: a single tree ({"kind":"full","k":K}, {"kind":"fibonacci",
// "k":K,"r":R}, {"kind":"explicit","matrix":[[...]]}) or a sweep family
// (k_range plus an r rule, or an explicit matrix list).
struct TreeConfig {
    std::optional<RestrictionMatrix> single;
    TreeFamily family;
    std::vector<int> ks;

    bool is_sweep() const { return !single.has_value(); }
};

inline TreeConfig parse_tree(const json& j, const std::string& where) {
    require_keys(j, {"kind", "k", "k_range", "r", "r_rule", "matrix", "matrices"}, where);
    if (!j.contains("kind")) throw invalid_input(where + ": missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();

    TreeConfig out;
    auto read_k_range = [&]() {
        const auto& kr = j.at("k_range");
        if (!kr.is_array() || kr.size() != 2)
            throw invalid_input(where + ": k_range must be [lo, hi]");
        const int lo = kr[0].get<int>(), hi = kr[1].get<int>();
        if (lo < 1 || hi < lo) throw invalid_input(where + ": bad k_range");
        for (int k = lo; k <= hi; ++k) out.ks.push_back(k);
    };

    if (kind == "full") {
        out.family = TreeFamily::full();
        if (j.contains("k") == j.contains("k_range"))
            throw invalid_input(where + ": give exactly one of 'k', 'k_range'");
        if (j.contains("k"))
            out.single = make_full_tree(j.at("k").get<int>());
        else
            read_k_range();
    } else if (kind == "fibonacci") {
        if (j.contains("r") == j.contains("r_rule"))
            throw invalid_input(where + ": give exactly one of 'r', 'r_rule'");
        if (j.contains("r_rule")) {
            const std::string rule = j.at("r_rule").get<std::string>();
            if (rule != "k-1") throw invalid_input(where + ": unknown r_rule '" + rule + "'");
            out.family = TreeFamily::fibonacci_k_minus_one();
        } else {
            out.family = TreeFamily::fibonacci_fixed(j.at("r").get<int>());
        }
        if (j.contains("k") == j.contains("k_range"))
            throw invalid_input(where + ": give exactly one of 'k', 'k_range'");
        if (j.contains("k"))
            out.single = out.family.instantiate(j.at("k").get<int>());
        else
            read_k_range();
    } else if (kind == "explicit") {
        if (j.contains("matrix")) {
            out.single = parse_matrix(j.at("matrix"), where + ".matrix");
            out.family = TreeFamily::explicit_list({{out.single->k(), *out.single}});
        } else if (j.contains("matrices")) {
            std::vector<std::pair<int, RestrictionMatrix>> ms;
            for (const auto& m : j.at("matrices")) {
                auto R = parse_matrix(m, where + ".matrices");
                ms.emplace_back(R.k(), std::move(R));
            }
            out.family = TreeFamily::explicit_list(std::move(ms));
            out.ks = out.family.keys();
        } else {
            throw invalid_input(where + ": explicit tree needs 'matrix' or 'matrices'");
        }
    } else {
        throw invalid_input(where + ": unknown kind '" + kind + "'");
    }
    return out;
}

inline InteractionSpec parse_interaction(const json& j, const std::string& where) {
    require_keys(j, {"A", "w", "phi", "chi"}, where);
    const bool has_aw = j.contains("A") || j.contains("w");
    const bool has_pot = j.contains("phi") || j.contains("chi");
    if (has_aw == has_pot)
        throw invalid_input(where + ": give either A/w or phi/chi");

    if (has_aw) {
        if (!j.contains("A") || !j.contains("w"))
            throw invalid_input(where + ": both A and w are required");
        std::vector<std::vector<Rational>> A;
        for (const auto& row : j.at("A")) {
            std::vector<Rational> r;
            for (const auto& cell : row) r.push_back(parse_rational(cell, where + ".A"));
            A.push_back(std::move(r));
        }
        std::vector<Rational> w;
        for (const auto& cell : j.at("w")) w.push_back(parse_rational(cell, where + ".w"));
        return build_interaction(A, w);
    }

    if (!j.contains("phi") || !j.contains("chi"))
        throw invalid_input(where + ": both phi and chi are required");
    PotentialSpec p;
    p.d = static_cast<int>(j.at("chi").size());
    for (const auto& row : j.at("phi")) {
        for (const auto& cell : row) {
            if (cell.is_string()) {
                if (cell.get<std::string>() != "-inf")
                    throw invalid_input(where + ".phi: only '-inf' is allowed as a string");
                p.phi.push_back(-std::numeric_limits<double>::infinity());
            } else {
                p.phi.push_back(cell.get<double>());
            }
        }
    }
    for (const auto& cell : j.at("chi")) p.chi.push_back(cell.get<double>());
    return from_potentials(p);
}

// ============================================================================
// Experiment configs
// ============================================================================

enum class Command { spectral, pressure, sweep, oracle_check };

struct RandomSpecsConfig {
    int count = 1;
    int d = 2;
};

struct ExperimentConfig {
    TreeConfig tree;
    std::optional<InteractionSpec> interaction;
    int n_max = 8;
    int n = 2;
    Mode mode = Mode::extendable;
    BackendKind backend = BackendKind::log_real;
    double tau = 1e-3;
    std::optional<RandomSpecsConfig> random;
};

inline Mode parse_mode(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "extendable") return Mode::extendable;
    if (s == "local") return Mode::local;
    throw invalid_input("mode must be 'extendable' or 'local'");
}

inline BackendKind parse_backend(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "log") return BackendKind::log_real;
    if (s == "exact") return BackendKind::exact_rational;
    throw invalid_input("backend must be 'log' or 'exact'");
}

/// Validates the whole config against the command's schema; unknown keys
/// are rejected.
inline ExperimentConfig parse_config(const json& j, Command cmd) {
    ExperimentConfig cfg;
    switch (cmd) {
        case Command::spectral:
            require_keys(j, {"tree"}, "config");
            break;
        case Command::pressure:
            require_keys(j, {"tree", "interaction", "n_max", "mode", "backend", "tau"}, "config");
            break;
        case Command::sweep:
            require_keys(j, {"tree", "interaction", "n_max", "mode", "backend", "tau"}, "config");
            break;
        case Command::oracle_check:
            require_keys(j, {"tree", "interaction", "random", "n"}, "config");
            break;
    }
    if (!j.contains("tree")) throw invalid_input("config: missing 'tree'");
    cfg.tree = parse_tree(j.at("tree"), "config.tree");

    if (j.contains("interaction"))
        cfg.interaction = parse_interaction(j.at("interaction"), "config.interaction");
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode"));
    if (j.contains("backend")) cfg.backend = parse_backend(j.at("backend"));
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("random")) {
        require_keys(j.at("random"), {"count", "d"}, "config.random");
        RandomSpecsConfig rc;
        if (j.at("random").contains("count")) rc.count = j.at("random").at("count").get<int>();
        if (j.at("random").contains("d")) rc.d = j.at("random").at("d").get<int>();
        if (rc.count < 1 || rc.d < 1) throw invalid_input("config.random: bad count or d");
        cfg.random = rc;
    }

    switch (cmd) {
        case Command::spectral:
            break;
        case Command::pressure:
        case Command::sweep:
            if (!cfg.interaction) throw invalid_input("config: missing 'interaction'");
            if (cfg.n_max < 1) throw invalid_input("config: n_max must be >= 1");
            if (!(cfg.tau >= 0)) throw invalid_input("config: tau must be >= 0");
            break;
        case Command::oracle_check:
            if (cfg.interaction.has_value() == cfg.random.has_value())
                throw invalid_input("config: give exactly one of 'interaction', 'random'");
            if (cfg.n < 0) throw invalid_input("config: n must be >= 0");
            break;
    }
    if (cmd == Command::sweep && !cfg.tree.is_sweep())
        throw invalid_input("config.tree: sweep needs 'k_range' or an explicit matrix list");
    if (cmd != Command::sweep && cfg.tree.is_sweep())
        throw invalid_input("config.tree: this command needs a single tree, not a range");
    return cfg;
}

// ============================================================================
// Reports and CSV
// ============================================================================

inline const char* class_name(MatrixClass cls) {
    switch (cls) {
        case MatrixClass::primitive: return "primitive";
        case MatrixClass::irreducible: return "irreducible";
        case MatrixClass::reducible: return "reducible";
    }
    return "?";
}

inline void write_spectral_report(std::ostream& os, const SpectralInfo& info) {
    os << "class: " << class_name(info.cls) << "\n";
    os << "period: " << info.period << "\n";
    os << "lambda: " << fmt12(info.lambda) << "\n";
    os << "right_vec:";
    for (double x : info.right_vec) os << " " << fmt12(x);
    os << "\nleft_vec:";
    for (double x : info.left_vec) os << " " << fmt12(x);
    os << "\nresidue_table:\n";
    for (const auto& row : info.residues) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
        os << "\n";
    }
}

inline void write_series_csv(std::ostream& os, const std::vector<SeriesRecord>& records) {
    os << "n,L_n,Delta_n,logZ_n,P_n,ratio_Ln_Deltan\n";
    for (const auto& r : records)
        os << r.n << "," << r.L << "," << r.Delta << "," << fmt12(r.logZ) << "," << fmt12(r.P)
           << "," << fmt12(r.ratio) << "\n";
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries) {
    os << "k,lambda,n_max,logZ_nmax,P_nmax,lower_bound,upper_bound,converged,status\n";
    for (const auto& e : entries) {
        os << e.k << ",";
        if (e.ok) {
            os << fmt12(e.lambda) << "," << e.n_used << "," << fmt12(e.logZ) << "," << fmt12(e.P)
               << "," << fmt12(e.bounds.lower) << "," << fmt12(e.bounds.upper) << ","
               << (e.converged ? 1 : 0) << ",ok\n";
        } else {
            std::string status = e.status;
            for (char& c : status)
                if (c == ',' || c == '\n') c = ';';
            os << ",,,,,,," << status << "\n";
        }
    }
}

}  // namespace treepressure
