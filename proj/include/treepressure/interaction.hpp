#pragma once

/**
 * Alphabet, pair interactions and site energies.
 *
 * A labeling system over the alphabet {1..d} is specified by a nonnegative
 * pair-interaction matrix A and a strictly positive site-energy vector w.
 * The derived interaction matrix E(i,j) = a_ij * w_j is the weight of a
 * parent labeled i over a child labeled j, absorbing the child's site
 * energy. s = max_i sum_j E(i,j) is the quantity whose log the asymptotic
 * pressure equals.
 *
 * Every spec carries a real-valued view; when built from rational input it
 * also carries an exact-rational view, which the exact transfer backend and
 * the brute-force oracle require.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/numeric.hpp"

namespace treepressure {

namespace detail {

// Largest T subset of {0..d-1} such that every i in T has some j in T with
// support(i,j) true; computed by iteratively deleting dead rows.
inline std::vector<std::uint8_t> essential_mask_of_support(const std::vector<std::uint8_t>& support,
                                                           int d) {
    std::vector<std::uint8_t> alive(d, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < d; ++i) {
            if (!alive[i]) continue;
            bool has_successor = false;
            for (int j = 0; j < d; ++j) {
                if (alive[j] && support[static_cast<std::size_t>(i) * d + j]) {
                    has_successor = true;
                    break;
                }
            }
            if (!has_successor) {
                alive[i] = 0;
                changed = true;
            }
        }
    }
    return alive;
}

}  // namespace detail

struct InteractionSpec {
    int d = 0;

    // Real view (always present).
    std::vector<double> A;  // d x d, row-major
    std::vector<double> w;  // d
    std::vector<double> E;  // d x d, E(i,j) = a_ij * w_j

    // Exact view (present iff built from rational input).
    bool exact = false;
    std::vector<Rational> A_rat, w_rat, E_rat;

    double s = 0.0;             // max row sum of E
    Rational s_rat;             // exact when available
    std::vector<int> argmax_rows;  // rows achieving s, ascending

    std::vector<int> essential;            // surviving symbols, ascending
    std::vector<std::uint8_t> essential_mask;  // d flags

    // True iff some maximizing row admits predecessor chains of every
    // length, i.e. the lower-bound construction of the asymptotic-pressure
    // theorem can be carried out for this spec.
    bool predecessor_chains_ok = false;

    bool is_essential(int symbol) const { return essential_mask[symbol] != 0; }
};

namespace detail {

// Shared finishing pass: E, s, argmax set, essential alphabet and the
// predecessor-chain flag. Expects A/w (and the exact view, when present)
// already validated and stored.
inline void finish_spec(InteractionSpec& spec) {
    const int d = spec.d;
    std::vector<std::uint8_t> support(static_cast<std::size_t>(d) * d, 0);
    for (std::size_t c = 0; c < support.size(); ++c)
        support[c] = spec.exact ? (spec.E_rat[c] != 0) : (spec.E[c] > 0.0);

    if (spec.exact) {
        Rational best = 0;
        std::vector<Rational> row_sums(d);
        for (int i = 0; i < d; ++i) {
            Rational sum = 0;
            for (int j = 0; j < d; ++j) sum += spec.E_rat[static_cast<std::size_t>(i) * d + j];
            row_sums[i] = sum;
            if (sum > best) best = sum;
        }
        spec.s_rat = best;
        spec.s = best.convert_to<double>();
        for (int i = 0; i < d; ++i)
            if (row_sums[i] == best) spec.argmax_rows.push_back(i);
    } else {
        double best = 0.0;
        std::vector<double> row_sums(d);
        for (int i = 0; i < d; ++i) {
            double sum = 0.0;
            for (int j = 0; j < d; ++j) sum += spec.E[static_cast<std::size_t>(i) * d + j];
            row_sums[i] = sum;
            if (sum > best) best = sum;
        }
        spec.s = best;
        for (int i = 0; i < d; ++i)
            if (row_sums[i] == best) spec.argmax_rows.push_back(i);
    }
    if (spec.s <= 0.0)
        throw degenerate_interaction(
            "build_interaction: every row sum of E is zero (log s = -inf)");

    spec.essential_mask = essential_mask_of_support(support, d);
    for (int i = 0; i < d; ++i)
        if (spec.essential_mask[i]) spec.essential.push_back(i);

    // A row has predecessor chains of every length iff it survives the
    // essential pruning of the transposed support.
    std::vector<std::uint8_t> support_t(support.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            support_t[static_cast<std::size_t>(i) * d + j] =
                support[static_cast<std::size_t>(j) * d + i];
    const auto co_essential = essential_mask_of_support(support_t, d);
    for (int i : spec.argmax_rows)
        if (co_essential[i]) spec.predecessor_chains_ok = true;
}

}  // namespace detail

/// Build a spec from exact rational pair interactions and site energies.
inline InteractionSpec build_interaction(const std::vector<std::vector<Rational>>& A,
                                         const std::vector<Rational>& w) {
    const int d = static_cast<int>(w.size());
    if (d < 1) throw invalid_input("build_interaction: alphabet must be nonempty");
    if (static_cast<int>(A.size()) != d)
        throw invalid_input("build_interaction: A and w dimensions disagree");

    InteractionSpec spec;
    spec.d = d;
    spec.exact = true;
    spec.A_rat.reserve(static_cast<std::size_t>(d) * d);
    for (const auto& row : A) {
        if (static_cast<int>(row.size()) != d)
            throw invalid_input("build_interaction: A must be d x d");
        for (const Rational& a : row) {
            if (a < 0) throw invalid_input("build_interaction: pair interactions must be >= 0");
            spec.A_rat.push_back(a);
        }
    }
    for (const Rational& x : w) {
        if (x <= 0) throw invalid_input("build_interaction: site energies must be > 0");
        spec.w_rat.push_back(x);
    }
    spec.E_rat.resize(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            spec.E_rat[static_cast<std::size_t>(i) * d + j] =
                spec.A_rat[static_cast<std::size_t>(i) * d + j] * spec.w_rat[j];

    spec.A.resize(spec.A_rat.size());
    spec.w.resize(spec.w_rat.size());
    spec.E.resize(spec.E_rat.size());
    for (std::size_t c = 0; c < spec.A_rat.size(); ++c) spec.A[c] = spec.A_rat[c].convert_to<double>();
    for (std::size_t c = 0; c < spec.w_rat.size(); ++c) spec.w[c] = spec.w_rat[c].convert_to<double>();
    for (std::size_t c = 0; c < spec.E_rat.size(); ++c) spec.E[c] = spec.E_rat[c].convert_to<double>();

    detail::finish_spec(spec);
    return spec;
}

/// Build a spec from real-valued input; no exact view.
inline InteractionSpec build_interaction(const std::vector<std::vector<double>>& A,
                                         const std::vector<double>& w) {
    const int d = static_cast<int>(w.size());
    if (d < 1) throw invalid_input("build_interaction: alphabet must be nonempty");
    if (static_cast<int>(A.size()) != d)
        throw invalid_input("build_interaction: A and w dimensions disagree");

    InteractionSpec spec;
    spec.d = d;
    for (const auto& row : A) {
        if (static_cast<int>(row.size()) != d)
            throw invalid_input("build_interaction: A must be d x d");
        for (double a : row) {
            if (!(a >= 0.0) || std::isinf(a))
                throw invalid_input("build_interaction: pair interactions must be finite and >= 0");
            spec.A.push_back(a);
        }
    }
    for (double x : w) {
        if (!(x > 0.0) || std::isinf(x))
            throw invalid_input("build_interaction: site energies must be finite and > 0");
        spec.w.push_back(x);
    }
    spec.E.resize(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            spec.E[static_cast<std::size_t>(i) * d + j] =
                spec.A[static_cast<std::size_t>(i) * d + j] * spec.w[j];

    detail::finish_spec(spec);
    return spec;
}

/// Pair potential phi (entries may be -inf) and finite site potential chi.
struct PotentialSpec {
    int d = 0;
    std::vector<double> phi;  // d x d, row-major
    std::vector<double> chi;  // d
};

/// a_ij = exp(phi(i,j)) with exp(-inf) = 0, w_j = exp(chi(j)).
inline InteractionSpec from_potentials(const PotentialSpec& p) {
    const int d = p.d;
    if (d < 1 || static_cast<int>(p.phi.size()) != d * d || static_cast<int>(p.chi.size()) != d)
        throw invalid_input("from_potentials: dimension mismatch");
    std::vector<std::vector<double>> A(d, std::vector<double>(d));
    std::vector<double> w(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double v = p.phi[static_cast<std::size_t>(i) * d + j];
            if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
                throw invalid_input("from_potentials: phi entries must be finite or -inf");
            A[i][j] = v == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(v);
        }
        if (!std::isfinite(p.chi[i]))
            throw invalid_input("from_potentials: chi entries must be finite");
        w[i] = std::exp(p.chi[i]);
    }
    return build_interaction(A, w);
}

inline double max_row_sum(const InteractionSpec& spec) { return spec.s; }

/// Symbols admitting an infinite forward continuation under E's support;
/// the symbols allowed on the bottom level of an extendable pattern.
inline std::vector<int> essential_alphabet(const InteractionSpec& spec) { return spec.essential; }

}  // namespace treepressure
