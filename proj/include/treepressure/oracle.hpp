#pragma once

/**
 * Ground-truth brute force: materialize Delta_n explicitly as generator
 * strings and sum the partition function over every labeling, straight from
 * the definition. Exists to validate the transfer recursion on desk-size
 * instances, not to compute.
 */

#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/interaction.hpp"
#include "treepressure/numeric.hpp"
#include "treepressure/restriction.hpp"

namespace treepressure {

struct OracleCaps {
    std::uint64_t vertex_cap = 1'000'000;    // max |Delta_n| materialized
    std::uint64_t pattern_cap = 10'000'000;  // max d^|Delta_n| enumerated
};

// ============================================================================
// Explicit tree
// ============================================================================

// Vertices of Delta_n in breadth-first lexicographic order (depth-major).
struct ExplicitTree {
    int k = 0;
    int depth = 0;
    std::vector<std::int32_t> parent;  // -1 for the root
    std::vector<std::int32_t> gen;     // last generator, 0-based; -1 for the root
    std::vector<std::int32_t> level;
    std::vector<std::size_t> level_offset;  // level l occupies [offset[l], offset[l+1])

    std::size_t size() const { return parent.size(); }

    std::string vertex_string(std::size_t v) const {
        std::string out;
        while (parent[v] >= 0) {
            out.insert(0, "g" + std::to_string(gen[v] + 1));
            v = static_cast<std::size_t>(parent[v]);
        }
        return out;
    }
};

inline ExplicitTree enumerate_tree(const RestrictionMatrix& R, int n,
                                   const OracleCaps& caps = {}) {
    if (n < 0) throw invalid_input("enumerate_tree: n must be >= 0");
    const int k = R.k();
    ExplicitTree tree;
    tree.k = k;
    tree.depth = n;
    tree.parent.push_back(-1);
    tree.gen.push_back(-1);
    tree.level.push_back(0);
    tree.level_offset = {0, 1};
    for (int lvl = 1; lvl <= n; ++lvl) {
        const std::size_t begin = tree.level_offset[lvl - 1];
        const std::size_t end = tree.level_offset[lvl];
        for (std::size_t v = begin; v < end; ++v) {
            for (int g = 0; g < k; ++g) {
                if (tree.gen[v] >= 0 && !R(tree.gen[v], g)) continue;  // root allows all
                if (tree.size() >= caps.vertex_cap)
                    throw resource_limit("enumerate_tree: vertex cap exceeded");
                tree.parent.push_back(static_cast<std::int32_t>(v));
                tree.gen.push_back(g);
                tree.level.push_back(lvl);
            }
        }
        tree.level_offset.push_back(tree.size());
    }
    return tree;
}

/// One vertex string per line (root = empty line); child edges are implied
/// by the prefix relation.
inline void dump_tree(const ExplicitTree& tree, std::ostream& os) {
    for (std::size_t v = 0; v < tree.size(); ++v) os << tree.vertex_string(v) << "\n";
}

// ============================================================================
// Pattern predicates and brute-force partition function
// ============================================================================

/// A pattern on Delta_n is the restriction of a labeling of the full
/// infinite tree iff every edge weight inside Delta_n is positive and every
/// bottom-level label is essential.
inline bool pattern_is_extendable(const ExplicitTree& tree, std::span<const int> labels,
                                  const InteractionSpec& spec) {
    if (labels.size() != tree.size())
        throw invalid_input("pattern_is_extendable: pattern must cover all of Delta_n");
    const int d = spec.d;
    for (std::size_t v = 1; v < tree.size(); ++v) {
        const int i = labels[tree.parent[v]], j = labels[v];
        const bool positive = spec.exact
                                  ? spec.E_rat[static_cast<std::size_t>(i) * d + j] != 0
                                  : spec.E[static_cast<std::size_t>(i) * d + j] > 0.0;
        if (!positive) return false;
    }
    for (std::size_t v = tree.level_offset[tree.depth]; v < tree.size(); ++v)
        if (!spec.is_essential(labels[v])) return false;
    return true;
}

struct BruteForceResult {
    Rational local;
    Rational extendable;
};

/// Literal sum over all patterns x : Delta_n -> D of w(x(root)) times the
/// product of edge interactions, in both mode conventions at once. The sum
/// is taken over a common denominator so the inner loop is pure big-integer
/// arithmetic; branches whose partial product is already zero are skipped
/// (their terms vanish either way).
inline BruteForceResult brute_force_both(const RestrictionMatrix& R, const InteractionSpec& spec,
                                         int n, const OracleCaps& caps = {}) {
    if (!spec.exact)
        throw backend_mismatch("brute_force_partition: spec has no exact-rational view");
    const auto tree = enumerate_tree(R, n, caps);
    const int d = spec.d;
    const std::size_t V = tree.size();

    BigInt space = boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(V));
    if (space > caps.pattern_cap)
        throw resource_limit("brute_force_partition: pattern cap exceeded");

    // Clear denominators: every pattern weight has the same one.
    BigInt denom_A = 1, denom_w = 1;
    for (const Rational& a : spec.A_rat) denom_A = lcm(denom_A, denominator(a));
    for (const Rational& x : spec.w_rat) denom_w = lcm(denom_w, denominator(x));
    std::vector<BigInt> int_w(d);
    std::vector<BigInt> int_E(static_cast<std::size_t>(d) * d);
    for (int j = 0; j < d; ++j)
        int_w[j] = numerator(Rational(spec.w_rat[j] * denom_w));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            int_E[static_cast<std::size_t>(i) * d + j] =
                numerator(Rational(spec.A_rat[static_cast<std::size_t>(i) * d + j] * denom_A)) *
                int_w[j];

    const std::size_t bottom = tree.level_offset[tree.depth];
    std::vector<int> labels(V, -1);
    std::vector<BigInt> partial(V + 1);
    partial[0] = 1;
    BigInt local_sum = 0, extendable_sum = 0;
    int inessential_bottom = 0;

    // Depth-first over assignments in vertex (BFS) order.
    std::size_t v = 0;
    while (true) {
        // Undo bookkeeping of the label being replaced at v.
        if (labels[v] >= 0 && v >= bottom && !spec.is_essential(labels[v])) --inessential_bottom;
        ++labels[v];
        if (labels[v] == d) {
            labels[v] = -1;
            if (v == 0) break;
            --v;
            continue;
        }
        const int lab = labels[v];
        if (v >= bottom && !spec.is_essential(lab)) ++inessential_bottom;
        const BigInt& factor = v == 0 ? int_w[lab]
                                      : int_E[static_cast<std::size_t>(labels[tree.parent[v]]) * d +
                                              lab];
        if (factor == 0) continue;  // dead branch; next pass undoes the bookkeeping
        partial[v + 1] = partial[v] * factor;
        if (v + 1 == V) {
            local_sum += partial[V];
            if (inessential_bottom == 0) extendable_sum += partial[V];
            continue;
        }
        ++v;
    }

    BigInt scale = denom_w;
    const BigInt per_edge = denom_A * denom_w;
    for (std::size_t e = 1; e < V; ++e) scale *= per_edge;
    return {Rational(local_sum, scale), Rational(extendable_sum, scale)};
}

inline Rational brute_force_partition(const RestrictionMatrix& R, const InteractionSpec& spec,
                                      int n, Mode mode, const OracleCaps& caps = {}) {
    const auto both = brute_force_both(R, spec, n, caps);
    return mode == Mode::local ? both.local : both.extendable;
}

// ============================================================================
// Random rational specs for randomized oracle checks
// ============================================================================

// Bounded draw with pinned semantics (std distributions vary by platform).
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

/// Seeded random rational spec: A entries in {0, 1/1..3/3}, w entries
/// strictly positive, redrawn until some row sum is positive. Draw order is
/// fixed (A row-major, then w) so results are reproducible everywhere.
inline InteractionSpec random_rational_spec(std::mt19937_64& rng, int d) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::vector<Rational>> A(d, std::vector<Rational>(d));
        std::vector<Rational> w(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const auto num = draw_below(rng, 4);  // 0 with probability 1/4
                const auto den = 1 + draw_below(rng, 3);
                A[i][j] = Rational(num, den);
            }
        for (int j = 0; j < d; ++j)
            w[j] = Rational(1 + draw_below(rng, 3), 1 + draw_below(rng, 3));
        try {
            return build_interaction(A, w);
        } catch (const degenerate_interaction&) {
            continue;  // all-zero E, redraw
        }
    }
    throw error("random_rational_spec: failed to draw a nondegenerate spec");
}

}  // namespace treepressure
