#pragma once

// Shared test utilities: independent reference routines (big-integer matrix
// powers, transitive-closure reachability) used as oracles against the
// library's faster paths, plus seeded generators for matrices and specs.

#include <random>
#include <vector>

#include "treepressure/interaction.hpp"
#include "treepressure/numeric.hpp"
#include "treepressure/oracle.hpp"
#include "treepressure/restriction.hpp"

namespace testutil {

using treepressure::BigInt;
using treepressure::Rational;
using treepressure::RestrictionMatrix;

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Reference matrix computations (independent of the library's recursions)
// ---------------------------------------------------------------------------

using BigMatrix = std::vector<std::vector<BigInt>>;

inline BigMatrix big_identity(int k) {
    BigMatrix m(k, std::vector<BigInt>(k, 0));
    for (int i = 0; i < k; ++i) m[i][i] = 1;
    return m;
}

inline BigMatrix big_from(const RestrictionMatrix& R) {
    BigMatrix m(R.k(), std::vector<BigInt>(R.k()));
    for (int i = 0; i < R.k(); ++i)
        for (int j = 0; j < R.k(); ++j) m[i][j] = R(i, j);
    return m;
}

inline BigMatrix big_multiply(const BigMatrix& a, const BigMatrix& b) {
    const int k = static_cast<int>(a.size());
    BigMatrix out(k, std::vector<BigInt>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (int j = 0; j < k; ++j) out[i][j] += a[i][l] * b[l][j];
    return out;
}

inline BigInt big_entry_sum(const BigMatrix& m) {
    BigInt s = 0;
    for (const auto& row : m)
        for (const auto& x : row) s += x;
    return s;
}

// Reference strong-connectivity via transitive closure.
inline bool reference_strongly_connected(const RestrictionMatrix& R) {
    const int k = R.k();
    // reach[i][j] = exists a walk of length >= 1 from i to j
    std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) reach[i][j] = R(i, j) != 0;
    for (int mid = 0; mid < k; ++mid)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (reach[i][mid] && reach[mid][j]) reach[i][j] = true;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (!reach[i][j]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

inline RestrictionMatrix random_binary_matrix(std::mt19937_64& rng, int k, int percent_ones) {
    std::vector<std::vector<int>> rows(k, std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            rows[i][j] = treepressure::draw_below(rng, 100) < static_cast<std::uint64_t>(percent_ones);
    return RestrictionMatrix(rows);
}

inline RestrictionMatrix random_irreducible(std::mt19937_64& rng, int k) {
    while (true) {
        auto R = random_binary_matrix(rng, k, 40);
        if (reference_strongly_connected(R)) return R;
    }
}

// Random irreducible matrix whose period is >= 2: vertices are split into
// `p` cyclic classes and edges only go from class c to class c+1 (mod p).
inline RestrictionMatrix random_irreducible_periodic(std::mt19937_64& rng, int k, int p) {
    while (true) {
        std::vector<int> cls(k);
        for (int i = 0; i < p; ++i) cls[i] = i;  // every class nonempty
        for (int i = p; i < k; ++i) cls[i] = static_cast<int>(treepressure::draw_below(rng, p));
        std::vector<std::vector<int>> rows(k, std::vector<int>(k, 0));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (cls[j] == (cls[i] + 1) % p)
                    rows[i][j] = treepressure::draw_below(rng, 100) < 60;
        RestrictionMatrix R(rows);
        if (!reference_strongly_connected(R)) continue;
        if (treepressure::classify(R).period >= 2) return R;
    }
}

// ---------------------------------------------------------------------------
// Spec builders
// ---------------------------------------------------------------------------

inline treepressure::InteractionSpec spec_from_ints(const std::vector<std::vector<int>>& A,
                                                    const std::vector<int>& w) {
    std::vector<std::vector<Rational>> Ar;
    for (const auto& row : A) Ar.emplace_back(row.begin(), row.end());
    std::vector<Rational> wr(w.begin(), w.end());
    return treepressure::build_interaction(Ar, wr);
}

inline treepressure::InteractionSpec golden_mean_spec() {
    return spec_from_ints({{1, 1}, {1, 0}}, {1, 1});
}

inline treepressure::InteractionSpec full_shift_spec(int d) {
    return spec_from_ints(std::vector<std::vector<int>>(d, std::vector<int>(d, 1)),
                          std::vector<int>(d, 1));
}

}  // namespace testutil
