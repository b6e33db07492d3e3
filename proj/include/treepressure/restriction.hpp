#pragma once

/**
 * Restriction matrices and the trees they carve out of the full rooted
 * k-tree.
 *
 * A k x k 0/1 matrix R restricts how the tree branches: a vertex whose last
 * generator is t has one child per generator u with R(t,u) = 1 (the root is
 * adjacent to every generator). This header provides the standard families,
 * the primitive / irreducible / reducible classification, Perron-Frobenius
 * spectral data via power iteration, exact big-integer level counts, and the
 * collapsed 2x2 recursion for the generalized Fibonacci family.
 *
 * Level-count conventions: L[0] = 1 (the root), L[n] = |R^(n-1)| for n >= 1
 * with R^0 the identity, and Delta[n] = 1 + sum_{m<=n} L[m].
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/numeric.hpp"

namespace treepressure {

// ============================================================================
// RestrictionMatrix
// ============================================================================

class RestrictionMatrix {
public:
    explicit RestrictionMatrix(const std::vector<std::vector<int>>& rows) {
        k_ = static_cast<int>(rows.size());
        if (k_ < 1) throw invalid_input("restriction matrix must be at least 1x1");
        bits_.assign(static_cast<std::size_t>(k_) * k_, 0);
        for (int i = 0; i < k_; ++i) {
            if (static_cast<int>(rows[i].size()) != k_)
                throw invalid_input("restriction matrix must be square");
            for (int j = 0; j < k_; ++j) {
                const int v = rows[i][j];
                if (v != 0 && v != 1)
                    throw invalid_input("restriction matrix entries must be 0 or 1");
                bits_[idx(i, j)] = static_cast<std::uint8_t>(v);
            }
        }
    }

    int k() const { return k_; }
    int operator()(int i, int j) const { return bits_[idx(i, j)]; }

    friend bool operator==(const RestrictionMatrix& a, const RestrictionMatrix& b) = default;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * k_ + j;
    }

    int k_ = 0;
    std::vector<std::uint8_t> bits_;
};

// ============================================================================
// Families
// ============================================================================

/// Free semigroup on k generators: no relation, all entries 1.
inline RestrictionMatrix make_full_tree(int k) {
    if (k < 1) throw invalid_input("make_full_tree: k must be >= 1");
    return RestrictionMatrix(std::vector<std::vector<int>>(k, std::vector<int>(k, 1)));
}

/// Generalized Fibonacci tree R(k,r): successions within the last r
/// generators are forbidden. r = 0 gives the full tree.
inline RestrictionMatrix make_generalized_fibonacci(int k, int r) {
    if (k < 1) throw invalid_input("make_generalized_fibonacci: k must be >= 1");
    if (r < 0 || r >= k)
        throw invalid_input("make_generalized_fibonacci: need 0 <= r <= k-1");
    std::vector<std::vector<int>> rows(k, std::vector<int>(k, 1));
    for (int i = k - r; i < k; ++i)
        for (int j = k - r; j < k; ++j) rows[i][j] = 0;
    return RestrictionMatrix(rows);
}

/// Cyclic permutation 1 -> 2 -> ... -> k -> 1; irreducible with period k.
inline RestrictionMatrix make_cycle(int k) {
    if (k < 1) throw invalid_input("make_cycle: k must be >= 1");
    std::vector<std::vector<int>> rows(k, std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i) rows[i][(i + 1) % k] = 1;
    return RestrictionMatrix(rows);
}

/// Block-cyclic matrix: `blocks` classes of `block_size` generators each,
/// with every generator of class c followed by any generator of class c+1
/// (mod blocks). Irreducible with period = blocks (for blocks >= 2) and
/// Perron value block_size, so it gives periodic families with growing
/// eigenvalue.
inline RestrictionMatrix make_block_cycle(int blocks, int block_size) {
    if (blocks < 1 || block_size < 1)
        throw invalid_input("make_block_cycle: blocks and block_size must be >= 1");
    const int k = blocks * block_size;
    std::vector<std::vector<int>> rows(k, std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i) {
        const int next = ((i / block_size) + 1) % blocks;
        for (int j = next * block_size; j < (next + 1) * block_size; ++j) rows[i][j] = 1;
    }
    return RestrictionMatrix(rows);
}

// ============================================================================
// Classification
// ============================================================================

enum class MatrixClass { primitive, irreducible, reducible };

struct Classification {
    MatrixClass cls;
    int period;  // 0 when reducible; 1 iff primitive
};

namespace detail {

// BFS distances from vertex 0 along (forward or reversed) edges; -1 = unreached.
inline std::vector<int> bfs_distances(const RestrictionMatrix& R, bool reversed) {
    const int k = R.k();
    std::vector<int> dist(k, -1);
    std::vector<int> queue;
    queue.reserve(k);
    dist[0] = 0;
    queue.push_back(0);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int v = 0; v < k; ++v) {
            const int edge = reversed ? R(v, u) : R(u, v);
            if (edge && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

inline bool strongly_connected(const RestrictionMatrix& R) {
    if (R.k() == 1) return R(0, 0) == 1;  // irreducibility needs a closed walk
    const auto fwd = bfs_distances(R, false);
    const auto bwd = bfs_distances(R, true);
    for (int v = 0; v < R.k(); ++v)
        if (fwd[v] < 0 || bwd[v] < 0) return false;
    return true;
}

// Period of a strongly connected digraph: gcd over all edges (u,v) of
// dist(u) + 1 - dist(v), dist being BFS distance from vertex 0.
inline int graph_period(const RestrictionMatrix& R) {
    const auto dist = bfs_distances(R, false);
    long long g = 0;
    for (int u = 0; u < R.k(); ++u)
        for (int v = 0; v < R.k(); ++v)
            if (R(u, v)) g = std::gcd(g, static_cast<long long>(dist[u]) + 1 - dist[v]);
    return static_cast<int>(g);
}

inline std::vector<std::uint8_t> bool_multiply(const std::vector<std::uint8_t>& a,
                                               const RestrictionMatrix& R) {
    const int k = R.k();
    std::vector<std::uint8_t> out(static_cast<std::size_t>(k) * k, 0);
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l)
            if (a[static_cast<std::size_t>(i) * k + l])
                for (int j = 0; j < k; ++j)
                    if (R(l, j)) out[static_cast<std::size_t>(i) * k + j] = 1;
    return out;
}

// Some power R^m, m <= max_power, is entrywise positive.
inline bool has_positive_power(const RestrictionMatrix& R, int max_power) {
    const int k = R.k();
    std::vector<std::uint8_t> B(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) B[static_cast<std::size_t>(i) * k + j] = R(i, j) ? 1 : 0;
    for (int m = 1; m <= max_power; ++m) {
        if (std::all_of(B.begin(), B.end(), [](std::uint8_t b) { return b != 0; })) return true;
        B = bool_multiply(B, R);
    }
    return false;
}

}  // namespace detail

/// Primitive / irreducible(period) / reducible. Primitivity is tested by
/// checking powers up to the Wielandt bound k^2 - 2k + 2.
inline Classification classify(const RestrictionMatrix& R) {
    if (!detail::strongly_connected(R)) return {MatrixClass::reducible, 0};
    const int k = R.k();
    const int wielandt = k * k - 2 * k + 2;
    if (detail::has_positive_power(R, wielandt)) return {MatrixClass::primitive, 1};
    return {MatrixClass::irreducible, detail::graph_period(R)};
}

// ============================================================================
// Residue table
// ============================================================================

/// For irreducible R with period p: t(i,j) in [0, p-1] such that every walk
/// i -> j has length = t(i,j) mod p. Entries come from BFS distances; the
/// result is verified against all matrix powers up to `horizon` (default
/// 3*k*p).
inline std::vector<std::vector<int>> residue_table(const RestrictionMatrix& R, int horizon = 0) {
    const auto cl = classify(R);
    if (cl.cls == MatrixClass::reducible)
        throw hypothesis_violation("residue_table: restriction matrix is reducible");
    const int k = R.k();
    const int p = cl.period;
    const auto dist = detail::bfs_distances(R, false);
    std::vector<std::vector<int>> t(k, std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) t[i][j] = ((dist[j] - dist[i]) % p + p) % p;

    if (horizon <= 0) horizon = 3 * k * p;
    std::vector<std::uint8_t> B(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) B[static_cast<std::size_t>(i) * k + j] = R(i, j) ? 1 : 0;
    for (int m = 1; m <= horizon; ++m) {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (B[static_cast<std::size_t>(i) * k + j] && (m - t[i][j]) % p != 0)
                    throw error("residue_table: BFS residues inconsistent with matrix powers");
        B = detail::bool_multiply(B, R);
    }
    return t;
}

// ============================================================================
// Spectral data
// ============================================================================

struct SpectralInfo {
    double lambda = 0.0;
    std::vector<double> right_vec;  // positive, scaled to unit sum
    std::vector<double> left_vec;   // positive, scaled so left . right = 1
    MatrixClass cls = MatrixClass::reducible;
    int period = 0;
    std::vector<std::vector<int>> residues;
};

namespace detail {

constexpr double kPowerIterTol = 1e-14;
constexpr int kPowerIterMax = 100000;

// Power iteration for the Perron vector of M = R + I (optionally transposed).
// The +I shift makes M primitive whenever R is irreducible, so the iteration
// converges in the periodic case too. Stops when the Rayleigh quotient's
// relative change drops below kPowerIterTol.
inline std::vector<double> perron_vector(const RestrictionMatrix& R, bool transposed) {
    const int k = R.k();
    std::vector<double> v(k, 1.0 / k), mv(k);
    double rayleigh_prev = 0.0;
    for (int iter = 0; iter < kPowerIterMax; ++iter) {
        double dot_vmv = 0.0, dot_vv = 0.0, sum = 0.0;
        for (int i = 0; i < k; ++i) {
            double acc = v[i];  // the +I term
            for (int j = 0; j < k; ++j) {
                const int edge = transposed ? R(j, i) : R(i, j);
                if (edge) acc += v[j];
            }
            mv[i] = acc;
            dot_vmv += v[i] * acc;
            dot_vv += v[i] * v[i];
            sum += acc;
        }
        const double rayleigh = dot_vmv / dot_vv;
        for (int i = 0; i < k; ++i) v[i] = mv[i] / sum;
        if (iter > 0 && std::abs(rayleigh - rayleigh_prev) <= kPowerIterTol * std::abs(rayleigh))
            break;
        rayleigh_prev = rayleigh;
    }
    return v;
}

}  // namespace detail

/// Perron eigenvalue and positive left/right eigenvectors of an irreducible
/// restriction matrix, plus class, period and residue table. Rejects
/// reducible input: the asymptotic-pressure results assume irreducibility.
inline SpectralInfo spectral(const RestrictionMatrix& R) {
    const auto cl = classify(R);
    if (cl.cls == MatrixClass::reducible)
        throw hypothesis_violation("spectral: restriction matrix is reducible");
    const int k = R.k();

    SpectralInfo info;
    info.cls = cl.cls;
    info.period = cl.period;
    info.right_vec = detail::perron_vector(R, false);
    info.left_vec = detail::perron_vector(R, true);

    double rsum = 0.0;
    for (double x : info.right_vec) rsum += x;
    for (double& x : info.right_vec) x /= rsum;
    double lr = 0.0;
    for (int i = 0; i < k; ++i) lr += info.left_vec[i] * info.right_vec[i];
    for (double& x : info.left_vec) x /= lr;

    // Final Rayleigh estimate through both eigenvectors: lambda + 1 = l.(R+I)r.
    double bilinear = 0.0;
    for (int i = 0; i < k; ++i) {
        double acc = info.right_vec[i];
        for (int j = 0; j < k; ++j)
            if (R(i, j)) acc += info.right_vec[j];
        bilinear += info.left_vec[i] * acc;
    }
    info.lambda = bilinear - 1.0;
    info.residues = residue_table(R);
    return info;
}

// ============================================================================
// Level counts
// ============================================================================

struct LevelCounts {
    std::vector<BigInt> L;      // L[n] = number of vertices at height n
    std::vector<BigInt> Delta;  // Delta[n] = number of vertices at height <= n
};

/// Exact level counts up to n_max via big-integer matrix-vector products.
/// Floating point is never involved: the lemma-ratio checks need exact
/// values where counts exceed 10^19.
inline LevelCounts level_counts(const RestrictionMatrix& R, int n_max) {
    if (n_max < 0) throw invalid_input("level_counts: n_max must be >= 0");
    const int k = R.k();
    LevelCounts out;
    out.L.resize(n_max + 1);
    out.Delta.resize(n_max + 1);
    out.L[0] = 1;
    out.Delta[0] = 1;
    std::vector<BigInt> v(k, 1);  // v = R^(n-1) . ones after n-1 steps
    for (int n = 1; n <= n_max; ++n) {
        BigInt sum = 0;
        for (const BigInt& x : v) sum += x;
        out.L[n] = sum;
        out.Delta[n] = out.Delta[n - 1] + out.L[n];
        if (n == n_max) break;
        std::vector<BigInt> next(k);
        for (int i = 0; i < k; ++i) {
            BigInt acc = 0;
            for (int j = 0; j < k; ++j)
                if (R(i, j)) acc += v[j];
            next[i] = std::move(acc);
        }
        v = std::move(next);
    }
    return out;
}

// ============================================================================
// Collapsed Fibonacci recursion
// ============================================================================

/// The 2x2 companion of R(k,r): level populations split into free vertices
/// (last generator among the first k-r) and restricted ones. Shares its
/// maximal eigenvalue with R(k,r).
struct CollapsedFibonacci {
    std::array<std::array<long long, 2>, 2> matrix;  // [[k-r, k-r], [r, 0]]
    double lambda;                                   // (k-r + sqrt((k-r)(k+3r))) / 2
};

inline CollapsedFibonacci collapsed_fibonacci(int k, int r) {
    if (k < 1) throw invalid_input("collapsed_fibonacci: k must be >= 1");
    if (r < 0 || r >= k) throw invalid_input("collapsed_fibonacci: need 0 <= r <= k-1");
    CollapsedFibonacci out;
    out.matrix = {{{k - r, k - r}, {r, 0}}};
    const double f = k - r;
    out.lambda = (f + std::sqrt(f * (k + 3.0 * r))) / 2.0;
    return out;
}

/// u_n + v_n from (u_0, v_0) = (1, 0); equals L[n] of R(k,r) exactly.
inline std::vector<BigInt> collapsed_level_counts(int k, int r, int n_max) {
    collapsed_fibonacci(k, r);  // parameter validation
    if (n_max < 0) throw invalid_input("collapsed_level_counts: n_max must be >= 0");
    std::vector<BigInt> out(n_max + 1);
    BigInt u = 1, v = 0;
    out[0] = u + v;
    for (int n = 1; n <= n_max; ++n) {
        BigInt u_next = BigInt(k - r) * (u + v);
        BigInt v_next = BigInt(r) * u;
        u = std::move(u_next);
        v = std::move(v_next);
        out[n] = u + v;
    }
    return out;
}

}  // namespace treepressure
