#pragma once

/**
 * Bottom-up transfer recursion for partition functions on restricted trees.
 *
 * W_q(t,i) is the total weight of labelings of the depth-q subtree hanging
 * from a vertex of generator type t whose own label is fixed to i, the
 * product taken over edges strictly inside that subtree (the vertex's own
 * site energy and the edge above it are excluded). It satisfies
 *
 *     W_0(t,i) = [i admissible]
 *     W_q(t,i) = prod_{u : R(t,u)=1} sum_j E(i,j) W_{q-1}(u,j)
 *
 * and the depth-n partition function is
 *
 *     Z_n = sum_i w_i prod_{t=1..k} sum_j E(i,j) W_{n-1}(t,j)
 *
 * (the root is adjacent to every generator). Two pattern conventions:
 * in `extendable` mode the bottom-level labels are restricted to the
 * essential alphabet, so Z_n sums over the distinct restrictions to Delta_n
 * of labelings of the full infinite tree; in `local` mode every symbol is
 * admissible at the bottom and Z_n sums over patterns admissible
 * edge-by-edge inside Delta_n. The two coincide whenever the essential
 * alphabet is the whole alphabet.
 *
 * Summation order is pinned (ascending symbol, ascending child type) so
 * log-domain results are bit-reproducible run to run.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/interaction.hpp"
#include "treepressure/numeric.hpp"
#include "treepressure/restriction.hpp"

namespace treepressure {

// ============================================================================
// Weights lifted into a backend
// ============================================================================

template <Weight W>
struct WeightedInteraction {
    int d = 0;
    std::vector<W> E;  // d x d
    std::vector<W> w;  // d
    std::vector<std::uint8_t> essential_mask;

    static WeightedInteraction lift(const InteractionSpec& spec) {
        WeightedInteraction out;
        out.d = spec.d;
        out.essential_mask = spec.essential_mask;
        out.E.reserve(spec.E.size());
        out.w.reserve(spec.w.size());
        if constexpr (std::is_same_v<W, ExactWeight>) {
            if (!spec.exact)
                throw backend_mismatch(
                    "exact backend requested but the spec has no exact-rational view");
            for (const Rational& e : spec.E_rat) out.E.push_back(W::from_rational(e));
            for (const Rational& x : spec.w_rat) out.w.push_back(W::from_rational(x));
        } else {
            for (double e : spec.E) out.E.push_back(W::from_real(e));
            for (double x : spec.w) out.w.push_back(W::from_real(x));
        }
        return out;
    }
};

// ============================================================================
// Transfer table
// ============================================================================

template <Weight W>
struct TransferTable {
    int k = 0, d = 0;
    int depth = 0;  // q
    Mode mode = Mode::extendable;
    std::vector<W> cells;  // k x d, cells[t*d + i] = W_depth(t, i)

    // First depth at which some generator type lost all admissible labels.
    std::optional<int> dead_depth;

    const W& at(int t, int i) const { return cells[static_cast<std::size_t>(t) * d + i]; }
};

namespace detail {

template <Weight W>
void scan_dead_rows(TransferTable<W>& table) {
    if (table.dead_depth) return;
    for (int t = 0; t < table.k; ++t) {
        bool all_zero = true;
        for (int i = 0; i < table.d; ++i)
            if (!table.at(t, i).is_zero()) {
                all_zero = false;
                break;
            }
        if (all_zero) {
            table.dead_depth = table.depth;
            return;
        }
    }
}

// S(u,i) = sum_j E(i,j) * W(u,j): the weight passed up an edge into a
// type-u child when the parent is labeled i.
template <Weight W>
std::vector<W> edge_sums(const TransferTable<W>& table, const WeightedInteraction<W>& wi) {
    const int k = table.k, d = table.d;
    std::vector<W> S(static_cast<std::size_t>(k) * d, W::zero());
    for (int u = 0; u < k; ++u)
        for (int i = 0; i < d; ++i) {
            W acc = W::zero();
            for (int j = 0; j < d; ++j)
                acc = acc + wi.E[static_cast<std::size_t>(i) * d + j] * table.at(u, j);
            S[static_cast<std::size_t>(u) * d + i] = std::move(acc);
        }
    return S;
}

}  // namespace detail

template <Weight W>
TransferTable<W> initial_table(const RestrictionMatrix& R, const WeightedInteraction<W>& wi,
                               Mode mode) {
    TransferTable<W> table;
    table.k = R.k();
    table.d = wi.d;
    table.depth = 0;
    table.mode = mode;
    table.cells.assign(static_cast<std::size_t>(table.k) * table.d, W::zero());
    for (int t = 0; t < table.k; ++t)
        for (int i = 0; i < table.d; ++i) {
            const bool admissible = mode == Mode::local || wi.essential_mask[i];
            if (admissible) table.cells[static_cast<std::size_t>(t) * table.d + i] = W::one();
        }
    detail::scan_dead_rows(table);
    return table;
}

template <Weight W>
void advance_table(TransferTable<W>& table, const RestrictionMatrix& R,
                   const WeightedInteraction<W>& wi) {
    const int k = table.k, d = table.d;
    const auto S = detail::edge_sums(table, wi);
    std::vector<W> next(static_cast<std::size_t>(k) * d, W::one());
    for (int t = 0; t < k; ++t)
        for (int i = 0; i < d; ++i) {
            W acc = W::one();
            for (int u = 0; u < k; ++u)
                if (R(t, u)) acc = acc * S[static_cast<std::size_t>(u) * d + i];
            next[static_cast<std::size_t>(t) * d + i] = std::move(acc);
        }
    table.cells = std::move(next);
    table.depth += 1;
    detail::scan_dead_rows(table);
}

/// W_q table for (R, spec) in backend W. Cost O(q k d^2 + q k^2 d) weight ops.
template <Weight W>
TransferTable<W> transfer_table(const RestrictionMatrix& R, const InteractionSpec& spec, int q,
                                Mode mode) {
    if (q < 0) throw invalid_input("transfer_table: depth must be >= 0");
    const auto wi = WeightedInteraction<W>::lift(spec);
    auto table = initial_table(R, wi, mode);
    for (int step = 0; step < q; ++step) advance_table(table, R, wi);
    return table;
}

// ============================================================================
// Partition function and pressure
// ============================================================================

struct PartitionResult {
    int n = 0;
    Mode mode = Mode::extendable;
    BackendKind backend = BackendKind::log_real;
    double logZ = 0.0;                 // -inf when Z_n = 0
    std::optional<Rational> exactZ;    // exact backend only
    std::optional<int> dead_depth;     // see TransferTable
};

namespace detail {

template <Weight W>
W depth_zero_partition(const WeightedInteraction<W>& wi, Mode mode) {
    W acc = W::zero();
    for (int i = 0; i < wi.d; ++i) {
        const bool admissible = mode == Mode::local || wi.essential_mask[i];
        if (admissible) acc = acc + wi.w[i];
    }
    return acc;
}

// Z_{depth+1} from a table: the root takes every symbol, weighted by its
// site energy, with one edge sum per generator.
template <Weight W>
W root_partition(const TransferTable<W>& table, const WeightedInteraction<W>& wi) {
    const auto S = detail::edge_sums(table, wi);
    const int k = table.k, d = table.d;
    W acc = W::zero();
    for (int i = 0; i < d; ++i) {
        W term = wi.w[i];
        for (int t = 0; t < k; ++t) term = term * S[static_cast<std::size_t>(t) * d + i];
        acc = acc + term;
    }
    return acc;
}

template <Weight W>
PartitionResult partition_impl(const RestrictionMatrix& R, const InteractionSpec& spec, int n,
                               Mode mode, BackendKind backend) {
    if (n < 0) throw invalid_input("partition_function: n must be >= 0");
    const auto wi = WeightedInteraction<W>::lift(spec);
    PartitionResult out;
    out.n = n;
    out.mode = mode;
    out.backend = backend;
    W z = W::zero();
    if (n == 0) {
        z = depth_zero_partition(wi, mode);
        if (z.is_zero()) out.dead_depth = 0;
    } else {
        auto table = initial_table(R, wi, mode);
        for (int step = 0; step < n - 1; ++step) advance_table(table, R, wi);
        z = root_partition(table, wi);
        out.dead_depth = table.dead_depth;
    }
    out.logZ = z.log_value();
    if constexpr (std::is_same_v<W, ExactWeight>) out.exactZ = z.value;
    return out;
}

}  // namespace detail

inline PartitionResult partition_function(const RestrictionMatrix& R, const InteractionSpec& spec,
                                          int n, Mode mode, BackendKind backend) {
    if (backend == BackendKind::exact_rational)
        return detail::partition_impl<ExactWeight>(R, spec, n, mode, backend);
    return detail::partition_impl<LogWeight>(R, spec, n, mode, backend);
}

/// P_n = log Z_n / |Delta_n|. Throws empty_system when Z_n = 0, reporting
/// the depth at which admissibility died.
inline double pressure(const RestrictionMatrix& R, const InteractionSpec& spec, int n, Mode mode,
                       BackendKind backend) {
    const auto pr = partition_function(R, spec, n, mode, backend);
    if (pr.logZ == -std::numeric_limits<double>::infinity())
        throw empty_system("pressure: Z_n = 0, no admissible labeling of Delta_n",
                           pr.dead_depth.value_or(n));
    const auto lc = level_counts(R, n);
    return pr.logZ / lc.Delta[n].convert_to<double>();
}

// ============================================================================
// Pressure series
// ============================================================================

struct SeriesRecord {
    int n = 0;
    BigInt L;       // |L_n|
    BigInt Delta;   // |Delta_n|
    double logZ = 0.0;
    double P = 0.0;     // logZ / |Delta_n|
    double ratio = 0.0; // |L_n| / |Delta_n|, exact integers divided at the end
};

namespace detail {

template <Weight W>
std::vector<SeriesRecord> series_impl(const RestrictionMatrix& R, const InteractionSpec& spec,
                                      int n_max, Mode mode) {
    const auto wi = WeightedInteraction<W>::lift(spec);
    const auto lc = level_counts(R, n_max);
    std::vector<SeriesRecord> records;
    records.reserve(n_max + 1);

    auto push = [&](int n, const W& z, std::optional<int> dead) {
        const double logZ = z.log_value();
        if (logZ == -std::numeric_limits<double>::infinity())
            throw empty_system("pressure_series: Z_n = 0 at n = " + std::to_string(n),
                               dead.value_or(n));
        SeriesRecord rec;
        rec.n = n;
        rec.L = lc.L[n];
        rec.Delta = lc.Delta[n];
        rec.logZ = logZ;
        rec.P = logZ / lc.Delta[n].convert_to<double>();
        rec.ratio = Rational(lc.L[n], lc.Delta[n]).convert_to<double>();
        records.push_back(std::move(rec));
    };

    push(0, depth_zero_partition(wi, mode), std::optional<int>(0));
    if (n_max == 0) return records;

    auto table = initial_table(R, wi, mode);  // depth 0, reused across n
    for (int n = 1; n <= n_max; ++n) {
        push(n, root_partition(table, wi), table.dead_depth);
        if (n < n_max) advance_table(table, R, wi);
    }
    return records;
}

}  // namespace detail

/// Per-n records (L, Delta, log Z_n, P_n) computed incrementally with one
/// transfer table reused across depths.
inline std::vector<SeriesRecord> pressure_series(const RestrictionMatrix& R,
                                                 const InteractionSpec& spec, int n_max, Mode mode,
                                                 BackendKind backend) {
    if (n_max < 1) throw invalid_input("pressure_series: n_max must be >= 1");
    if (backend == BackendKind::exact_rational)
        return detail::series_impl<ExactWeight>(R, spec, n_max, mode);
    return detail::series_impl<LogWeight>(R, spec, n_max, mode);
}

}  // namespace treepressure
