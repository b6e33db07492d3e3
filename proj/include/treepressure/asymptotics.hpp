#pragma once

/**
 * Asymptotic-pressure diagnostics.
 *
 * For an irreducible restriction matrix with Perron value lambda and an
 * interaction with maximum row sum s, the limiting pressure satisfies
 *
 *     log s * (lambda - 1) / lambda  <=  lim_n P_n  <=  log s,
 *
 * so along a family with lambda_k -> infinity the pressure tends to log s.
 * This header computes the finite-n objects those statements are checked
 * with: the level-count ratio |L_n| / |Delta_n| -> (lambda-1)/lambda, the
 * bound pair, a conservative limit estimate (the last computed term plus a
 * Cauchy-style convergence flag; the theory licenses no extrapolation rate,
 * so none is applied), and k-sweeps over tree families.
 */

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/interaction.hpp"
#include "treepressure/numeric.hpp"
#include "treepressure/restriction.hpp"
#include "treepressure/transfer.hpp"

namespace treepressure {

// ============================================================================
// Lemma ratio: |L_n| / |Delta_n| -> (lambda - 1) / lambda
// ============================================================================

struct RatioRecord {
    int n;
    double ratio;   // exact integer quotient, converted to real at the end
    double target;  // (lambda - 1) / lambda
    double gap;     // |ratio - target|
};

inline std::vector<RatioRecord> lemma_ratio_check(const RestrictionMatrix& R, int n_max) {
    const auto info = spectral(R);  // rejects reducible input
    const double target = (info.lambda - 1.0) / info.lambda;
    const auto lc = level_counts(R, n_max);
    std::vector<RatioRecord> out;
    out.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double ratio = Rational(lc.L[n], lc.Delta[n]).convert_to<double>();
        out.push_back({n, ratio, target, std::abs(ratio - target)});
    }
    return out;
}

// ============================================================================
// Theorem bounds
// ============================================================================

struct TheoremBounds {
    double lower = 0.0;  // log s * (lambda - 1) / lambda
    double upper = 0.0;  // log s
    // lambda <= 1 turns the lower bound into 0 * log s; it carries no
    // information then and is flagged.
    bool degenerate_lower = false;
};

inline TheoremBounds theorem_bounds(const InteractionSpec& spec, double lambda) {
    TheoremBounds out;
    out.upper = spec.exact ? log_of(spec.s_rat) : std::log(spec.s);
    // Perron values of 0/1 irreducible matrices are either exactly 1 or at
    // least the plastic number; the slack only absorbs iteration rounding.
    out.degenerate_lower = lambda <= 1.0 + 1e-12;
    const double factor = out.degenerate_lower ? 0.0 : (lambda - 1.0) / lambda;
    out.lower = out.upper * factor;
    // For s < 1 the scaled value sits above log s; keep the pair ordered.
    if (out.lower > out.upper) out.lower = out.upper;
    return out;
}

// ============================================================================
// Limit estimation
// ============================================================================

struct LimitEstimate {
    double estimate = 0.0;       // P_{n_max}; no extrapolation
    int n_used = 0;
    double last_increment = 0.0; // |P_{n_max} - P_{n_max - 1}|
    bool converged = false;      // last (up to) three increments all <= tau
};

inline LimitEstimate estimate_limit_pressure(const std::vector<SeriesRecord>& records,
                                             double tau) {
    if (records.size() < 3)
        throw invalid_input("estimate_limit_pressure: need at least 3 series records");
    if (!(tau >= 0)) throw invalid_input("estimate_limit_pressure: tau must be >= 0");
    std::vector<double> increments;
    increments.reserve(records.size() - 1);
    for (std::size_t i = 1; i < records.size(); ++i)
        increments.push_back(std::abs(records[i].P - records[i - 1].P));
    const std::size_t tail = increments.size() < 3 ? increments.size() : 3;
    bool converged = true;
    for (std::size_t i = increments.size() - tail; i < increments.size(); ++i)
        if (!(increments[i] <= tau)) converged = false;

    LimitEstimate out;
    out.estimate = records.back().P;
    out.n_used = records.back().n;
    out.last_increment = increments.back();
    out.converged = converged;
    return out;
}

// ============================================================================
// Combined per-instance analysis
// ============================================================================

struct PressureAnalysis {
    std::vector<SeriesRecord> records;
    SpectralInfo spec_info;
    TheoremBounds bounds;
    std::optional<LimitEstimate> limit;  // present when n_max >= 2
};

inline PressureAnalysis analyze_pressure(const RestrictionMatrix& R, const InteractionSpec& spec,
                                         int n_max, Mode mode, BackendKind backend, double tau) {
    PressureAnalysis out;
    out.spec_info = spectral(R);
    out.records = pressure_series(R, spec, n_max, mode, backend);
    out.bounds = theorem_bounds(spec, out.spec_info.lambda);
    if (out.records.size() >= 3) out.limit = estimate_limit_pressure(out.records, tau);
    return out;
}

// ============================================================================
// k-sweeps over tree families
// ============================================================================

struct TreeFamily {
    enum class Kind { full, fibonacci, explicit_list };
    enum class RRule { fixed, k_minus_one };

    Kind kind = Kind::full;
    RRule r_rule = RRule::fixed;
    int r = 0;
    std::vector<std::pair<int, RestrictionMatrix>> matrices;  // explicit_list, keyed by k

    static TreeFamily full() { return {}; }
    static TreeFamily fibonacci_fixed(int r) {
        TreeFamily f;
        f.kind = Kind::fibonacci;
        f.r = r;
        return f;
    }
    static TreeFamily fibonacci_k_minus_one() {
        TreeFamily f;
        f.kind = Kind::fibonacci;
        f.r_rule = RRule::k_minus_one;
        return f;
    }
    static TreeFamily explicit_list(std::vector<std::pair<int, RestrictionMatrix>> ms) {
        TreeFamily f;
        f.kind = Kind::explicit_list;
        f.matrices = std::move(ms);
        return f;
    }

    RestrictionMatrix instantiate(int k) const {
        switch (kind) {
            case Kind::full:
                return make_full_tree(k);
            case Kind::fibonacci:
                return make_generalized_fibonacci(k, r_rule == RRule::k_minus_one ? k - 1 : r);
            case Kind::explicit_list:
                for (const auto& [key, m] : matrices)
                    if (key == k) return m;
                throw invalid_input("TreeFamily: no explicit matrix for k = " + std::to_string(k));
        }
        throw invalid_input("TreeFamily: unknown kind");
    }

    std::vector<int> keys() const {
        std::vector<int> ks;
        for (const auto& [key, m] : matrices) ks.push_back(key);
        return ks;
    }
};

struct SweepEntry {
    int k = 0;
    bool ok = false;
    std::string status = "ok";  // error text on per-k failure
    double lambda = 0.0;
    int n_used = 0;
    double logZ = 0.0;
    double P = 0.0;  // the limit estimate (last computed pressure)
    TheoremBounds bounds;
    bool converged = false;
    double gap = 0.0;  // upper - P; shrinks like O(1/lambda_k) along theorem families
};

struct SweepRequest {
    TreeFamily family;
    std::vector<int> ks;  // ascending
    int n_max = 8;
    double tau = 1e-3;
    Mode mode = Mode::extendable;
    BackendKind backend = BackendKind::log_real;
    int threads = 1;  // 0 = hardware concurrency
};

namespace detail {

inline SweepEntry sweep_entry(const SweepRequest& req, const InteractionSpec& spec, int k) {
    SweepEntry entry;
    entry.k = k;
    try {
        const auto R = req.family.instantiate(k);
        const auto analysis = analyze_pressure(R, spec, req.n_max, req.mode, req.backend, req.tau);
        if (!analysis.limit)
            throw invalid_input("sweep_k: n_max must be >= 2 for limit estimation");
        entry.ok = true;
        entry.lambda = analysis.spec_info.lambda;
        entry.n_used = analysis.limit->n_used;
        entry.logZ = analysis.records.back().logZ;
        entry.P = analysis.limit->estimate;
        entry.bounds = analysis.bounds;
        entry.converged = analysis.limit->converged;
        entry.gap = entry.bounds.upper - entry.P;
    } catch (const std::exception& e) {
        entry.ok = false;
        entry.status = e.what();
    }
    return entry;
}

}  // namespace detail

/// Per-k pressure analysis along a family. Per-k failures are recorded in
/// the entry's status and the sweep continues; entries come back in input
/// order regardless of scheduling.
inline std::vector<SweepEntry> sweep_k(const SweepRequest& req, const InteractionSpec& spec) {
    if (req.ks.empty()) throw invalid_input("sweep_k: empty k range");
    unsigned threads = req.threads == 0 ? std::thread::hardware_concurrency()
                                        : static_cast<unsigned>(req.threads);
    if (threads < 1) threads = 1;

    std::vector<SweepEntry> entries(req.ks.size());
    if (threads == 1 || req.ks.size() == 1) {
        for (std::size_t i = 0; i < req.ks.size(); ++i)
            entries[i] = detail::sweep_entry(req, spec, req.ks[i]);
        return entries;
    }
    std::vector<std::future<SweepEntry>> futures;
    futures.reserve(req.ks.size());
    for (int k : req.ks)
        futures.push_back(
            std::async(std::launch::async, [&req, &spec, k] { return detail::sweep_entry(req, spec, k); }));
    for (std::size_t i = 0; i < futures.size(); ++i) entries[i] = futures[i].get();
    return entries;
}

/// The pre-limit upper estimate from the theorem's proof:
/// log Z_n <= log|w| + sum_{m<=n} L_m log s, hence
/// P_n <= (log|w| + sum_{m<=n} L_m log s) / |Delta_n|.
inline double upper_estimate_line(const InteractionSpec& spec, const LevelCounts& lc, int n) {
    double log_w_total;
    if (spec.exact) {
        Rational total = 0;
        for (const Rational& x : spec.w_rat) total += x;
        log_w_total = log_of(total);
    } else {
        double total = 0;
        for (double x : spec.w) total += x;
        log_w_total = std::log(total);
    }
    const double log_s = spec.exact ? log_of(spec.s_rat) : std::log(spec.s);
    // sum_{m<=n} L_m = Delta_n - 1
    const double level_total = (lc.Delta[n] - 1).convert_to<double>();
    return (log_w_total + level_total * log_s) / lc.Delta[n].convert_to<double>();
}

}  // namespace treepressure
