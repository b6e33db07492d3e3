#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "treepressure/asymptotics.hpp"
#include "treepressure/oracle.hpp"
#include "treepressure/transfer.hpp"
#include "helpers.hpp"

using namespace treepressure;
using testutil::close_abs;
using testutil::close_rel;
using testutil::spec_from_ints;

TEST_CASE("transfer_table: named cases") {
    const auto full2 = make_full_tree(2);
    const auto golden = testutil::golden_mean_spec();

    // Depth 1, local: each vertex has 2 children, (sum_j E(1,j))^2 = 4.
    const auto t1 = transfer_table<ExactWeight>(full2, golden, 1, Mode::local);
    for (int t = 0; t < 2; ++t) {
        CHECK(t1.at(t, 0).value == 4);
        CHECK(t1.at(t, 1).value == 1);
    }

    // Depth 0: all ones on admissible symbols.
    const auto t0 = transfer_table<ExactWeight>(full2, golden, 0, Mode::local);
    for (int t = 0; t < 2; ++t)
        for (int i = 0; i < 2; ++i) CHECK(t0.at(t, i).value == 1);

    // Extendable mode restricts the bottom level to the essential alphabet.
    const auto pruned = spec_from_ints({{1, 1}, {0, 0}}, {1, 1});
    const auto te = transfer_table<ExactWeight>(full2, pruned, 1, Mode::extendable);
    for (int t = 0; t < 2; ++t) {
        CHECK(te.at(t, 0).value == 1);
        CHECK(te.at(t, 1).value == 0);
    }
    const auto te0 = transfer_table<ExactWeight>(full2, pruned, 0, Mode::extendable);
    for (int t = 0; t < 2; ++t) CHECK(te0.at(t, 1).value == 0);
}

TEST_CASE("transfer_table: exact backend requires an exact spec") {
    PotentialSpec p;
    p.d = 2;
    p.phi = {0.5, 0.5, 0.5, 0.5};
    p.chi = {0, 0};
    const auto real_spec = from_potentials(p);
    CHECK_THROWS_AS(transfer_table<ExactWeight>(make_full_tree(2), real_spec, 1, Mode::local),
                    backend_mismatch);
    CHECK_NOTHROW(transfer_table<LogWeight>(make_full_tree(2), real_spec, 1, Mode::local));
}

TEST_CASE("partition_function: frozen desk values") {
    const auto full2 = make_full_tree(2);

    // Full shift on the binary tree: every labeling allowed.
    const auto fs = partition_function(full2, testutil::full_shift_spec(2), 2, Mode::local,
                                       BackendKind::exact_rational);
    CHECK(*fs.exactZ == 128);

    const auto golden = testutil::golden_mean_spec();
    CHECK(*partition_function(full2, golden, 1, Mode::local, BackendKind::exact_rational).exactZ ==
          5);
    CHECK(*partition_function(full2, golden, 2, Mode::local, BackendKind::exact_rational).exactZ ==
          41);

    const auto weighted = build_interaction(
        std::vector<std::vector<Rational>>{{1, 1}, {1, 0}}, std::vector<Rational>{1, 2});
    CHECK(*partition_function(full2, weighted, 1, Mode::local, BackendKind::exact_rational)
               .exactZ == 11);

    // Z_0 sums the admissible site energies.
    CHECK(*partition_function(full2, weighted, 0, Mode::local, BackendKind::exact_rational)
               .exactZ == 3);
}

TEST_CASE("pressure: named cases") {
    const auto full2 = make_full_tree(2);
    for (int n = 0; n <= 12; ++n)
        CHECK(close_abs(pressure(full2, testutil::full_shift_spec(2), n, Mode::extendable,
                                 BackendKind::log_real),
                        std::log(2.0), 1e-12));

    CHECK(close_rel(
        pressure(full2, testutil::golden_mean_spec(), 1, Mode::local, BackendKind::log_real),
        std::log(5.0) / 3.0, 1e-12));

    const auto single = spec_from_ints({{1}}, {1});
    for (int n = 0; n <= 6; ++n)
        CHECK(pressure(full2, single, n, Mode::local, BackendKind::exact_rational) == 0.0);
}

TEST_CASE("pressure: empty extendable system reports the dead depth") {
    // Symbol 2 has no successor; symbol 1 only maps to 2. Nothing survives
    // in extendable mode.
    const auto dying = spec_from_ints({{0, 1}, {0, 0}}, {1, 1});
    CHECK(dying.essential.empty());
    try {
        pressure(make_full_tree(2), dying, 2, Mode::extendable, BackendKind::exact_rational);
        FAIL("expected empty_system");
    } catch (const empty_system& e) {
        CHECK(e.dead_depth() == 0);
    }
    // Locally the same spec dies once depth exceeds the longest chain.
    CHECK(*partition_function(make_full_tree(2), dying, 1, Mode::local,
                              BackendKind::exact_rational)
               .exactZ == 1);
    try {
        pressure(make_full_tree(2), dying, 2, Mode::local, BackendKind::exact_rational);
        FAIL("expected empty_system");
    } catch (const empty_system& e) {
        CHECK(e.dead_depth() == 2);
    }
}

TEST_CASE("oracle equivalence on randomized rational specs") {
    std::mt19937_64 rng(123456);
    const std::vector<RestrictionMatrix> trees = {
        make_full_tree(2), make_generalized_fibonacci(2, 1), make_cycle(3),
        make_generalized_fibonacci(3, 2)};
    for (const auto& R : trees) {
        for (int n = 1; n <= 3; ++n) {
            for (int d = 2; d <= 3; ++d) {
                // Keep brute-force spaces tiny in the unit suite.
                const auto lc = level_counts(R, n);
                if (boost::multiprecision::pow(BigInt(d), lc.Delta[n].convert_to<unsigned>()) >
                    200000)
                    continue;
                for (int trial = 0; trial < 8; ++trial) {
                    const auto spec = random_rational_spec(rng, d);
                    const auto brute = brute_force_both(R, spec, n);
                    for (const Mode mode : {Mode::local, Mode::extendable}) {
                        const Rational expected =
                            mode == Mode::local ? brute.local : brute.extendable;
                        const auto exact =
                            partition_function(R, spec, n, mode, BackendKind::exact_rational);
                        CHECK(*exact.exactZ == expected);
                        const auto lg = partition_function(R, spec, n, mode, BackendKind::log_real);
                        const double expected_log = log_of(expected);
                        if (std::isinf(expected_log))
                            CHECK(lg.logZ == expected_log);
                        else
                            CHECK(close_abs(lg.logZ, expected_log,
                                            1e-9 * std::max(1.0, std::abs(expected_log))));
                    }
                }
            }
        }
    }
}

TEST_CASE("backends agree on logZ") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + static_cast<int>(draw_below(rng, 2));
        const auto spec = random_rational_spec(rng, d);
        const auto R = testutil::random_irreducible(rng, 3);
        for (const Mode mode : {Mode::local, Mode::extendable}) {
            const auto exact = partition_function(R, spec, 6, mode, BackendKind::exact_rational);
            const auto lg = partition_function(R, spec, 6, mode, BackendKind::log_real);
            if (std::isinf(exact.logZ))
                CHECK(lg.logZ == exact.logZ);
            else
                CHECK(close_abs(lg.logZ, exact.logZ, 1e-9 * std::max(1.0, std::abs(exact.logZ))));
        }
    }
}

TEST_CASE("modes coincide when every symbol is essential") {
    std::mt19937_64 rng(99);
    int done = 0;
    while (done < 25) {
        const int d = 2 + static_cast<int>(draw_below(rng, 2));
        const auto spec = random_rational_spec(rng, d);
        if (static_cast<int>(spec.essential.size()) != d) continue;
        ++done;
        const auto R = testutil::random_irreducible(rng, 2 + static_cast<int>(draw_below(rng, 2)));
        for (int n = 0; n <= 4; ++n) {
            const auto a = partition_function(R, spec, n, Mode::extendable,
                                              BackendKind::exact_rational);
            const auto b = partition_function(R, spec, n, Mode::local,
                                              BackendKind::exact_rational);
            CHECK(*a.exactZ == *b.exactZ);
        }
    }
}

TEST_CASE("Z_n is invariant under alphabet permutation") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 3;
        const auto spec = random_rational_spec(rng, d);
        std::vector<int> perm = {1, 2, 0};
        std::vector<std::vector<Rational>> A2(d, std::vector<Rational>(d));
        std::vector<Rational> w2(d);
        for (int i = 0; i < d; ++i) {
            w2[i] = spec.w_rat[perm[i]];
            for (int j = 0; j < d; ++j)
                A2[i][j] = spec.A_rat[static_cast<std::size_t>(perm[i]) * d + perm[j]];
        }
        const auto permuted = build_interaction(A2, w2);
        const auto R = make_generalized_fibonacci(2, 1);
        for (const Mode mode : {Mode::local, Mode::extendable})
            for (int n = 0; n <= 5; ++n)
                CHECK(*partition_function(R, spec, n, mode, BackendKind::exact_rational).exactZ ==
                      *partition_function(R, permuted, n, mode, BackendKind::exact_rational)
                           .exactZ);
    }
}

TEST_CASE("pressure_series is incremental and deterministic") {
    const auto R = make_full_tree(3);
    const auto golden = testutil::golden_mean_spec();
    const auto series = pressure_series(R, golden, 8, Mode::extendable, BackendKind::log_real);
    REQUIRE(series.size() == 9);
    for (int n = 0; n <= 8; ++n) {
        CHECK(series[n].n == n);
        // Each record equals a fresh partition_function run, bit for bit.
        const auto pf = partition_function(R, golden, n, Mode::extendable, BackendKind::log_real);
        CHECK(series[n].logZ == pf.logZ);
    }
    const auto again = pressure_series(R, golden, 8, Mode::extendable, BackendKind::log_real);
    for (std::size_t i = 0; i < series.size(); ++i) {
        CHECK(series[i].logZ == again[i].logZ);
        CHECK(series[i].P == again[i].P);
    }
    CHECK_THROWS_AS(pressure_series(R, golden, 0, Mode::local, BackendKind::log_real),
                    invalid_input);
}

TEST_CASE("pressure stays below the theorem's pre-limit upper estimate") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 15; ++trial) {
        const auto spec = random_rational_spec(rng, 2 + static_cast<int>(draw_below(rng, 2)));
        const auto R = testutil::random_irreducible(rng, 2 + static_cast<int>(draw_below(rng, 3)));
        const auto lc = level_counts(R, 8);
        std::vector<SeriesRecord> series;
        try {
            series = pressure_series(R, spec, 8, Mode::extendable, BackendKind::log_real);
        } catch (const empty_system&) {
            continue;
        }
        for (const auto& rec : series)
            CHECK(rec.P <= upper_estimate_line(spec, lc, rec.n) + 1e-10);
    }
}
