#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "treepressure/interaction.hpp"
#include "helpers.hpp"

using namespace treepressure;
using testutil::close_rel;
using testutil::spec_from_ints;

TEST_CASE("build_interaction: named cases") {
    const auto golden = testutil::golden_mean_spec();
    CHECK(golden.E_rat == std::vector<Rational>{1, 1, 1, 0});
    CHECK(golden.s_rat == 2);
    CHECK(golden.essential == std::vector<int>{0, 1});

    const auto weighted = build_interaction(
        std::vector<std::vector<Rational>>{{1, 1}, {1, 0}}, std::vector<Rational>{1, 2});
    CHECK(weighted.E_rat == std::vector<Rational>{1, 2, 1, 0});
    CHECK(weighted.s_rat == 3);
    CHECK(weighted.argmax_rows == std::vector<int>{0});

    const auto pruned = spec_from_ints({{1, 1}, {0, 0}}, {1, 1});
    CHECK(pruned.s_rat == 2);
    CHECK(pruned.essential == std::vector<int>{0});
}

TEST_CASE("build_interaction: domain errors") {
    CHECK_THROWS_AS(build_interaction(std::vector<std::vector<Rational>>{{-1, 1}, {1, 0}},
                                      std::vector<Rational>{1, 1}),
                    invalid_input);
    CHECK_THROWS_AS(build_interaction(std::vector<std::vector<Rational>>{{1, 1}, {1, 0}},
                                      std::vector<Rational>{1, 0}),
                    invalid_input);
    CHECK_THROWS_AS(spec_from_ints({{0, 0}, {0, 0}}, {1, 1}), degenerate_interaction);
    CHECK_THROWS_AS(build_interaction(std::vector<std::vector<Rational>>{{1, 1}},
                                      std::vector<Rational>{1, 1}),
                    invalid_input);
}

TEST_CASE("from_potentials: named cases") {
    PotentialSpec full;
    full.d = 2;
    full.phi = {0, 0, 0, 0};
    full.chi = {0, 0};
    const auto fs = from_potentials(full);
    CHECK(fs.s == 2.0);
    CHECK(fs.A == std::vector<double>{1, 1, 1, 1});

    PotentialSpec golden;
    golden.d = 2;
    const double ninf = -std::numeric_limits<double>::infinity();
    golden.phi = {0, 0, 0, ninf};
    golden.chi = {0, 0};
    const auto gm = from_potentials(golden);
    CHECK(gm.E == std::vector<double>{1, 1, 1, 0});
    CHECK(gm.s == 2.0);

    PotentialSpec weighted;
    weighted.d = 2;
    weighted.phi = {0, 0, 0, 0};
    weighted.chi = {0, std::log(2.0)};
    const auto ws = from_potentials(weighted);
    CHECK(close_rel(ws.w[1], 2.0, 1e-15));
    CHECK(close_rel(ws.s, 3.0, 1e-15));

    PotentialSpec bad = full;
    bad.phi[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(from_potentials(bad), invalid_input);
    bad = full;
    bad.chi[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(from_potentials(bad), invalid_input);
}

TEST_CASE("from_potentials round-trips log of a positive spec") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + static_cast<int>(draw_below(rng, 3));
        std::vector<std::vector<double>> A(d, std::vector<double>(d));
        std::vector<double> w(d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                A[i][j] = 0.25 + static_cast<double>(draw_below(rng, 1000)) / 250.0;
            w[i] = 0.5 + static_cast<double>(draw_below(rng, 1000)) / 500.0;
        }
        const auto direct = build_interaction(A, w);

        PotentialSpec p;
        p.d = d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) p.phi.push_back(std::log(A[i][j]));
        for (int i = 0; i < d; ++i) p.chi.push_back(std::log(w[i]));
        const auto via_log = from_potentials(p);

        for (std::size_t c = 0; c < direct.E.size(); ++c)
            CHECK(close_rel(via_log.E[c], direct.E[c], 1e-12));
        CHECK(close_rel(via_log.s, direct.s, 1e-12));
    }
}

TEST_CASE("essential_alphabet: named cases and properties") {
    CHECK(testutil::golden_mean_spec().essential == std::vector<int>{0, 1});
    CHECK(spec_from_ints({{1, 1}, {0, 0}}, {1, 1}).essential == std::vector<int>{0});
    CHECK(spec_from_ints({{0, 1}, {1, 0}}, {1, 1}).essential == std::vector<int>{0, 1});

    // Chain 1 -> 2 -> 3 with a loop only at 3: everything survives; cutting
    // the loop kills the whole alphabet in extendable terms except nothing.
    CHECK(spec_from_ints({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}}, {1, 1, 1}).essential ==
          std::vector<int>{0, 1, 2});
    CHECK(spec_from_ints({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}, {1, 1, 1}).essential ==
          std::vector<int>{0, 1, 2});
}

TEST_CASE("essential alphabet is monotone under symbol deletion") {
    // Removing a symbol (zeroing its row and column) never enlarges the
    // essential set on the remaining symbols.
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 3 + static_cast<int>(draw_below(rng, 3));
        std::vector<std::vector<int>> A(d, std::vector<int>(d));
        for (auto& row : A)
            for (auto& x : row) x = draw_below(rng, 100) < 50;
        InteractionSpec spec;
        try {
            spec = spec_from_ints(A, std::vector<int>(d, 1));
        } catch (const degenerate_interaction&) {
            continue;
        }
        const int victim = static_cast<int>(draw_below(rng, d));
        auto A2 = A;
        for (int j = 0; j < d; ++j) A2[victim][j] = A2[j][victim] = 0;
        InteractionSpec smaller;
        try {
            smaller = spec_from_ints(A2, std::vector<int>(d, 1));
        } catch (const degenerate_interaction&) {
            continue;
        }
        for (int sym : smaller.essential) {
            if (sym == victim) continue;
            CHECK(std::find(spec.essential.begin(), spec.essential.end(), sym) !=
                  spec.essential.end());
        }
    }
}

TEST_CASE("s is invariant under alphabet permutation and scales with w") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + static_cast<int>(draw_below(rng, 3));
        const auto spec = random_rational_spec(rng, d);

        std::vector<int> perm(d);
        for (int i = 0; i < d; ++i) perm[i] = i;
        for (int i = d - 1; i > 0; --i)
            std::swap(perm[i], perm[draw_below(rng, i + 1)]);

        std::vector<std::vector<Rational>> A2(d, std::vector<Rational>(d));
        std::vector<Rational> w2(d);
        for (int i = 0; i < d; ++i) {
            w2[i] = spec.w_rat[perm[i]];
            for (int j = 0; j < d; ++j)
                A2[i][j] = spec.A_rat[static_cast<std::size_t>(perm[i]) * d + perm[j]];
        }
        CHECK(build_interaction(A2, w2).s_rat == spec.s_rat);

        // Scaling w by c > 0 scales s by exactly c; the argmax set is unchanged.
        const Rational c(3, 2);
        std::vector<std::vector<Rational>> A3(d, std::vector<Rational>(d));
        std::vector<Rational> w3(d);
        for (int i = 0; i < d; ++i) {
            w3[i] = Rational(spec.w_rat[i] * c);
            for (int j = 0; j < d; ++j)
                A3[i][j] = spec.A_rat[static_cast<std::size_t>(i) * d + j];
        }
        const auto scaled = build_interaction(A3, w3);
        CHECK(scaled.s_rat == Rational(spec.s_rat * c));
        CHECK(scaled.argmax_rows == spec.argmax_rows);
    }
}

TEST_CASE("predecessor-chain flag for the lower-bound construction") {
    CHECK(testutil::golden_mean_spec().predecessor_chains_ok);
    CHECK(testutil::full_shift_spec(3).predecessor_chains_ok);

    // Max row is symbol 1, but nothing ever maps into it: no predecessor
    // chains of length >= 1.
    const auto no_pred = spec_from_ints({{0, 2}, {0, 0}}, {1, 1});
    CHECK(no_pred.argmax_rows == std::vector<int>{0});
    CHECK_FALSE(no_pred.predecessor_chains_ok);

    // Predecessors exist at depth 1 but cannot be continued upward forever.
    const auto finite_chain = spec_from_ints({{0, 0, 3}, {1, 0, 0}, {0, 0, 0}}, {1, 1, 1});
    CHECK(finite_chain.argmax_rows == std::vector<int>{0});
    CHECK_FALSE(finite_chain.predecessor_chains_ok);
}

TEST_CASE("max_row_sum") {
    CHECK(max_row_sum(testutil::golden_mean_spec()) == 2.0);
    CHECK(max_row_sum(testutil::full_shift_spec(3)) == 3.0);
    CHECK(max_row_sum(spec_from_ints({{1, 2}, {1, 0}}, {1, 1})) == 3.0);
}
