#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mot/curtain.hpp"
#include "mot/gaussian.hpp"
#include "mot/lp.hpp"
#include "test_util.hpp"

using namespace mot;

namespace {
MeasureQ unif(std::initializer_list<int> xs) {
    std::vector<std::pair<Rational, Rational>> pairs;
    const Rational w = Rational(1, static_cast<int>(xs.size()));
    for (int x : xs) pairs.emplace_back(Rational(x), w);
    return MeasureQ::from_pairs(std::move(pairs));
}
}  // namespace

TEST_CASE("left curtain on the quartic example marginals") {
    const auto mu = unif({-1, 1});
    const auto nu = unif({-2, 0, 2});
    const auto pi = left_curtain(mu, nu);

    REQUIRE(pi.rows.size() == 2);
    REQUIRE(pi.rows[0].size() == 2);
    CHECK(pi.rows[0][0].x == -2);
    CHECK(pi.rows[0][0].w == Rational(1, 4));
    CHECK(pi.rows[0][1].x == 0);
    CHECK(pi.rows[0][1].w == Rational(1, 4));

    REQUIRE(pi.rows[1].size() == 3);
    CHECK(pi.rows[1][0].x == -2);
    CHECK(pi.rows[1][0].w == Rational(1, 12));
    CHECK(pi.rows[1][1].x == 0);
    CHECK(pi.rows[1][1].w == Rational(1, 12));
    CHECK(pi.rows[1][2].x == 2);
    CHECK(pi.rows[1][2].w == Rational(1, 3));

    CHECK(coupling_is_valid(pi, mu, nu, /*martingale=*/true, Rational(0)));
}

TEST_CASE("left curtain trivial cases") {
    const auto m = unif({-2, 0, 2});
    const auto id = left_curtain(m, m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        REQUIRE(id.rows[i].size() == 1);
        CHECK(id.rows[i][0].x == m.atom(i).x);
        CHECK(id.rows[i][0].w == m.atom(i).w);
    }

    const auto forced = left_curtain(dirac(Rational(0), Rational(1)), unif({-1, 1}));
    REQUIRE(forced.rows.size() == 1);
    REQUIRE(forced.rows[0].size() == 2);
    CHECK(forced.rows[0][0].w == Rational(1, 2));
    CHECK(forced.rows[0][1].w == Rational(1, 2));

    CHECK_THROWS_AS(left_curtain(unif({-2, 2}), unif({-1, 1})), NotInConvexOrder);
}

TEST_CASE("right curtain is the reflection of the left curtain") {
    const auto mu = unif({-1, 1});
    const auto nu = unif({-2, 0, 2});
    const auto rc = right_curtain(mu, nu);
    CHECK(coupling_is_valid(rc, mu, nu, /*martingale=*/true, Rational(0)));

    // symmetric instance: right curtain rows mirror the left curtain rows
    const auto lc = left_curtain(mu, nu);
    REQUIRE(rc.rows[1].size() == 2);
    CHECK(rc.rows[1][0].x == 0);
    CHECK(rc.rows[1][0].w == Rational(1, 4));
    CHECK(rc.rows[1][1].x == 2);
    CHECK(rc.rows[1][1].w == Rational(1, 4));
    REQUIRE(rc.rows[0].size() == 3);
    CHECK(rc.rows[0][2].w == lc.rows[1][0].w);

    const auto m = unif({-1, 0, 1});
    const auto id = right_curtain(m, m);
    for (std::size_t i = 0; i < m.size(); ++i) REQUIRE(id.rows[i].size() == 1);
}

TEST_CASE("monotonicity witness search") {
    // left curtain on the quartic marginals: no witness (row supports {-2,0}
    // and {-2,0,2} admit no y' strictly inside a later row)
    const auto pi = left_curtain(unif({-1, 1}), unif({-2, 0, 2}));
    CHECK_FALSE(is_left_monotone(pi, Rational(0)).has_value());

    // hand-built violation: row x=0 -> {-2, 2}, row x=1 -> {0}
    const auto bad = coupling_from_entries<Rational>({{Rational(0), Rational(-2), Rational(1, 2)},
                                                      {Rational(0), Rational(2), Rational(1, 2)},
                                                      {Rational(1), Rational(0), Rational(1)}});
    const auto w = is_left_monotone(bad, Rational(0));
    REQUIRE(w.has_value());
    CHECK(w->x == 0);
    CHECK(w->x_prime == 1);
    CHECK(w->y_minus == -2);
    CHECK(w->y_plus == 2);
    CHECK(w->y_prime == 0);

    // single-row couplings cannot violate
    const auto single = coupling_from_entries<Rational>(
        {{Rational(0), Rational(-1), Rational(1, 2)}, {Rational(0), Rational(1), Rational(1, 2)}});
    CHECK_FALSE(is_left_monotone(single, Rational(0)).has_value());
}

TEST_CASE("left curtain is monotone on random instances") {
    Rng rng(707);
    for (int rep = 0; rep < 60; ++rep) {
        auto [mu, nu] = test::random_convex_pair_q(rng);
        const auto pi = left_curtain(mu, nu);
        CHECK(coupling_is_valid(pi, mu, nu, /*martingale=*/true, Rational(0)));
        CHECK_FALSE(is_left_monotone(pi, Rational(0)).has_value());
    }
}

TEST_CASE("prefix targets are shadows of the mu prefixes") {
    Rng rng(808);
    for (int rep = 0; rep < 40; ++rep) {
        auto [mu, nu] = test::random_convex_pair_q(rng);
        const auto pi = left_curtain(mu, nu);
        for (const auto& a : mu.atoms()) {
            const auto prefix = mu.restrict_leq(a.x);
            CHECK(pi.prefix_target(a.x) == shadow(prefix, nu).shadow);
        }
        // degenerate prefixes
        CHECK(pi.prefix_target(mu.atom(0).x - 1).empty());
        CHECK(pi.prefix_target(mu.atom(mu.size() - 1).x) == nu);
    }
}

TEST_CASE("convex minimality of curtain prefix targets") {
    const auto mu = unif({-1, 1});
    const auto nu = unif({-2, 0, 2});
    const auto lc = left_curtain(mu, nu);
    CHECK(check_convex_minimality(mu, nu, lc));
    CHECK(check_convex_minimality(mu, nu, right_curtain(mu, nu)));

    // every vertex of the martingale polytope is dominated
    for (const auto& v : martingale_vertices(mu, nu)) CHECK(check_convex_minimality(mu, nu, v));

    // a non-martingale rival is rejected
    const auto junk = coupling_from_entries<Rational>({{Rational(-1), Rational(-2), Rational(1, 2)},
                                                       {Rational(1), Rational(2), Rational(1, 2)}});
    CHECK_THROWS_AS(check_convex_minimality(mu, nu, junk), InvalidRival);
}

TEST_CASE("uniqueness: the curtain is the only monotone vertex (tiny instances)") {
    Rng rng(909);
    int done = 0;
    while (done < 12) {
        auto [mu, nu] = test::random_convex_pair_q(rng, 4);
        if (mu.size() > 4 || nu.size() > 4) continue;
        const auto lc = left_curtain(mu, nu);
        std::size_t monotone_count = 0;
        bool curtain_seen = false;
        for (const auto& v : martingale_vertices(mu, nu)) {
            if (!is_left_monotone(v, Rational(0)).has_value()) {
                ++monotone_count;
                if (couplings_equal(v, lc, Rational(0), Rational(0))) curtain_seen = true;
            }
        }
        CHECK(monotone_count == 1);
        CHECK(curtain_seen);
        ++done;
    }
}

TEST_CASE("curtain structure on quantized gaussians") {
    const std::size_t n = 60;
    const auto mu = gaussian_quantize(0.0, 1.0, n);
    const auto nu = gaussian_quantize(0.0, 2.0, n);
    const auto pi = left_curtain(mu, nu, 1e-9);
    CHECK(coupling_is_valid(pi, mu, nu, /*martingale=*/true, 1e-9));

    const auto maps = row_maps(pi, 1e-10);
    double two_atom_mass = 0;
    for (const auto& rm : maps) {
        if (rm.support_size <= 2) two_atom_mass += to_double(rm.mass);
        CHECK(rm.t1 <= rm.x + 1e-12);
        CHECK(rm.t2 >= rm.x - 1e-12);
    }
    CHECK(two_atom_mass >= 0.95);
    // T2 nondecreasing
    for (std::size_t i = 1; i < maps.size(); ++i) CHECK(maps[i].t2 >= maps[i - 1].t2 - 1e-12);
    // T1 never lands strictly inside an earlier row's (T1, T2) gap
    for (std::size_t i = 1; i < maps.size(); ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            if (maps[k].support_size < 2) continue;
            const bool inside =
                maps[i].t1 > maps[k].t1 + 1e-12 && maps[i].t1 < maps[k].t2 - 1e-12;
            CHECK_FALSE(inside);
        }
    }
}
