#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mot/measure.hpp"
#include "mot/potential.hpp"
#include "test_util.hpp"

using namespace mot;

namespace {
const Rational R0(0), R1(1);

MeasureQ unif(std::initializer_list<int> xs) {
    std::vector<std::pair<Rational, Rational>> pairs;
    const Rational w = Rational(1, static_cast<int>(xs.size()));
    for (int x : xs) pairs.emplace_back(Rational(x), w);
    return MeasureQ::from_pairs(std::move(pairs));
}
}  // namespace

TEST_CASE("make_measure merges, sorts and drops") {
    const auto merged = make_measure<Rational>({{R0, Rational(1, 2)}, {R0, Rational(1, 2)}});
    REQUIRE(merged.size() == 1);
    CHECK(merged.atom(0).x == 0);
    CHECK(merged.atom(0).w == 1);

    const auto sorted = make_measure<Rational>({{R1, Rational(3, 10)}, {-R1, Rational(7, 10)}});
    REQUIRE(sorted.size() == 2);
    CHECK(sorted.atom(0).x == -1);
    CHECK(sorted.atom(0).w == Rational(7, 10));
    CHECK(sorted.atom(1).x == 1);

    const auto dropped = make_measure<Rational>({{Rational(2), R0}, {Rational(3), R1}});
    REQUIRE(dropped.size() == 1);
    CHECK(dropped.atom(0).x == 3);

    CHECK_THROWS_AS(make_measure<Rational>({{R0, Rational(-1, 2)}}), InvalidMeasure);
}

TEST_CASE("cdf and quantile") {
    const auto m = unif({-1, 1});
    CHECK(m.cdf(Rational(0)) == Rational(1, 2));

    const auto m3 = unif({-2, 0, 2});
    CHECK(m3.quantile(Rational(1, 3)) == -2);

    const auto d5 = dirac(Rational(5), R1);
    CHECK(d5.quantile(Rational(1, 10)) == 5);
    CHECK(d5.quantile(R1) == 5);
    CHECK_THROWS_AS(d5.quantile(R0), DomainError);
    CHECK_THROWS_AS(d5.quantile(Rational(2)), DomainError);

    // quantile(cdf(t)) <= t at atoms
    for (const auto& a : m3.atoms()) CHECK(m3.quantile(m3.cdf(a.x)) <= a.x);
}

TEST_CASE("potential values") {
    const auto u0 = potential(dirac(Rational(0), R1));
    CHECK(u0(Rational(3)) == 3);
    CHECK(u0(Rational(-3)) == 3);

    const auto u1 = potential(unif({-1, 1}));
    CHECK(u1(Rational(0)) == 1);

    const auto u2 = potential(unif({-2, 0, 2}));
    CHECK(u2(Rational(1)) == Rational(5, 3));
}

TEST_CASE("potential slopes encode the measure") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto m = test::random_measure_q(rng, 7);
        const auto u = potential(m);
        for (const auto& a : m.atoms())
            CHECK(u.slope_right(a.x) - u.slope_left(a.x) == 2 * a.w);
        CHECK(u.slope_left(m.atom(0).x) == -m.total_mass());
        CHECK(u.slope_right(m.atom(m.size() - 1).x) == m.total_mass());
        // convexity: slopes nondecreasing across breakpoints
        for (std::size_t i = 0; i + 1 < m.size(); ++i) {
            CHECK(u.slope_right(m.atom(i).x) <= u.slope_right(m.atom(i + 1).x));
        }
    }
}

TEST_CASE("convex order examples") {
    const auto d0 = dirac(Rational(0), R1);
    const auto pm1 = unif({-1, 1});
    CHECK(convex_order(d0, pm1));
    CHECK(convex_order(pm1, pm1));
    CHECK_FALSE(convex_order(pm1, d0));
    // mass mismatch and mean mismatch return false rather than throwing
    CHECK_FALSE(convex_order(dirac(Rational(0), Rational(1, 2)), pm1));
    CHECK_FALSE(convex_order(dirac(Rational(1), R1), pm1));
}

TEST_CASE("convex order is antisymmetric and additive") {
    Rng rng(23);
    for (int rep = 0; rep < 60; ++rep) {
        auto [mu1, nu1] = test::random_convex_pair_q(rng);
        auto [mu2, nu2] = test::random_convex_pair_q(rng);
        CHECK(convex_order(mu1, nu1));
        CHECK(convex_order(mu2, nu2));
        // additivity
        CHECK(convex_order(add(mu1, mu2), add(nu1, nu2)));
        // antisymmetry
        if (convex_order(nu1, mu1)) CHECK(mu1 == nu1);
        // transitivity through a coarser measure
        const auto coarser = coarsen(mu1, {});
        CHECK(convex_order(coarser, nu1));
    }
}

TEST_CASE("extended order examples") {
    const auto d0 = dirac(Rational(0), R1);
    CHECK_FALSE(extended_order(d0, dirac(Rational(5), R1)));

    const auto half0 = dirac(Rational(0), Rational(1, 2));
    const auto bigger = make_measure<Rational>({{R0, Rational(1, 2)}, {Rational(3), Rational(1, 2)}});
    CHECK(extended_order(half0, bigger));

    const auto nu = make_measure<Rational>(
        {{Rational(-2), Rational(1, 2)}, {Rational(2), Rational(1, 2)}, {Rational(10), R1}});
    CHECK(extended_order(d0, nu));

    // convex order implies extended order
    Rng rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        auto [mu, nu2] = test::random_convex_pair_q(rng);
        CHECK(extended_order(mu, nu2));
    }
}

TEST_CASE("wasserstein1") {
    CHECK(*wasserstein1(dirac(Rational(0), R1), dirac(Rational(1), R1)) == 1);
    CHECK(*wasserstein1(unif({-1, 1}), dirac(Rational(0), R1)) == 1);
    const auto m = unif({-2, 0, 2});
    CHECK(*wasserstein1(m, m) == 0);
    CHECK_FALSE(wasserstein1(dirac(Rational(0), R1), dirac(Rational(0), Rational(2))).has_value());

    Rng rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        auto a = test::random_measure_q(rng, 5);
        // rescale to the mass of a so distances are finite
        auto rescale = [&](const MeasureQ& src) {
            std::vector<std::pair<Rational, Rational>> pairs;
            for (const auto& at : src.atoms())
                pairs.emplace_back(at.x, at.w * a.total_mass() / src.total_mass());
            return MeasureQ::from_pairs(std::move(pairs));
        };
        const auto b = rescale(test::random_measure_q(rng, 5));
        const auto c = rescale(test::random_measure_q(rng, 5));
        const auto ab = *wasserstein1(a, b), bc = *wasserstein1(b, c), ac = *wasserstein1(a, c);
        CHECK(ac <= ab + bc);
        CHECK((*wasserstein1(a, a) == 0));
        if (*wasserstein1(a, b) == 0) CHECK(a == b);
    }
}

TEST_CASE("coarsen") {
    const auto d = coarsen(unif({-1, 1}), {});
    REQUIRE(d.size() == 1);
    CHECK(d.atom(0).x == 0);
    CHECK(d.atom(0).w == 1);

    const auto g = coarsen(unif({-2, 0, 2}), {Rational(-1)});
    REQUIRE(g.size() == 2);
    CHECK(g.atom(0).x == -2);
    CHECK(g.atom(0).w == Rational(1, 3));
    CHECK(g.atom(1).x == 1);
    CHECK(g.atom(1).w == Rational(2, 3));

    // separating every atom reproduces the measure
    const auto m = unif({-2, 0, 2});
    const auto fixed = coarsen(m, {Rational(-1), Rational(1)});
    CHECK(fixed == m);

    CHECK_THROWS_AS(coarsen(m, {Rational(1), Rational(1)}), DomainError);
}

TEST_CASE("coarsen is monotone under cut refinement") {
    Rng rng(47);
    for (int rep = 0; rep < 50; ++rep) {
        const auto nu = test::random_measure_q(rng, 8);
        auto cuts = test::random_cuts_q(rng, nu, 4);
        const auto coarse = coarsen(nu, cuts);
        auto finer = cuts;
        for (const auto& extra : test::random_cuts_q(rng, nu, 3)) finer.push_back(extra);
        std::sort(finer.begin(), finer.end());
        finer.erase(std::unique(finer.begin(), finer.end()), finer.end());
        const auto fine = coarsen(nu, finer);
        CHECK(convex_order(coarse, fine));
        CHECK(convex_order(fine, nu));
    }
}

TEST_CASE("min_measure") {
    const auto m = unif({-2, 0, 2});
    CHECK(min_measure(m, m) == m);
    CHECK(min_measure(m, unif({-3, 3})).empty());

    const auto a = make_measure<Rational>({{R0, Rational(1, 2)}, {R1, Rational(1, 2)}});
    const auto b = make_measure<Rational>({{R0, Rational(1, 4)}, {Rational(2), Rational(3, 4)}});
    const auto mm = min_measure(a, b);
    REQUIRE(mm.size() == 1);
    CHECK(mm.atom(0).x == 0);
    CHECK(mm.atom(0).w == Rational(1, 4));
}
