#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mot/lp.hpp"
#include "mot/shadow.hpp"
#include "test_util.hpp"

using namespace mot;

namespace {
MeasureQ unif(std::initializer_list<int> xs) {
    std::vector<std::pair<Rational, Rational>> pairs;
    const Rational w = Rational(1, static_cast<int>(xs.size()));
    for (int x : xs) pairs.emplace_back(Rational(x), w);
    return MeasureQ::from_pairs(std::move(pairs));
}

// Random split of mu into gamma1 + gamma2 (per-atom rational mass split).
std::pair<MeasureQ, MeasureQ> random_split(Rng& rng, const MeasureQ& mu) {
    std::vector<std::pair<Rational, Rational>> g1, g2;
    for (const auto& a : mu.atoms()) {
        const Rational t = Rational(rng.uniform_int(0, 4), 4);  // 0, 1/4, ..., 1
        if (t > 0) g1.emplace_back(a.x, a.w * t);
        if (t < 1) g2.emplace_back(a.x, a.w * (1 - t));
    }
    return {MeasureQ::from_pairs(std::move(g1)), MeasureQ::from_pairs(std::move(g2))};
}
}  // namespace

TEST_CASE("barycenter_window") {
    const auto nu = unif({-2, 0, 2});
    CHECK(barycenter_window(nu, Rational(1, 3), Rational(1, 3)) == 0);
    CHECK(barycenter_window(nu, Rational(1, 3), Rational(1, 2)) == 1);
    CHECK(barycenter_window(nu, nu.total_mass(), Rational(0)) ==
          nu.first_moment() / nu.total_mass());
    CHECK_THROWS_AS(barycenter_window(nu, Rational(1, 2), Rational(3, 4)), DomainError);
    CHECK_THROWS_AS(barycenter_window(nu, Rational(0), Rational(0)), DomainError);
}

TEST_CASE("shadow_atom examples") {
    const auto nu = unif({-2, 0, 2});

    const auto s1 = shadow_atom(Rational(0), Rational(1, 3), nu);
    REQUIRE(s1.size() == 1);
    CHECK(s1.atom(0).x == 0);
    CHECK(s1.atom(0).w == Rational(1, 3));

    const auto s2 = shadow_atom(Rational(1), Rational(1, 3), nu);
    REQUIRE(s2.size() == 2);
    CHECK(s2.atom(0).x == 0);
    CHECK(s2.atom(0).w == Rational(1, 6));
    CHECK(s2.atom(1).x == 2);
    CHECK(s2.atom(1).w == Rational(1, 6));

    const auto pm1 = unif({-1, 1});
    CHECK(shadow_atom(Rational(0), Rational(1), pm1) == pm1);

    CHECK_THROWS_AS(shadow_atom(Rational(5), Rational(1), nu), NotInExtendedOrder);
    CHECK_THROWS_AS(shadow_atom(Rational(0), Rational(2), nu), NotInExtendedOrder);
}

TEST_CASE("shadow examples") {
    const auto nu = unif({-2, 0, 2});

    // single atom reduces to shadow_atom
    const auto single = shadow(dirac(Rational(1), Rational(1, 3)), nu);
    CHECK(single.shadow == shadow_atom(Rational(1), Rational(1, 3), nu));

    // full-mass mu forces the whole of nu
    const auto full = shadow(unif({-1, 1}), nu);
    CHECK(full.shadow == nu);
    CHECK(full.remainder.empty());

    // half atom at -1
    const auto half = shadow(dirac(Rational(-1), Rational(1, 2)), nu);
    REQUIRE(half.shadow.size() == 2);
    CHECK(half.shadow.atom(0).x == -2);
    CHECK(half.shadow.atom(0).w == Rational(1, 4));
    CHECK(half.shadow.atom(1).x == 0);
    CHECK(half.shadow.atom(1).w == Rational(1, 4));

    CHECK_THROWS_AS(shadow(dirac(Rational(9), Rational(1)), nu), NotInExtendedOrder);
}

TEST_CASE("shadow invariants on random instances") {
    Rng rng(101);
    int done = 0;
    while (done < 60) {
        auto [mu, nu] = test::random_convex_pair_q(rng);
        const auto res = shadow(mu, nu);
        // shadow + remainder = nu atomwise
        CHECK(add(res.shadow, res.remainder) == nu);
        CHECK(res.shadow.total_mass() == mu.total_mass());
        CHECK(res.shadow.first_moment() == mu.first_moment());
        CHECK(convex_order(mu, res.shadow));
        // trace windows live inside the running remainder's mass
        for (const auto& tr : res.trace) CHECK(tr.window.s >= 0);
        ++done;
    }
}

TEST_CASE("shadow associativity and order independence") {
    Rng rng(202);
    int done = 0;
    while (done < 60) {
        auto [mu, nu] = test::random_convex_pair_q(rng);
        auto [g1, g2] = random_split(rng, mu);
        const auto whole = shadow(mu, nu).shadow;

        // associativity: S^nu(g1+g2) = S^nu(g1) + S^{nu - S^nu(g1)}(g2)
        if (!g1.empty() && !g2.empty()) {
            const auto s1 = shadow(g1, nu).shadow;
            const auto s2 = shadow(g2, subtract(nu, s1)).shadow;
            CHECK(add(s1, s2) == whole);
        }

        // order independence: fold the atoms in a random permutation
        std::vector<std::size_t> perm(mu.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1],
                      perm[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
        Measure<Rational> remainder = nu;
        std::vector<std::pair<Rational, Rational>> acc;
        for (std::size_t idx : perm) {
            const auto piece = shadow_atom(mu.atom(idx).x, mu.atom(idx).w, remainder);
            for (const auto& p : piece.atoms()) acc.emplace_back(p.x, p.w);
            remainder = subtract(remainder, piece);
        }
        CHECK(MeasureQ::from_pairs(std::move(acc)) == whole);
        ++done;
    }
}

TEST_CASE("shadow minimality against LP-sampled elements of F") {
    Rng rng(303);
    for (int rep = 0; rep < 25; ++rep) {
        auto [mu, nu] = test::random_convex_pair_q(rng, 6);
        const auto s = shadow(mu, nu).shadow;
        for (int k = 0; k < 5; ++k) {
            const auto eta = sample_f_set(mu, nu, rng);
            CHECK(convex_order(s, eta));
        }
    }
}

TEST_CASE("monotone remainder lemma") {
    // for an atom delta and eta <= nu with delta <=_E eta:
    // eta - S^eta(delta) <= nu - S^nu(delta) atomwise
    Rng rng(404);
    int done = 0;
    while (done < 40) {
        const auto nu = test::random_measure_q(rng, 7);
        // eta: random sub-measure of nu
        std::vector<std::pair<Rational, Rational>> pairs;
        for (const auto& a : nu.atoms()) {
            const Rational t = Rational(rng.uniform_int(0, 3), 3);
            if (t > 0) pairs.emplace_back(a.x, a.w * t);
        }
        const auto eta = MeasureQ::from_pairs(std::move(pairs));
        if (eta.empty()) continue;
        const Rational alpha = eta.total_mass() / 2;
        if (alpha == 0) continue;
        const Rational x = eta.first_moment() / eta.total_mass();
        if (!extended_order(dirac(x, alpha), eta)) continue;
        const auto se = shadow_atom(x, alpha, eta);
        const auto sn = shadow_atom(x, alpha, nu);
        const auto rem_eta = subtract(eta, se);
        const auto rem_nu = subtract(nu, sn);
        // atomwise domination
        for (const auto& a : rem_eta.atoms()) CHECK(a.w <= rem_nu.mass_at(a.x));
        ++done;
    }
}

TEST_CASE("atom shadow is 2-Lipschitz in the target") {
    Rng rng(505);
    int done = 0;
    while (done < 40) {
        auto nu = test::random_measure_q(rng, 6);
        auto nu_hat = test::random_measure_q(rng, 6);
        // normalize to probability measures
        auto normalize = [](const MeasureQ& m) {
            std::vector<std::pair<Rational, Rational>> pairs;
            for (const auto& a : m.atoms()) pairs.emplace_back(a.x, a.w / m.total_mass());
            return MeasureQ::from_pairs(std::move(pairs));
        };
        nu = normalize(nu);
        nu_hat = normalize(nu_hat);
        const Rational alpha(1, 2);
        const Rational x = nu.first_moment();  // try the barycenter of nu
        if (!extended_order(dirac(x, alpha), nu) || !extended_order(dirac(x, alpha), nu_hat))
            continue;
        const auto s = shadow_atom(x, alpha, nu);
        const auto s_hat = shadow_atom(x, alpha, nu_hat);
        CHECK(*wasserstein1(s, s_hat, Rational(0)) <= 2 * *wasserstein1(nu, nu_hat, Rational(0)));
        ++done;
    }
}

TEST_CASE("maximal embedding") {
    const auto nu = unif({-2, 0, 2});

    // equal masses: the band is empty and theta = nu
    CHECK(maximal_embedding(unif({-1, 1}), nu) == nu);

    // (1/3) delta_0: symmetric band removal keeps the extremes
    const auto t = maximal_embedding(dirac(Rational(0), Rational(1, 3)), nu);
    REQUIRE(t.size() == 2);
    CHECK(t.atom(0).x == -2);
    CHECK(t.atom(0).w == Rational(1, 6));
    CHECK(t.atom(1).x == 2);
    CHECK(t.atom(1).w == Rational(1, 6));

    CHECK_THROWS_AS(maximal_embedding(dirac(Rational(9), Rational(1)), nu), NotInExtendedOrder);
}

TEST_CASE("shadow below maximal embedding, both inside F") {
    Rng rng(606);
    for (int rep = 0; rep < 40; ++rep) {
        auto [mu, nu] = test::random_convex_pair_q(rng);
        const auto lo = shadow(mu, nu).shadow;
        const auto hi = maximal_embedding(mu, nu);
        CHECK(convex_order(lo, hi));
        CHECK(convex_order(mu, hi));
        for (const auto& a : hi.atoms()) CHECK(a.w <= nu.mass_at(a.x));
    }
}
