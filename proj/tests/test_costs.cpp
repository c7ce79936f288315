#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mot/costs.hpp"

using namespace mot;

TEST_CASE("cost evaluation") {
    const auto pow4 = parse_cost("pow:4");
    CHECK(eval_cost(pow4, 1.0, -2.0) == 81.0);
    CHECK(eval_cost_exact(pow4, Rational(1), Rational(-2)) == 81);

    const auto nabs = parse_cost("neg-abs");
    CHECK(eval_cost(nabs, 3.5, 3.5) == 0.0);
    CHECK(eval_cost(nabs, 0.0, 2.0) == -2.0);

    const auto ind = parse_cost("ind:0,1");
    CHECK(eval_cost(ind, -1.0, 3.0) == 2.0);
    CHECK(eval_cost(ind, 1.0, 3.0) == 0.0);
    CHECK(eval_cost_exact(ind, Rational(-1), Rational(3)) == 2);

    const auto e = parse_cost("exp");
    CHECK(eval_cost(e, 0.0, 0.0) == 1.0);
    CHECK_THROWS_AS(eval_cost_exact(e, Rational(0), Rational(0)), UnsupportedCost);

    const auto poly = parse_cost("poly:1,0,2");  // 1 + 2 t^2
    CHECK(eval_cost(poly, 1.0, 3.0) == 9.0);
    CHECK(eval_cost_exact(poly, Rational(1), Rational(3)) == 9);
}

TEST_CASE("cost parsing round-trips and errors") {
    for (const char* s : {"pow:4", "abs", "neg-abs", "exp", "poly:1,0,2", "ind:0,1",
                          "sep:tables.json", "poly:1/2,-3/4"}) {
        const auto spec = parse_cost(s);
        CHECK(format_cost(spec) == s);
    }
    CHECK_THROWS_AS(parse_cost("pow:-1"), ParseError);
    CHECK_THROWS_AS(parse_cost("pow:0"), ParseError);
    CHECK_THROWS_AS(parse_cost("pow:x"), ParseError);
    CHECK_THROWS_AS(parse_cost("nope"), ParseError);
    CHECK_THROWS_AS(parse_cost("poly:"), ParseError);
    CHECK_THROWS_AS(parse_cost("ind:1"), ParseError);
    try {
        parse_cost("pow:-1");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("strict convexity of the derivative") {
    CHECK(strict_convex_derivative(parse_cost("exp")));
    CHECK(strict_convex_derivative(parse_cost("pow:3")));
    CHECK_FALSE(strict_convex_derivative(parse_cost("pow:4")));
    CHECK_FALSE(strict_convex_derivative(parse_cost("pow:1")));
    CHECK_FALSE(strict_convex_derivative(parse_cost("pow:2")));
    // odd powers have even-degree h''' >= 0
    CHECK(strict_convex_derivative(parse_cost("pow:5")));
    CHECK(strict_convex_derivative(parse_cost("pow:7")));

    // pow:4 becomes strictly convex-derivative on a positive hull
    CHECK(strict_convex_derivative(parse_cost("pow:4"), Rational(1, 10), Rational(5)));
    CHECK_FALSE(strict_convex_derivative(parse_cost("pow:4"), Rational(-1), Rational(1)));

    // h(t) = t^4 + t^3: h''' = 24t + 6, nonnegative iff t >= -1/4
    const auto mix = parse_cost("poly:0,0,0,1,1");
    CHECK_FALSE(strict_convex_derivative(mix));
    CHECK(strict_convex_derivative(mix, Rational(0), Rational(3)));
    CHECK_FALSE(strict_convex_derivative(mix, Rational(-1), Rational(3)));

    // h''' with a touching zero inside the hull is still strictly convex:
    // h(t) = t^6/120: h''' = t^3... changes sign; use h' = t^4: h = t^5/5
    const auto quintic = parse_cost("poly:0,0,0,0,0,1/5");
    CHECK(strict_convex_derivative(quintic));

    CHECK_THROWS_AS(strict_convex_derivative(parse_cost("abs")), UnsupportedCost);
    CHECK_THROWS_AS(strict_convex_derivative(parse_cost("ind:0,1")), UnsupportedCost);
}

TEST_CASE("cost shift identity at cost level") {
    const auto base = parse_cost("pow:4");
    const auto shifted = shifted_cost(base, Rational(2), Rational(-3));
    for (double x : {-1.0, 0.5, 2.0})
        for (double y : {-2.0, 0.0, 1.5}) {
            const double d = y - x;
            CHECK(eval_cost(shifted, x, y) ==
                  doctest::Approx(eval_cost(base, x, y) + 2 * d * d - 3 * d));
        }
}

TEST_CASE("separable validation") {
    CostSpec spec;
    spec.kind = CostKind::Separable;
    spec.phi = {2.0, 1.0, 0.5};
    spec.psi = {4.0, 1.0, 0.0, 1.0};
    const std::vector<double> ys{-2, -1, 0, 1};
    CHECK_NOTHROW(validate_separable(spec, 3, ys));

    auto bad_phi = spec;
    bad_phi.phi = {1.0, 2.0, 0.5};  // not nonincreasing
    CHECK_THROWS_AS(validate_separable(bad_phi, 3, ys), UnsupportedCost);

    auto bad_psi = spec;
    bad_psi.psi = {0.0, 5.0, 0.0, 1.0};  // not convex
    CHECK_THROWS_AS(validate_separable(bad_psi, 3, ys), UnsupportedCost);

    auto neg = spec;
    neg.psi = {4.0, -1.0, 0.0, 1.0};
    CHECK_THROWS_AS(validate_separable(neg, 3, ys), UnsupportedCost);

    CHECK_THROWS_AS(validate_separable(spec, 2, ys), UnsupportedCost);
}
