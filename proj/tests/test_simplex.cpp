#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mot/simplex.hpp"

using namespace mot;
using namespace mot::lp;

namespace {

template <class T>
Program<T> knapsack_like() {
    // min -x0 - 2 x1   s.t. x0 + x1 <= 4, x1 <= 3, x >= 0
    Program<T> p;
    p.num_vars = 2;
    p.objective = {T(-1), T(-2)};
    Constraint<T> r1{{{0, T(1)}, {1, T(1)}}, Rel::Le, T(4)};
    Constraint<T> r2{{{1, T(1)}}, Rel::Le, T(3)};
    p.rows = {r1, r2};
    return p;
}

}  // namespace

TEST_CASE("bounded maximization-style LP") {
    auto sol = solve(knapsack_like<double>());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.value == doctest::Approx(-7.0));
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.x[1] == doctest::Approx(3.0));

    auto exact = solve(knapsack_like<Rational>());
    REQUIRE(exact.status == SolveStatus::Optimal);
    CHECK(exact.value == -7);
    CHECK(exact.x[0] == 1);
    CHECK(exact.x[1] == 3);
}

TEST_CASE("equality system with redundancy") {
    // x0 + x1 = 2, 2x0 + 2x1 = 4 (redundant), min x0
    Program<Rational> p;
    p.num_vars = 2;
    p.objective = {Rational(1), Rational(0)};
    p.rows = {{{{0, Rational(1)}, {1, Rational(1)}}, Rel::Eq, Rational(2)},
              {{{0, Rational(2)}, {1, Rational(2)}}, Rel::Eq, Rational(4)}};
    auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.value == 0);
    CHECK(sol.x[1] == 2);
}

TEST_CASE("infeasible and unbounded detection") {
    Program<Rational> inf;
    inf.num_vars = 1;
    inf.objective = {Rational(0)};
    inf.rows = {{{{0, Rational(1)}}, Rel::Eq, Rational(1)},
                {{{0, Rational(1)}}, Rel::Eq, Rational(2)}};
    CHECK(solve(inf).status == SolveStatus::Infeasible);
    CHECK_FALSE(feasible(inf));

    Program<Rational> unb;
    unb.num_vars = 2;
    unb.objective = {Rational(-1), Rational(0)};
    unb.rows = {{{{0, Rational(1)}, {1, Rational(-1)}}, Rel::Eq, Rational(0)}};
    CHECK(solve(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("duals satisfy complementary slackness") {
    auto p = knapsack_like<Rational>();
    auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    // reduced costs nonnegative for all variables
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        Rational red = p.objective[j];
        for (std::size_t r = 0; r < p.rows.size(); ++r)
            for (const auto& [jj, v] : p.rows[r].terms)
                if (jj == j) red -= sol.duals[r] * v;
        CHECK(red >= 0);
    }
    // dual value equals primal value
    Rational dual_val(0);
    for (std::size_t r = 0; r < p.rows.size(); ++r) dual_val += sol.duals[r] * p.rows[r].rhs;
    CHECK(dual_val == sol.value);
}

TEST_CASE("warm start reaches the same optimum") {
    auto p = knapsack_like<Rational>();
    std::vector<Rational> feasible_pt{Rational(1, 2), Rational(1, 2)};
    auto warm = solve(p, &feasible_pt);
    auto cold = solve(p);
    REQUIRE(warm.status == SolveStatus::Optimal);
    CHECK(warm.value == cold.value);

    // a warm start that is already optimal
    std::vector<Rational> opt{Rational(1), Rational(3)};
    auto warm2 = solve(p, &opt);
    REQUIRE(warm2.status == SolveStatus::Optimal);
    CHECK(warm2.value == -7);
}

TEST_CASE("negative rhs rows are handled") {
    // -x0 <= -2  (i.e. x0 >= 2), min x0
    Program<double> p;
    p.num_vars = 1;
    p.objective = {1.0};
    p.rows = {{{{0, -1.0}}, Rel::Le, -2.0}};
    auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.value == doctest::Approx(2.0));
}

TEST_CASE("vertex enumeration") {
    // simplex {x0 + x1 = 1}: two vertices
    Program<Rational> p;
    p.num_vars = 2;
    p.objective = {Rational(0), Rational(0)};
    p.rows = {{{{0, Rational(1)}, {1, Rational(1)}}, Rel::Eq, Rational(1)}};
    const auto verts = enumerate_vertices(p);
    CHECK(verts.size() == 2);

    // square via equalities with slack-free encoding:
    // x0 + x2 = 1, x1 + x3 = 1 -> 4 vertices
    Program<Rational> sq;
    sq.num_vars = 4;
    sq.objective.assign(4, Rational(0));
    sq.rows = {{{{0, Rational(1)}, {2, Rational(1)}}, Rel::Eq, Rational(1)},
               {{{1, Rational(1)}, {3, Rational(1)}}, Rel::Eq, Rational(1)}};
    CHECK(enumerate_vertices(sq).size() == 4);
}
