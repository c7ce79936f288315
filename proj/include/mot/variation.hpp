#pragma once

#include <optional>
#include <tuple>

#include "mot/coupling.hpp"
#include "mot/costs.hpp"
#include "mot/lp.hpp"
#include "mot/rng.hpp"

namespace mot {

// Signed sparse matrix sigma in the variation space V: total mass zero, both
// marginal projections vanish, and every source column has zero first
// moment. Differences of mutual competitors are exactly the elements of V.
template <class T>
struct Variation {
    std::vector<std::tuple<T, T, T>> entries;  // (x, y, signed mass), merged

    std::vector<std::tuple<T, T, T>> positive_part() const {
        std::vector<std::tuple<T, T, T>> out;
        for (const auto& e : entries)
            if (std::get<2>(e) > T(0)) out.push_back(e);
        return out;
    }
    std::vector<std::tuple<T, T, T>> negative_part() const {
        std::vector<std::tuple<T, T, T>> out;
        for (const auto& [x, y, w] : entries)
            if (w < T(0)) out.emplace_back(x, y, -w);
        return out;
    }
};

template <class T>
Variation<T> variation_from_entries(std::vector<std::tuple<T, T, T>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    Variation<T> v;
    for (const auto& [x, y, w] : entries) {
        if (!v.entries.empty() && std::get<0>(v.entries.back()) == x &&
            std::get<1>(v.entries.back()) == y)
            std::get<2>(v.entries.back()) += w;
        else
            v.entries.emplace_back(x, y, w);
    }
    std::erase_if(v.entries, [](const auto& e) { return std::get<2>(e) == T(0); });
    return v;
}

// Difference of two plans on the same grid.
template <class T>
Variation<T> plan_difference(const Coupling<T>& a, const Coupling<T>& b) {
    std::vector<std::tuple<T, T, T>> entries = a.entries();
    for (const auto& [x, y, w] : b.entries()) entries.emplace_back(x, y, -w);
    return variation_from_entries(std::move(entries));
}

template <class T>
bool is_variation(const Variation<T>& v, const T& tol = scalar_traits<T>::feas_tol()) {
    T total(0);
    std::vector<std::pair<T, T>> xm, ym;           // signed marginals
    std::vector<std::pair<T, std::pair<T, T>>> col;  // x -> (mass, moment)
    for (const auto& [x, y, w] : v.entries) {
        total += w;
        xm.emplace_back(x, w);
        ym.emplace_back(y, w);
    }
    if (abs_value(total) > tol) return false;
    auto accumulate = [](std::vector<std::pair<T, T>>& m) {
        std::sort(m.begin(), m.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<T, T>> out;
        for (const auto& [k, w] : m) {
            if (!out.empty() && out.back().first == k)
                out.back().second += w;
            else
                out.emplace_back(k, w);
        }
        return out;
    };
    for (const auto& [k, w] : accumulate(xm))
        if (abs_value(w) > tol) return false;
    for (const auto& [k, w] : accumulate(ym))
        if (abs_value(w) > tol) return false;
    // per source column: zero first moment
    std::vector<std::pair<T, T>> moments;
    for (const auto& [x, y, w] : v.entries) moments.emplace_back(x, w * y);
    for (const auto& [k, mm] : accumulate(moments))
        if (abs_value(mm) > tol) return false;
    (void)col;
    return true;
}

// ---------------------------------------------------------------------------

template <class T>
struct CompetitorResult {
    Coupling<T> plan;  // the best competitor alpha'
    T value{0};
    T input_cost{0};   // cost of alpha itself
};

// Best competitor of alpha: LP over supp_x(alpha) x supp_y(alpha) matching
// both marginals of alpha and each row's first moment, minimizing the cost.
// alpha itself is feasible, so value <= cost(alpha) always; equality within
// tolerance is the Variational Lemma property of optimal plans.
template <class T>
CompetitorResult<T> best_competitor(const Coupling<T>& alpha, const CostSpec& cost) {
    const Measure<T> mu = alpha.source;
    const Measure<T> nu = alpha.column_marginal();
    const std::size_t n = mu.size(), m = nu.size();

    std::vector<T> cmat(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            cmat[i * m + j] = eval_cost_t<T>(cost, mu.atom(i).x, nu.atom(j).x);

    lp::Program<T> prog = detail::transport_program(mu, nu, cmat, /*martingale=*/false);
    // Row first-moment constraints (not zero-centered: competitors preserve
    // the row means of alpha, whatever they are).
    for (std::size_t i = 0; i < n; ++i) {
        lp::Constraint<T> row;
        row.rel = lp::Rel::Eq;
        row.rhs = T(0);
        for (const auto& e : alpha.rows[i]) row.rhs += e.w * e.x;
        for (std::size_t j = 0; j < m; ++j) row.terms.emplace_back(i * m + j, nu.atom(j).x);
        prog.rows.push_back(std::move(row));
    }

    const auto warm = detail::flatten_plan(alpha, nu);
    auto sol = lp::solve(prog, &warm);
    if (sol.status != lp::SolveStatus::Optimal)
        throw Error("best_competitor: solver failed unexpectedly");

    CompetitorResult<T> out;
    const T prune = scalar_traits<T>::exact ? T(0) : T(1e-15);
    out.plan = detail::plan_from_vector(mu, nu, sol.x, prune);
    out.value = sol.value;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : alpha.rows[i])
            out.input_cost += e.w * eval_cost_t<T>(cost, mu.atom(i).x, e.x);
    return out;
}

// The rerouting used throughout the optimality proofs: alpha puts mass
// (1-lambda, lambda) at (x, y-), (x, y+) and 1 at (x', y'); alpha' swaps the
// roles of x and x'. lambda is fixed by y' = lambda y+ + (1-lambda) y-.
template <class T>
std::pair<Coupling<T>, Coupling<T>> three_point_variation(const T& x, const T& y_minus,
                                                          const T& y_plus, const T& x_prime,
                                                          const T& y_prime) {
    if (!(y_minus < y_prime && y_prime < y_plus))
        throw DomainError("three_point_variation: need y- < y' < y+");
    const T lambda = (y_prime - y_minus) / (y_plus - y_minus);
    const auto alpha = coupling_from_entries<T>(
        {{x, y_minus, T(1) - lambda}, {x, y_plus, lambda}, {x_prime, y_prime, T(1)}});
    const auto alpha_prime = coupling_from_entries<T>(
        {{x_prime, y_minus, T(1) - lambda}, {x_prime, y_plus, lambda}, {x, y_prime, T(1)}});
    return {alpha, alpha_prime};
}

// ---------------------------------------------------------------------------

template <class T>
struct VariationalTrial {
    std::vector<std::size_t> rows;  // source rows of the sampled alpha
    T margin{0};                    // cost(alpha) - best competitor value
};

template <class T>
struct VariationalReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    T worst_margin{0};  // largest achievable improvement seen
    T tol{0};
    std::vector<VariationalTrial<T>> violating;

    bool pass() const { return violations == 0; }
};

// Samples sub-measures of pi (whole conditional rows, chosen without
// replacement) and asserts that no competitor improves on them. Violations
// are collected, not thrown.
template <class T>
VariationalReport<T> verify_variational(const Coupling<T>& pi, const CostSpec& cost,
                                        std::size_t max_points, std::size_t trials,
                                        std::uint64_t seed,
                                        const T& tol_scale = scalar_traits<T>::feas_tol()) {
    Rng rng(seed);
    VariationalReport<T> report;
    report.trials = trials;

    std::vector<std::size_t> nonempty;
    for (std::size_t i = 0; i < pi.rows.size(); ++i)
        if (!pi.rows[i].empty()) nonempty.push_back(i);
    if (nonempty.empty()) return report;

    T scale(1);
    for (std::size_t i = 0; i < pi.rows.size(); ++i)
        for (const auto& e : pi.rows[i])
            scale = std::max(scale, abs_value(eval_cost_t<T>(cost, pi.source.atom(i).x, e.x)));
    report.tol = tol_scale * scale;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t k = static_cast<std::size_t>(
            rng.uniform_int(1, static_cast<std::int64_t>(std::min(max_points, nonempty.size()))));
        // k distinct rows, uniform without replacement
        std::vector<std::size_t> pool = nonempty;
        std::vector<std::size_t> chosen;
        for (std::size_t c = 0; c < k; ++c) {
            const auto pick = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
            chosen.push_back(pool[pick]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        std::sort(chosen.begin(), chosen.end());

        std::vector<std::tuple<T, T, T>> entries;
        for (std::size_t i : chosen)
            for (const auto& e : pi.rows[i]) entries.emplace_back(pi.source.atom(i).x, e.x, e.w);
        const auto alpha = coupling_from_entries(entries);
        const auto res = best_competitor(alpha, cost);
        const T margin = res.input_cost - res.value;
        if (margin > report.worst_margin) report.worst_margin = margin;
        if (margin > report.tol) {
            ++report.violations;
            if (report.violating.size() < 8) report.violating.push_back({chosen, margin});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Hobson-Neuberger sign table for A - B with
//   A = lambda|x-y+| + (1-lambda)|x-y-| + |x'-y'|
//   B = lambda|x'-y+| + (1-lambda)|x'-y-| + |x-y'|.
// Everything reduces to the tent function f(t) = lambda|t-y+| +
// (1-lambda)|t-y-| - |t-y'|: A - B = f(x) - f(x'). The thresholds are the
// crossings of f at level f(x).

template <class T>
struct HnSignTable {
    int case_id = 0;  // 1: y' < x, 2: y' > x, 3: y' == x
    T lambda{0};
    T peak{0};
    T level{0};                  // f(x)
    std::optional<T> lower;      // crossing in (y-, y'), the paper's x0
    std::optional<T> upper;      // crossing in (y', y+), the paper's x1
    T x{0}, y_minus{0}, y_prime{0}, y_plus{0};

    T f(const T& t) const {
        const T a = abs_value(t - y_plus) * lambda;
        const T b = abs_value(t - y_minus) * (T(1) - lambda);
        return a + b - abs_value(t - y_prime);
    }
    // sign of A - B as a function of x'
    int sign_at(const T& t) const {
        const T d = level - f(t);
        return d > T(0) ? 1 : (d < T(0) ? -1 : 0);
    }
};

template <class T>
HnSignTable<T> hn_sign_table(const T& x, const T& y_minus, const T& y_prime, const T& y_plus) {
    if (!(y_minus < y_prime && y_prime < y_plus))
        throw DomainError("hn_sign_table: need y- < y' < y+");
    HnSignTable<T> tab;
    tab.x = x;
    tab.y_minus = y_minus;
    tab.y_prime = y_prime;
    tab.y_plus = y_plus;
    tab.lambda = (y_prime - y_minus) / (y_plus - y_minus);
    tab.peak = T(2) * tab.lambda * (T(1) - tab.lambda) * (y_plus - y_minus);
    tab.level = tab.f(x);
    tab.case_id = y_prime < x ? 1 : (y_prime > x ? 2 : 3);
    if (tab.level > T(0)) {
        // Crossings of the tent at the level of x; one of them is x itself
        // whenever x lies strictly inside (y-, y+).
        tab.lower = y_minus + tab.level * (y_prime - y_minus) / tab.peak;
        tab.upper = y_plus - tab.level * (y_plus - y_prime) / tab.peak;
    }
    return tab;
}

// Convenience overload matching the operation signature: table + sign at x'.
template <class T>
std::pair<HnSignTable<T>, int> hn_sign_table(const T& x, const T& y_minus, const T& y_prime,
                                             const T& y_plus, const T& x_prime) {
    auto tab = hn_sign_table(x, y_minus, y_prime, y_plus);
    return {tab, tab.sign_at(x_prime)};
}

// Count of configurations excluded for -|y-x| optima: (x,y-),(x,y+),(x',y')
// in the support with y- < y' < y+ and (y' <= x' < x or x < x' <= y').
template <class T>
std::size_t count_hn_bad_configs(const Coupling<T>& pi,
                                 const T& threshold = default_mass_threshold<T>()) {
    const std::size_t n = pi.rows.size();
    std::vector<std::vector<T>> sup(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : pi.rows[i])
            if (e.w > threshold) sup[i].push_back(e.x);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sup[i].size() < 2) continue;
        const T x = pi.source.atom(i).x;
        const T lo = sup[i].front(), hi = sup[i].back();
        for (std::size_t ip = 0; ip < n; ++ip) {
            if (ip == i) continue;
            const T xp = pi.source.atom(ip).x;
            for (const T& yp : sup[ip]) {
                if (!(lo < yp && yp < hi)) continue;
                if ((yp <= xp && xp < x) || (x < xp && xp <= yp)) ++bad;
            }
        }
    }
    return bad;
}

}  // namespace mot
