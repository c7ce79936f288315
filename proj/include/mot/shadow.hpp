#pragma once

#include <vector>

#include "mot/measure.hpp"
#include "mot/potential.hpp"

namespace mot {

// Quantile window [s, s + alpha] in the measure it was taken from.
template <class T>
struct QuantileWindow {
    T s;
    T alpha;
};

template <class T>
struct ShadowTrace {
    Atom<T> source;               // atom of mu that was embedded
    QuantileWindow<T> window;     // its window in the running remainder
};

template <class T>
struct ShadowResult {
    Measure<T> shadow;
    Measure<T> remainder;  // nu - shadow, atomwise
    std::vector<ShadowTrace<T>> trace;
};

namespace detail {

// Integral of the quantile function: U(t) = int_0^t G_nu dlambda, t in [0, M].
// G is constant y_j on (F_{j-1}, F_j], so U is piecewise linear in t.
template <class T>
T quantile_integral(const Measure<T>& nu, const T& t) {
    T acc(0), mass(0);
    for (const auto& a : nu.atoms()) {
        if (t <= mass + a.w) {
            acc += a.x * (t - mass);
            return acc;
        }
        acc += a.x * a.w;
        mass += a.w;
    }
    return acc;
}

// Restriction of nu to the quantile window (s, s+alpha]: each atom keeps the
// overlap of its cumulative cell with the window. Result positions are a
// subset of nu's positions.
template <class T>
Measure<T> window_restriction(const Measure<T>& nu, const T& s, const T& alpha) {
    std::vector<Atom<T>> out;
    T lo(0);
    const T hi_end = s + alpha;
    for (const auto& a : nu.atoms()) {
        const T hi = lo + a.w;
        const T from = std::max(lo, s);
        const T to = std::min(hi, hi_end);
        if (to > from) out.push_back({a.x, to - from});
        lo = hi;
        if (lo >= hi_end) break;
    }
    return Measure<T>::from_sorted(std::move(out));
}

}  // namespace detail

// Barycenter B(s, nu) of the quantile restriction of nu to [s, s+alpha]; a
// continuous nondecreasing piecewise-linear function of s.
template <class T>
T barycenter_window(const Measure<T>& nu, const T& alpha, const T& s) {
    if (!(alpha > T(0))) throw DomainError("barycenter_window: alpha must be positive");
    if (s < T(0) || s + alpha > nu.total_mass())
        throw DomainError("barycenter_window: window exceeds mass");
    return (detail::quantile_integral(nu, s + alpha) - detail::quantile_integral(nu, s)) / alpha;
}

// Shadow of the atom alpha*delta_x in nu: the unique quantile restriction of
// nu with mass alpha and barycenter x. The window offset solves the
// piecewise-linear equation B(s, nu) = x exactly on the breakpoint grid; for
// flat stretches any offset yields the same measure and the leftmost is used.
// Returns the window offset through `window_out` when non-null.
template <class T>
Measure<T> shadow_atom(const T& x, const T& alpha, const Measure<T>& nu,
                       QuantileWindow<T>* window_out = nullptr,
                       const T& tol = scalar_traits<T>::order_tol()) {
    if (alpha == T(0)) return Measure<T>();
    if (alpha < T(0) || alpha > nu.total_mass() + tol)
        throw NotInExtendedOrder("shadow_atom: atom mass exceeds target mass");
    const T budget = std::min(alpha, nu.total_mass());
    const T t_max = nu.total_mass() - budget;

    // Candidate breakpoints of s -> B(s): cumulative masses and their shifts
    // by -alpha, clamped into [0, t_max].
    std::vector<T> grid{T(0), t_max};
    T acc(0);
    for (const auto& a : nu.atoms()) {
        acc += a.w;
        if (acc > T(0) && acc < t_max) grid.push_back(acc);
        const T shifted = acc - budget;
        if (shifted > T(0) && shifted < t_max) grid.push_back(shifted);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const T b_lo = barycenter_window(nu, budget, T(0));
    const T b_hi = barycenter_window(nu, budget, t_max);
    T target = x;
    if (target < b_lo || target > b_hi) {
        if (target < b_lo - tol || target > b_hi + tol)
            throw NotInExtendedOrder("shadow_atom: barycenter outside feasible range");
        target = std::min(std::max(target, b_lo), b_hi);  // clamp fp drift
    }

    T s(0);
    T prev_s = grid.front();
    T prev_b = b_lo;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const T cur_b = barycenter_window(nu, budget, grid[i]);
        if (target <= cur_b) {
            s = (cur_b == prev_b)
                    ? prev_s
                    : prev_s + (target - prev_b) * (grid[i] - prev_s) / (cur_b - prev_b);
            break;
        }
        prev_s = grid[i];
        prev_b = cur_b;
        if (i + 1 == grid.size()) s = grid[i];  // target == b_hi after clamping
    }
    if (grid.size() == 1) s = grid.front();

    if (window_out) *window_out = {s, budget};
    return detail::window_restriction(nu, s, budget);
}

// Fold of shadow_atom through the shrinking remainder without the
// precondition test; used by the curtain where convex order has already been
// verified.
template <class T>
ShadowResult<T> shadow_unchecked(const Measure<T>& mu, const Measure<T>& nu,
                                 const T& tol = scalar_traits<T>::order_tol()) {
    ShadowResult<T> res;
    res.remainder = nu;
    std::vector<std::pair<T, T>> shadow_pairs;
    const T prune = scalar_traits<T>::prune_eps() * std::max(T(1), nu.total_mass());
    for (const auto& a : mu.atoms()) {
        QuantileWindow<T> win{T(0), T(0)};
        const auto piece = shadow_atom(a.x, a.w, res.remainder, &win, tol);
        res.trace.push_back({a, win});
        for (const auto& p : piece.atoms()) shadow_pairs.emplace_back(p.x, p.w);
        res.remainder = subtract(res.remainder, piece, prune);
    }
    res.shadow = Measure<T>::from_pairs(std::move(shadow_pairs));
    return res;
}

// Shadow S^nu(mu): the atoms of mu are embedded in ascending position order.
// The result does not depend on the order (associativity of the shadow),
// which tests enforce rather than assume.
template <class T>
ShadowResult<T> shadow(const Measure<T>& mu, const Measure<T>& nu,
                       const T& tol = scalar_traits<T>::order_tol()) {
    if (!extended_order(mu, nu, tol))
        throw NotInExtendedOrder("shadow: mu not below nu in extended order");
    return shadow_unchecked(mu, nu, tol);
}

// Maximal element T^nu(mu) of {eta : mu <=_c eta <= nu}: nu with one quantile
// band of width mass(nu) - mass(mu) removed, the band offset chosen so the
// barycenter matches mu.
template <class T>
Measure<T> maximal_embedding(const Measure<T>& mu, const Measure<T>& nu,
                             const T& tol = scalar_traits<T>::order_tol()) {
    if (!extended_order(mu, nu, tol))
        throw NotInExtendedOrder("maximal_embedding: mu not below nu in extended order");
    if (mu.empty()) return Measure<T>();
    const T keep = std::min(mu.total_mass(), nu.total_mass());
    const T gap = nu.total_mass() - keep;
    if (gap == T(0)) return nu;

    // Moment of the kept part as a function of the band offset zeta:
    //   A(zeta) = U(zeta) + U(M) - U(zeta + gap),   zeta in [0, keep],
    // nonincreasing piecewise linear; solve A(zeta) = first_moment(mu).
    const T total_u = detail::quantile_integral(nu, nu.total_mass());
    auto kept_moment = [&](const T& zeta) {
        return detail::quantile_integral(nu, zeta) + total_u -
               detail::quantile_integral(nu, zeta + gap);
    };
    std::vector<T> grid{T(0), keep};
    T acc(0);
    for (const auto& a : nu.atoms()) {
        acc += a.w;
        if (acc > T(0) && acc < keep) grid.push_back(acc);
        const T shifted = acc - gap;
        if (shifted > T(0) && shifted < keep) grid.push_back(shifted);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    T target = mu.first_moment();
    const T a_hi = kept_moment(T(0));   // maximal moment (band at far left)
    const T a_lo = kept_moment(keep);   // minimal moment (band at far right)
    if (target > a_hi || target < a_lo) {
        if (target > a_hi + tol * std::max(T(1), abs_value(a_hi)) ||
            target < a_lo - tol * std::max(T(1), abs_value(a_lo)))
            throw NotInExtendedOrder("maximal_embedding: moment outside feasible range");
        target = std::min(std::max(target, a_lo), a_hi);
    }

    T zeta(0);
    T prev_s = grid.front();
    T prev_a = a_hi;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const T cur_a = kept_moment(grid[i]);
        if (target >= cur_a) {
            zeta = (cur_a == prev_a)
                       ? prev_s
                       : prev_s + (target - prev_a) * (grid[i] - prev_s) / (cur_a - prev_a);
            break;
        }
        prev_s = grid[i];
        prev_a = cur_a;
        if (i + 1 == grid.size()) zeta = grid[i];
    }

    const auto left = detail::window_restriction(nu, T(0), zeta);
    const auto right = detail::window_restriction(nu, zeta + gap, keep - zeta);
    return add(left, right);
}

}  // namespace mot
