#pragma once

#include <optional>

#include "mot/coupling.hpp"
#include "mot/kernels.hpp"
#include "mot/shadow.hpp"

namespace mot {

// Forbidden configuration of Definition 1.? (left-monotonicity): mass at
// (x, y-), (x, y+) and (x', y') with x < x' and y- < y' < y+.
template <class T>
struct MonotonicityWitness {
    T x, x_prime;
    T y_minus, y_plus;
    T y_prime;
};

template <class T>
T default_mass_threshold() {
    return scalar_traits<T>::exact ? T(0) : T(1e-10);
}

// Left-curtain coupling: processes the atoms of mu in ascending order, each
// row being the shadow of its atom in the remaining part of nu. The prefix
// targets of the result are exactly the shadows of the mu-prefixes.
template <class T>
Coupling<T> left_curtain(const Measure<T>& mu, const Measure<T>& nu,
                         const T& tol = scalar_traits<T>::order_tol()) {
    if (!convex_order(mu, nu, tol))
        throw NotInConvexOrder("left_curtain: marginals not in convex order");
    Coupling<T> pi;
    pi.source = mu;
    pi.target = nu;
    pi.rows.reserve(mu.size());
    Measure<T> remainder = nu;
    const T prune = scalar_traits<T>::prune_eps() * std::max(T(1), nu.total_mass());
    for (const auto& a : mu.atoms()) {
        const auto piece = shadow_atom(a.x, a.w, remainder, nullptr, tol);
        pi.rows.emplace_back(piece.atoms().begin(), piece.atoms().end());
        remainder = subtract(remainder, piece, prune);
    }
    return pi;
}

namespace detail {
template <class T>
Measure<T> reflect(const Measure<T>& m) {
    std::vector<std::pair<T, T>> pairs;
    pairs.reserve(m.size());
    for (const auto& a : m.atoms()) pairs.emplace_back(-a.x, a.w);
    return Measure<T>::from_pairs(std::move(pairs));
}
}  // namespace detail

// Right-curtain coupling: reflect both marginals, build the left curtain,
// reflect the plan back.
template <class T>
Coupling<T> right_curtain(const Measure<T>& mu, const Measure<T>& nu,
                          const T& tol = scalar_traits<T>::order_tol()) {
    const auto lc = left_curtain(detail::reflect(mu), detail::reflect(nu), tol);
    Coupling<T> pi;
    pi.source = mu;
    pi.target = nu;
    pi.rows.assign(mu.size(), {});
    const std::size_t n = mu.size();
    for (std::size_t i = 0; i < n; ++i) {
        // source atom i reflects to atom n-1-i of the reflected measure
        const auto& row = lc.rows[n - 1 - i];
        auto& out = pi.rows[i];
        out.reserve(row.size());
        for (auto it = row.rbegin(); it != row.rend(); ++it) out.push_back({-it->x, it->w});
    }
    return pi;
}

// Exhaustive search for the forbidden configuration among atoms with mass
// strictly above `mass_threshold`. Empty result means the plan is
// left-monotone at this threshold. The scan parallelizes across row pairs.
template <class T>
std::optional<MonotonicityWitness<T>> is_left_monotone(
    const Coupling<T>& pi, const T& mass_threshold = default_mass_threshold<T>()) {
    std::vector<std::vector<T>> supports(pi.rows.size());
    for (std::size_t i = 0; i < pi.rows.size(); ++i)
        for (const auto& e : pi.rows[i])
            if (e.w > mass_threshold) supports[i].push_back(e.x);

    const auto hit = par::monotone_scan(supports);
    if (!hit) return std::nullopt;
    const auto [i, ip, jp] = *hit;
    const T yp = supports[ip][jp];
    MonotonicityWitness<T> w;
    w.x = pi.source.atom(i).x;
    w.x_prime = pi.source.atom(ip).x;
    w.y_prime = yp;
    // Tightest bracketing pair in row i.
    w.y_minus = supports[i].front();
    w.y_plus = supports[i].back();
    for (const T& y : supports[i]) {
        if (y < yp) w.y_minus = y;
        if (y > yp) {
            w.y_plus = y;
            break;
        }
    }
    return w;
}

// Canonical convex-order property: the left-curtain prefix targets are
// convex-order minimal among all martingale rivals. Throws InvalidRival if
// the rival is not a martingale coupling of (mu, nu).
template <class T>
bool check_convex_minimality(const Measure<T>& mu, const Measure<T>& nu, const Coupling<T>& rival,
                             const T& tol = scalar_traits<T>::feas_tol()) {
    if (!coupling_is_valid(rival, mu, nu, /*martingale=*/true, tol))
        throw InvalidRival("check_convex_minimality: rival violates coupling invariants");
    const auto lc = left_curtain(mu, nu, tol);
    for (const auto& a : mu.atoms()) {
        if (!convex_order(lc.prefix_target(a.x), rival.prefix_target(a.x), tol)) return false;
    }
    return true;
}

// Per-row maps (x, T1, T2, support size) above a mass threshold; the CSV the
// curtain CLI emits and the basis of the structure experiments.
template <class T>
struct RowMap {
    T x;
    T t1;
    T t2;
    std::size_t support_size = 0;
    T mass{0};
};

template <class T>
std::vector<RowMap<T>> row_maps(const Coupling<T>& pi,
                                const T& mass_threshold = default_mass_threshold<T>()) {
    std::vector<RowMap<T>> maps;
    maps.reserve(pi.rows.size());
    for (std::size_t i = 0; i < pi.rows.size(); ++i) {
        RowMap<T> rm;
        rm.x = pi.source.atom(i).x;
        bool any = false;
        for (const auto& e : pi.rows[i]) {
            if (e.w <= mass_threshold) continue;
            if (!any) rm.t1 = e.x;
            rm.t2 = e.x;
            ++rm.support_size;
            rm.mass += e.w;
            any = true;
        }
        if (!any) {
            rm.t1 = rm.x;
            rm.t2 = rm.x;
        }
        maps.push_back(rm);
    }
    return maps;
}

}  // namespace mot
