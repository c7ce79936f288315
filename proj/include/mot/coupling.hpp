#pragma once

#include <functional>
#include <vector>

#include "mot/measure.hpp"

namespace mot {

// Sparse transport plan between two discrete measures. Rows are aligned with
// the source atoms; each row lists (target position, mass) sorted by target
// position. Masses are nonnegative; rows sum to the source atom masses and
// columns to the target masses (exactly in rational mode, within tolerance in
// float mode).
template <class T>
struct Coupling {
    Measure<T> source;
    Measure<T> target;
    std::vector<std::vector<Atom<T>>> rows;  // rows[i] belongs to source.atom(i)

    T row_mass(std::size_t i) const {
        T s(0);
        for (const auto& e : rows[i]) s += e.w;
        return s;
    }

    // Conditional-mean residual sum_y m(y - x_i) of row i; zero for
    // martingale plans.
    T row_moment_residual(std::size_t i) const {
        T s(0);
        for (const auto& e : rows[i]) s += e.w * (e.x - source.atom(i).x);
        return s;
    }

    T total_cost(const std::function<T(const T&, const T&)>& cost) const {
        T s(0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (const auto& e : rows[i]) s += e.w * cost(source.atom(i).x, e.x);
        return s;
    }

    // Target mass shipped from source positions <= t.
    Measure<T> prefix_target(const T& t) const {
        std::vector<std::pair<T, T>> pairs;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (source.atom(i).x > t) break;
            for (const auto& e : rows[i]) pairs.emplace_back(e.x, e.w);
        }
        return Measure<T>::from_pairs(std::move(pairs));
    }

    // Column marginal recomputed from the rows.
    Measure<T> column_marginal() const {
        std::vector<std::pair<T, T>> pairs;
        for (const auto& row : rows)
            for (const auto& e : row) pairs.emplace_back(e.x, e.w);
        return Measure<T>::from_pairs(std::move(pairs));
    }

    // Flat (x, y, w) copy, row-major; the wire format of plan JSON.
    std::vector<std::tuple<T, T, T>> entries() const {
        std::vector<std::tuple<T, T, T>> out;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (const auto& e : rows[i]) out.emplace_back(source.atom(i).x, e.x, e.w);
        return out;
    }
};

using CouplingD = Coupling<double>;
using CouplingQ = Coupling<Rational>;

// Groups a flat entry list by source position. Entries with the same (x, y)
// are merged; zero-mass entries are dropped; negative masses throw.
template <class T>
Coupling<T> coupling_from_entries(const std::vector<std::tuple<T, T, T>>& entries) {
    std::vector<std::pair<T, T>> src, tgt;
    for (const auto& [x, y, w] : entries) {
        if (w < T(0)) throw InvalidMeasure("negative coupling mass");
        src.emplace_back(x, w);
        tgt.emplace_back(y, w);
    }
    Coupling<T> pi;
    pi.source = Measure<T>::from_pairs(std::move(src));
    pi.target = Measure<T>::from_pairs(std::move(tgt));
    pi.rows.assign(pi.source.size(), {});
    for (std::size_t i = 0; i < pi.source.size(); ++i) {
        std::vector<std::pair<T, T>> row;
        for (const auto& [x, y, w] : entries)
            if (x == pi.source.atom(i).x && w > T(0)) row.emplace_back(y, w);
        const auto m = Measure<T>::from_pairs(std::move(row));
        pi.rows[i].assign(m.atoms().begin(), m.atoms().end());
    }
    return pi;
}

template <class T>
Coupling<T> identity_coupling(const Measure<T>& mu) {
    Coupling<T> pi;
    pi.source = mu;
    pi.target = mu;
    pi.rows.reserve(mu.size());
    for (const auto& a : mu.atoms()) pi.rows.push_back({{a.x, a.w}});
    return pi;
}

// Checks the Coupling invariants against the stated marginals:
// row sums, column sums, martingale row moments (if requested), sign.
template <class T>
bool coupling_is_valid(const Coupling<T>& pi, const Measure<T>& mu, const Measure<T>& nu,
                       bool martingale, const T& tol = scalar_traits<T>::feas_tol()) {
    if (pi.source.size() != mu.size()) return false;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (pi.source.atom(i).x != mu.atom(i).x) return false;
        for (const auto& e : pi.rows[i])
            if (e.w < T(0)) return false;
        if (abs_value(pi.row_mass(i) - mu.atom(i).w) > tol) return false;
        if (martingale && abs_value(pi.row_moment_residual(i)) > tol) return false;
    }
    const auto col = pi.column_marginal();
    auto w1 = wasserstein1(col, nu, tol);
    if (!w1) return false;
    // Atomwise column check: every nu atom recovered within tolerance.
    std::size_t j = 0;
    for (const auto& a : nu.atoms()) {
        T got(0);
        while (j < col.size() && col.atom(j).x < a.x) {
            if (col.atom(j).w > tol) return false;
            ++j;
        }
        if (j < col.size() && col.atom(j).x == a.x) got = col.atom(j++).w;
        if (abs_value(got - a.w) > tol) return false;
    }
    while (j < col.size()) {
        if (col.atom(j).w > tol) return false;
        ++j;
    }
    return true;
}

// Atomwise equality after pruning masses <= threshold.
template <class T>
bool couplings_equal(const Coupling<T>& a, const Coupling<T>& b, const T& threshold,
                     const T& tol = scalar_traits<T>::feas_tol()) {
    auto prune = [&](const Coupling<T>& pi) {
        std::vector<std::tuple<T, T, T>> out;
        for (const auto& [x, y, w] : pi.entries())
            if (w > threshold) out.emplace_back(x, y, w);
        return out;
    };
    const auto ea = prune(a);
    const auto eb = prune(b);
    if (ea.size() != eb.size()) return false;
    for (std::size_t k = 0; k < ea.size(); ++k) {
        if (std::get<0>(ea[k]) != std::get<0>(eb[k])) return false;
        if (std::get<1>(ea[k]) != std::get<1>(eb[k])) return false;
        if (abs_value(std::get<2>(ea[k]) - std::get<2>(eb[k])) > tol) return false;
    }
    return true;
}

}  // namespace mot
