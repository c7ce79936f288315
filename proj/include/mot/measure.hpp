#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mot/errors.hpp"
#include "mot/rational.hpp"

namespace mot {

template <class T>
struct Atom {
    T x;  // position
    T w;  // mass, strictly positive once stored in a Measure

    friend bool operator==(const Atom& a, const Atom& b) { return a.x == b.x && a.w == b.w; }
};

// Finitely supported positive measure on the line. Atoms are kept sorted by
// strictly increasing position with strictly positive masses; total mass and
// first moment are cached at construction. Immutable after construction.
template <class T>
class Measure {
  public:
    Measure() = default;

    // Merges duplicate positions, drops zero weights, sorts by position.
    // Throws InvalidMeasure on any negative weight.
    static Measure from_pairs(std::vector<std::pair<T, T>> pairs) {
        for (const auto& [x, w] : pairs) {
            (void)x;
            if (w < T(0)) throw InvalidMeasure("negative atom weight");
        }
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Atom<T>> atoms;
        atoms.reserve(pairs.size());
        for (const auto& [x, w] : pairs) {
            if (w == T(0)) continue;
            if (!atoms.empty() && atoms.back().x == x)
                atoms.back().w += w;
            else
                atoms.push_back({x, w});
        }
        return Measure(std::move(atoms));
    }

    // Atoms must already be sorted, distinct and positive; cheap constructor
    // used by the algorithms that maintain these invariants themselves.
    static Measure from_sorted(std::vector<Atom<T>> atoms) { return Measure(std::move(atoms)); }

    const std::vector<Atom<T>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom<T>& atom(std::size_t i) const { return atoms_[i]; }

    const T& total_mass() const { return total_mass_; }
    const T& first_moment() const { return first_moment_; }

    // Second moment is not cached; it is only needed by a few identities.
    T second_moment() const {
        T s(0);
        for (const auto& a : atoms_) s += a.w * a.x * a.x;
        return s;
    }

    T mean() const {
        if (total_mass_ == T(0)) return T(0);
        return first_moment_ / total_mass_;
    }

    T mass_at(const T& x) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](const Atom<T>& a, const T& v) { return a.x < v; });
        if (it != atoms_.end() && it->x == x) return it->w;
        return T(0);
    }

    // Right-continuous CDF: F(t) = mass of (-inf, t].
    T cdf(const T& t) const {
        T s(0);
        for (const auto& a : atoms_) {
            if (a.x <= t)
                s += a.w;
            else
                break;
        }
        return s;
    }

    // Generalized inverse G(s) = inf{t : s <= F(t)} for s in (0, total_mass].
    T quantile(const T& s) const {
        if (!(s > T(0)) || s > total_mass_)
            throw DomainError("quantile offset outside (0, mass]");
        T acc(0);
        for (const auto& a : atoms_) {
            acc += a.w;
            if (s <= acc) return a.x;
        }
        return atoms_.back().x;  // unreachable for valid s; guards fp drift
    }

    // Restriction to positions <= t (prefix in space, not in quantile).
    Measure restrict_leq(const T& t) const {
        std::vector<Atom<T>> out;
        for (const auto& a : atoms_) {
            if (a.x <= t)
                out.push_back(a);
            else
                break;
        }
        return Measure(std::move(out));
    }

    friend bool operator==(const Measure& a, const Measure& b) { return a.atoms_ == b.atoms_; }

  private:
    explicit Measure(std::vector<Atom<T>> atoms) : atoms_(std::move(atoms)) {
        for (const auto& a : atoms_) {
            total_mass_ += a.w;
            first_moment_ += a.w * a.x;
        }
    }

    std::vector<Atom<T>> atoms_;
    T total_mass_{0};
    T first_moment_{0};
};

using MeasureD = Measure<double>;
using MeasureQ = Measure<Rational>;

template <class T>
Measure<T> make_measure(std::vector<std::pair<T, T>> pairs) {
    return Measure<T>::from_pairs(std::move(pairs));
}

// Dirac mass `w` at `x`.
template <class T>
Measure<T> dirac(const T& x, const T& w) {
    return Measure<T>::from_pairs({{x, w}});
}

template <class T>
Measure<T> add(const Measure<T>& a, const Measure<T>& b) {
    std::vector<std::pair<T, T>> pairs;
    pairs.reserve(a.size() + b.size());
    for (const auto& at : a.atoms()) pairs.emplace_back(at.x, at.w);
    for (const auto& at : b.atoms()) pairs.emplace_back(at.x, at.w);
    return Measure<T>::from_pairs(std::move(pairs));
}

// a - b, requiring b <= a atomwise up to `slack`; masses that end up within
// `slack` of zero are dropped. Exact mode passes slack = 0.
template <class T>
Measure<T> subtract(const Measure<T>& a, const Measure<T>& b, const T& slack = T(0)) {
    std::vector<Atom<T>> out;
    std::size_t j = 0;
    for (const auto& at : a.atoms()) {
        T w = at.w;
        while (j < b.size() && b.atom(j).x < at.x) {
            if (b.atom(j).w > slack) throw DomainError("subtract: b not dominated by a");
            ++j;
        }
        if (j < b.size() && b.atom(j).x == at.x) {
            w -= b.atom(j).w;
            ++j;
        }
        if (w < T(0)) {
            if (w < -slack) throw DomainError("subtract: negative residual mass");
            w = T(0);
        }
        if (w > slack) out.push_back({at.x, w});
    }
    while (j < b.size()) {
        if (b.atom(j).w > slack) throw DomainError("subtract: b not dominated by a");
        ++j;
    }
    return Measure<T>::from_sorted(std::move(out));
}

// Pointwise minimum: atom at x with mass min(a({x}), b({x})).
template <class T>
Measure<T> min_measure(const Measure<T>& a, const Measure<T>& b) {
    std::vector<Atom<T>> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.atom(i).x < b.atom(j).x) {
            ++i;
        } else if (b.atom(j).x < a.atom(i).x) {
            ++j;
        } else {
            out.push_back({a.atom(i).x, std::min(a.atom(i).w, b.atom(j).w)});
            ++i;
            ++j;
        }
    }
    return Measure<T>::from_sorted(std::move(out));
}

// Replaces the restriction of gamma to each partition cell by one atom at the
// cell barycenter carrying the cell mass. Cells are right-closed ]a, b];
// `cuts` must be strictly increasing.
template <class T>
Measure<T> coarsen(const Measure<T>& gamma, const std::vector<T>& cuts) {
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (!(cuts[i - 1] < cuts[i])) throw DomainError("coarsen: cuts not strictly increasing");

    std::vector<Atom<T>> out;
    std::size_t c = 0;
    T mass(0), moment(0);
    auto flush = [&] {
        if (mass > T(0)) out.push_back({moment / mass, mass});
        mass = T(0);
        moment = T(0);
    };
    for (const auto& a : gamma.atoms()) {
        while (c < cuts.size() && a.x > cuts[c]) {
            flush();
            ++c;
        }
        mass += a.w;
        moment += a.w * a.x;
    }
    flush();
    // Cell barycenters are increasing across cells, so the result is sorted,
    // but distinct cells can share a barycenter; merge through from_pairs.
    std::vector<std::pair<T, T>> pairs;
    pairs.reserve(out.size());
    for (const auto& a : out) pairs.emplace_back(a.x, a.w);
    return Measure<T>::from_pairs(std::move(pairs));
}

// Kantorovich / 1-Wasserstein distance between equal-mass measures, computed
// as the area between the two step CDFs. Returns nullopt ("infinite") when
// masses differ by more than mass_tol.
template <class T>
std::optional<T> wasserstein1(const Measure<T>& a, const Measure<T>& b,
                              const T& mass_tol = scalar_traits<T>::feas_tol()) {
    if (abs_value(a.total_mass() - b.total_mass()) > mass_tol) return std::nullopt;
    // Merge breakpoints; between consecutive positions both CDFs are constant.
    std::vector<T> xs;
    xs.reserve(a.size() + b.size());
    for (const auto& at : a.atoms()) xs.push_back(at.x);
    for (const auto& at : b.atoms()) xs.push_back(at.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    T dist(0), fa(0), fb(0);
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 <= xs.size(); ++k) {
        while (i < a.size() && a.atom(i).x <= xs[k]) fa += a.atom(i++).w;
        while (j < b.size() && b.atom(j).x <= xs[k]) fb += b.atom(j++).w;
        if (k + 1 < xs.size()) dist += abs_value(fa - fb) * (xs[k + 1] - xs[k]);
    }
    return dist;
}

}  // namespace mot
