#pragma once

#include <vector>

#include "mot/measure.hpp"

namespace mot {

// Piecewise-linear convex potential u_mu(x) = int |y - x| dmu(y).
// Kinks sit exactly at the atom positions; beyond the extreme breakpoints the
// function coincides with k|x - m| (k = total mass, m = barycenter), which is
// exact for finitely supported measures, not merely asymptotic.
template <class T>
class Potential {
  public:
    Potential() = default;

    Potential(std::vector<T> breakpoints, std::vector<T> values, T mass, T moment)
        : xs_(std::move(breakpoints)), us_(std::move(values)), mass_(std::move(mass)),
          moment_(std::move(moment)) {}

    const std::vector<T>& breakpoints() const { return xs_; }
    const std::vector<T>& values() const { return us_; }
    const T& asymptotic_mass() const { return mass_; }
    T asymptotic_mean() const { return mass_ == T(0) ? T(0) : moment_ / mass_; }

    T operator()(const T& x) const {
        if (xs_.empty()) return T(0);
        // Outside the hull the two affine pieces are exact:
        //   left of support:  u(x) = moment - mass*x
        //   right of support: u(x) = mass*x - moment
        if (x <= xs_.front()) return moment_ - mass_ * x;
        if (x >= xs_.back()) return mass_ * x - moment_;
        auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
        std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
        if (xs_[hi] == x) return us_[hi];
        std::size_t lo = hi - 1;
        const T t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
        return us_[lo] + t * (us_[hi] - us_[lo]);
    }

    // Slope immediately left / right of x; the jump at an atom equals twice
    // its mass.
    T slope_left(const T& x) const { return slope(x, /*right=*/false); }
    T slope_right(const T& x) const { return slope(x, /*right=*/true); }

  private:
    T slope(const T& x, bool right) const {
        if (xs_.empty()) return T(0);
        if (x < xs_.front() || (x == xs_.front() && !right)) return -mass_;
        if (x > xs_.back() || (x == xs_.back() && right)) return mass_;
        auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
        std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
        if (xs_[hi] == x && right) ++hi;
        return (us_[hi] - us_[hi - 1]) / (xs_[hi] - xs_[hi - 1]);
    }

    std::vector<T> xs_;
    std::vector<T> us_;
    T mass_{0};
    T moment_{0};
};

// u_mu evaluated at its own breakpoints in one sweep:
// u(x_i) = (moment_above - x_i * mass_above) + (x_i * mass_below - moment_below).
template <class T>
Potential<T> potential(const Measure<T>& mu) {
    const std::size_t n = mu.size();
    std::vector<T> xs(n), us(n);
    T mass_below(0), moment_below(0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = mu.atom(i);
        const T mass_above = mu.total_mass() - mass_below - a.w;
        const T moment_above = mu.first_moment() - moment_below - a.w * a.x;
        xs[i] = a.x;
        us[i] = (moment_above - a.x * mass_above) + (a.x * mass_below - moment_below);
        mass_below += a.w;
        moment_below += a.w * a.x;
    }
    return Potential<T>(std::move(xs), std::move(us), mu.total_mass(), mu.first_moment());
}

// int (y - k)_+ dmu and int (k - y)_+ dmu. Every nonnegative convex
// piecewise-linear function is a nonnegative combination of constants and
// these hinges, which is what makes the direct order tests below complete.
template <class T>
T upper_hinge(const Measure<T>& mu, const T& k) {
    T s(0);
    for (auto it = mu.atoms().rbegin(); it != mu.atoms().rend(); ++it) {
        if (it->x <= k) break;
        s += it->w * (it->x - k);
    }
    return s;
}

template <class T>
T lower_hinge(const Measure<T>& mu, const T& k) {
    T s(0);
    for (const auto& a : mu.atoms()) {
        if (a.x >= k) break;
        s += a.w * (k - a.x);
    }
    return s;
}

namespace detail {
template <class T>
std::vector<T> merged_support(const Measure<T>& a, const Measure<T>& b) {
    std::vector<T> xs;
    xs.reserve(a.size() + b.size());
    for (const auto& at : a.atoms()) xs.push_back(at.x);
    for (const auto& at : b.atoms()) xs.push_back(at.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}
}  // namespace detail

// Convex order mu <=_c nu: equal mass, equal first moment, and u_mu <= u_nu.
// The potential difference is piecewise linear with matched asymptotics, so
// checking it at the atom positions of both measures is sufficient.
template <class T>
bool convex_order(const Measure<T>& mu, const Measure<T>& nu,
                  const T& tol = scalar_traits<T>::order_tol()) {
    if (abs_value(mu.total_mass() - nu.total_mass()) > tol) return false;
    if (abs_value(mu.first_moment() - nu.first_moment()) > tol) return false;
    const auto umu = potential(mu);
    const auto unu = potential(nu);
    for (const T& x : detail::merged_support(mu, nu))
        if (umu(x) > unu(x) + tol) return false;
    return true;
}

// Extended convex order mu <=_E nu: mass(mu) <= mass(nu) and both hinge
// families dominated at every support point of either measure. The hinge
// envelopes are piecewise linear with breakpoints in the joint support and
// the mass inequality controls the unbounded rays, so the grid test is exact.
template <class T>
bool extended_order(const Measure<T>& mu, const Measure<T>& nu,
                    const T& tol = scalar_traits<T>::order_tol()) {
    if (mu.total_mass() > nu.total_mass() + tol) return false;
    for (const T& k : detail::merged_support(mu, nu)) {
        if (upper_hinge(mu, k) > upper_hinge(nu, k) + tol) return false;
        if (lower_hinge(mu, k) > lower_hinge(nu, k) + tol) return false;
    }
    return true;
}

}  // namespace mot
