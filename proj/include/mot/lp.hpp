#pragma once

#include <tuple>

#include "mot/costs.hpp"
#include "mot/coupling.hpp"
#include "mot/curtain.hpp"
#include "mot/potential.hpp"
#include "mot/rng.hpp"
#include "mot/simplex.hpp"

namespace mot {

// Primal martingale transport LP on supp(mu) x supp(nu): variables pi_ij,
// rows = n row sums, m column sums, n row first-moment zeroes. The first two
// blocks carry one redundancy each (mass and mean), so the rank is at most
// 2n + m - 2; the solver keeps zero-level artificials on redundant rows.
template <class T>
struct MartingaleLP {
    Measure<T> mu, nu;
    std::vector<T> cost;  // row-major n x m
    lp::Program<T> prog;
};

template <class T>
struct DualCertificate {
    std::vector<T> phi;    // on supp(mu)
    std::vector<T> psi;    // on supp(nu)
    std::vector<T> delta;  // on supp(mu)
    T min_margin{0};       // min over the grid of c - phi - psi - delta (y - x)
    T gap{0};              // primal value - dual value
};

template <class T>
struct MartingaleSolveResult {
    Coupling<T> plan;
    T value{0};
    DualCertificate<T> dual;
    std::size_t iterations = 0;
};

namespace detail {

template <class T>
lp::Program<T> transport_program(const Measure<T>& mu, const Measure<T>& nu,
                                 const std::vector<T>& cost, bool martingale) {
    const std::size_t n = mu.size(), m = nu.size();
    lp::Program<T> prog;
    prog.num_vars = n * m;
    prog.objective = cost;
    prog.rows.reserve(martingale ? 2 * n + m : n + m);
    for (std::size_t i = 0; i < n; ++i) {
        lp::Constraint<T> row;
        row.rel = lp::Rel::Eq;
        row.rhs = mu.atom(i).w;
        row.terms.reserve(m);
        for (std::size_t j = 0; j < m; ++j) row.terms.emplace_back(i * m + j, T(1));
        prog.rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < m; ++j) {
        lp::Constraint<T> row;
        row.rel = lp::Rel::Eq;
        row.rhs = nu.atom(j).w;
        row.terms.reserve(n);
        for (std::size_t i = 0; i < n; ++i) row.terms.emplace_back(i * m + j, T(1));
        prog.rows.push_back(std::move(row));
    }
    if (martingale) {
        for (std::size_t i = 0; i < n; ++i) {
            lp::Constraint<T> row;
            row.rel = lp::Rel::Eq;
            row.rhs = T(0);
            row.terms.reserve(m);
            for (std::size_t j = 0; j < m; ++j) {
                const T d = nu.atom(j).x - mu.atom(i).x;
                if (d != T(0)) row.terms.emplace_back(i * m + j, d);
            }
            prog.rows.push_back(std::move(row));
        }
    }
    return prog;
}

template <class T>
std::vector<T> flatten_plan(const Coupling<T>& pi, const Measure<T>& nu) {
    const std::size_t n = pi.rows.size(), m = nu.size();
    std::vector<T> x(n * m, T(0));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = 0;
        for (const auto& e : pi.rows[i]) {
            while (j < m && nu.atom(j).x < e.x) ++j;
            if (j < m && nu.atom(j).x == e.x)
                x[i * m + j] += e.w;
            else
                throw DomainError("flatten_plan: entry off the target grid");
        }
    }
    return x;
}

template <class T>
Coupling<T> plan_from_vector(const Measure<T>& mu, const Measure<T>& nu, const std::vector<T>& x,
                             const T& prune) {
    Coupling<T> pi;
    pi.source = mu;
    pi.target = nu;
    const std::size_t n = mu.size(), m = nu.size();
    pi.rows.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const T v = x[i * m + j];
            if (v > prune) pi.rows[i].push_back({nu.atom(j).x, v});
        }
    return pi;
}

template <class T>
T value_scale(const std::vector<T>& cost, const T& value) {
    T s(1);
    for (const auto& c : cost) s = std::max(s, abs_value(c));
    return std::max(s, abs_value(value));
}

}  // namespace detail

template <class T>
MartingaleLP<T> build_martingale_lp(const Measure<T>& mu, const Measure<T>& nu,
                                    const CostSpec& cost) {
    MartingaleLP<T> out;
    out.mu = mu;
    out.nu = nu;
    out.cost = cost_matrix(cost, mu, nu);
    out.prog = detail::transport_program(mu, nu, out.cost, /*martingale=*/true);
    return out;
}

// Feasibility of the martingale polytope decided by phase 1 alone (no
// convex-order precondition); the pairing with convex_order is a tested
// equivalence.
template <class T>
bool martingale_feasible(const Measure<T>& mu, const Measure<T>& nu) {
    std::vector<T> zero(mu.size() * nu.size(), T(0));
    auto prog = detail::transport_program(mu, nu, zero, /*martingale=*/true);
    return lp::feasible(prog);
}

// Optimal basic solution of the martingale transport LP. Phase 1 is the
// left-curtain plan (always feasible under convex order); duals come from
// the final basis. `maximize` negates the objective, in which case the dual
// certificate refers to the negated cost.
template <class T>
MartingaleSolveResult<T> solve_martingale(const Measure<T>& mu, const Measure<T>& nu,
                                          const CostSpec& cost, bool maximize = false,
                                          const T& tol = scalar_traits<T>::feas_tol()) {
    if (!convex_order(mu, nu, tol))
        throw NotInConvexOrder("solve_martingale: marginals not in convex order");
    auto mlp = build_martingale_lp(mu, nu, cost);
    if (maximize)
        for (auto& c : mlp.prog.objective) c = -c;

    const auto warm = detail::flatten_plan(left_curtain(mu, nu, tol), nu);
    auto sol = lp::solve(mlp.prog, &warm);
    if (sol.status != lp::SolveStatus::Optimal)
        throw Error("solve_martingale: solver failed unexpectedly");

    MartingaleSolveResult<T> out;
    const T prune = scalar_traits<T>::exact ? T(0) : T(1e-15);
    out.plan = detail::plan_from_vector(mu, nu, sol.x, prune);
    out.value = maximize ? -sol.value : sol.value;
    out.iterations = sol.iterations;

    const std::size_t n = mu.size(), m = nu.size();
    out.dual.phi.assign(sol.duals.begin(), sol.duals.begin() + n);
    out.dual.psi.assign(sol.duals.begin() + n, sol.duals.begin() + n + m);
    out.dual.delta.assign(sol.duals.begin() + n + m, sol.duals.begin() + 2 * n + m);

    std::vector<T> xs, ys;
    for (const auto& a : mu.atoms()) xs.push_back(a.x);
    for (const auto& a : nu.atoms()) ys.push_back(a.x);
    const auto& grid_cost = maximize ? mlp.prog.objective : mlp.cost;
    out.dual.min_margin =
        par::dual_margin_min(xs, ys, grid_cost, out.dual.phi, out.dual.psi, out.dual.delta);
    T dual_value(0);
    for (std::size_t i = 0; i < n; ++i) dual_value += out.dual.phi[i] * mu.atom(i).w;
    for (std::size_t j = 0; j < m; ++j) dual_value += out.dual.psi[j] * nu.atom(j).w;
    out.dual.gap = sol.value - dual_value;
    return out;
}

template <class T>
struct ClassicalSolveResult {
    Coupling<T> plan;
    T value{0};
};

template <class T>
ClassicalSolveResult<T> solve_classical(const Measure<T>& mu, const Measure<T>& nu,
                                        const CostSpec& cost,
                                        const T& tol = scalar_traits<T>::feas_tol()) {
    if (abs_value(mu.total_mass() - nu.total_mass()) > tol)
        throw MassMismatch("solve_classical: marginal masses differ");
    const auto cmat = cost_matrix(cost, mu, nu);
    auto prog = detail::transport_program(mu, nu, cmat, /*martingale=*/false);
    auto sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::Optimal)
        throw Error("solve_classical: solver failed unexpectedly");
    ClassicalSolveResult<T> out;
    const T prune = scalar_traits<T>::exact ? T(0) : T(1e-15);
    out.plan = detail::plan_from_vector(mu, nu, sol.x, prune);
    out.value = sol.value;
    return out;
}

// Hoeffding-Frechet (quantile) coupling: co-monotone merge of the two
// quantile step functions.
template <class T>
Coupling<T> hoeffding_frechet(const Measure<T>& mu, const Measure<T>& nu,
                              const T& tol = scalar_traits<T>::feas_tol()) {
    if (abs_value(mu.total_mass() - nu.total_mass()) > tol)
        throw MassMismatch("hoeffding_frechet: marginal masses differ");
    Coupling<T> pi;
    pi.source = mu;
    pi.target = nu;
    pi.rows.assign(mu.size(), {});
    std::size_t i = 0, j = 0;
    T a = mu.empty() ? T(0) : mu.atom(0).w;
    T b = nu.empty() ? T(0) : nu.atom(0).w;
    while (i < mu.size() && j < nu.size()) {
        const T f = std::min(a, b);
        if (f > T(0)) pi.rows[i].push_back({nu.atom(j).x, f});
        a -= f;
        b -= f;
        if (a == T(0)) {
            if (++i < mu.size()) a = mu.atom(i).w;
        }
        if (b == T(0)) {
            if (++j < nu.size()) b = nu.atom(j).w;
        }
    }
    return pi;
}

// Support is monotone: no (x, y), (x', y') in the support with x < x' and
// y > y'. The optimality characterization of the quantile coupling.
template <class T>
bool monotone_support(const Coupling<T>& pi, const T& threshold = default_mass_threshold<T>()) {
    T max_y{};
    bool seen = false;
    for (std::size_t i = 0; i < pi.rows.size(); ++i) {
        T row_min{};
        bool row_any = false;
        for (const auto& e : pi.rows[i]) {
            if (e.w <= threshold) continue;
            if (!row_any || e.x < row_min) row_min = e.x;
            row_any = true;
        }
        if (!row_any) continue;
        if (seen && row_min < max_y) return false;
        for (const auto& e : pi.rows[i])
            if (e.w > threshold && (!seen || e.x > max_y)) {
                max_y = e.x;
                seen = true;
            }
    }
    return true;
}

// Randomized probe for uniqueness of the optimizer: over the optimal face
// {feasible, cost <= value + eps_eq}, maximize and minimize `trials` random
// support functionals; any spread certifies non-uniqueness. A probabilistic
// check: agreement across all trials is strong evidence, not proof.
template <class T>
bool uniqueness_probe(const MartingaleLP<T>& mlp, const T& value, std::size_t trials,
                      std::uint64_t seed = 7,
                      const T& tol = scalar_traits<T>::feas_tol()) {
    Rng rng(seed);
    const std::size_t n = mlp.mu.size(), m = mlp.nu.size();
    lp::Program<T> prog = mlp.prog;
    lp::Constraint<T> cap;
    cap.rel = lp::Rel::Le;
    T eps_eq(0);
    if constexpr (!scalar_traits<T>::exact)
        eps_eq = T(1e-9) * detail::value_scale(mlp.cost, value);
    cap.rhs = value + eps_eq;
    for (std::size_t k = 0; k < n * m; ++k)
        if (mlp.cost[k] != T(0)) cap.terms.emplace_back(k, mlp.cost[k]);
    prog.rows.push_back(std::move(cap));

    const T spread_tol = scalar_traits<T>::exact
                             ? T(0)
                             : T(1e-7) * detail::value_scale(mlp.cost, value);
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<T> r(n * m);
        for (auto& v : r) {
            if constexpr (scalar_traits<T>::exact)
                v = rng.positive_rational(64, 1);
            else
                v = rng.uniform();
        }
        prog.objective = r;
        auto lo = lp::solve(prog);
        for (auto& v : prog.objective) v = -v;
        auto hi = lp::solve(prog);
        if (lo.status != lp::SolveStatus::Optimal || hi.status != lp::SolveStatus::Optimal)
            throw Error("uniqueness_probe: face LP failed");
        const T spread = (-hi.value) - lo.value;
        if (spread > spread_tol) return false;
        (void)tol;
    }
    return true;
}

// Per-row support counts above a mass threshold; the structural statistics
// behind the cardinality theorems.
template <class T>
struct SupportProfile {
    std::vector<std::size_t> row_counts;     // atoms above threshold per row
    std::vector<std::size_t> offdiag_counts; // those with y != x
    T qualifying_mass(const Coupling<T>& pi, std::size_t max_atoms) const {
        T s(0);
        for (std::size_t i = 0; i < row_counts.size(); ++i)
            if (row_counts[i] <= max_atoms) s += pi.source.atom(i).w;
        return s;
    }
};

template <class T>
SupportProfile<T> support_profile(const Coupling<T>& pi,
                                  const T& threshold = default_mass_threshold<T>()) {
    SupportProfile<T> prof;
    prof.row_counts.reserve(pi.rows.size());
    prof.offdiag_counts.reserve(pi.rows.size());
    for (std::size_t i = 0; i < pi.rows.size(); ++i) {
        std::size_t c = 0, od = 0;
        for (const auto& e : pi.rows[i])
            if (e.w > threshold) {
                ++c;
                if (e.x != pi.source.atom(i).x) ++od;
            }
        prof.row_counts.push_back(c);
        prof.offdiag_counts.push_back(od);
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Order oracles realized as LP feasibility problems over eta in F_mu^nu =
// {eta : mu <=_c eta, eta <= nu}: variables eta_j on supp(nu), equal mass and
// mean, and hinge domination at every joint support point.

template <class T>
lp::Program<T> f_set_program(const Measure<T>& mu, const Measure<T>& nu) {
    const std::size_t m = nu.size();
    lp::Program<T> prog;
    prog.num_vars = m;
    prog.objective.assign(m, T(0));
    lp::Constraint<T> mass, mean;
    mass.rel = lp::Rel::Eq;
    mass.rhs = mu.total_mass();
    mean.rel = lp::Rel::Eq;
    mean.rhs = mu.first_moment();
    for (std::size_t j = 0; j < m; ++j) {
        mass.terms.emplace_back(j, T(1));
        mean.terms.emplace_back(j, nu.atom(j).x);
    }
    prog.rows.push_back(std::move(mass));
    prog.rows.push_back(std::move(mean));
    for (std::size_t j = 0; j < m; ++j) {
        lp::Constraint<T> ub;
        ub.rel = lp::Rel::Le;
        ub.rhs = nu.atom(j).w;
        ub.terms.emplace_back(j, T(1));
        prog.rows.push_back(std::move(ub));
    }
    for (const T& k : detail::merged_support(mu, nu)) {
        lp::Constraint<T> hinge;
        hinge.rel = lp::Rel::Ge;
        hinge.rhs = upper_hinge(mu, k);
        for (std::size_t j = 0; j < m; ++j)
            if (nu.atom(j).x > k) hinge.terms.emplace_back(j, nu.atom(j).x - k);
        prog.rows.push_back(std::move(hinge));
    }
    return prog;
}

// LP cross-check for the extended order: feasible iff there is theta <= nu
// with mass/mean of mu and mu <=_c theta.
template <class T>
bool extended_order_lp_oracle(const Measure<T>& mu, const Measure<T>& nu) {
    if (mu.empty()) return true;
    if (mu.total_mass() > nu.total_mass()) return false;
    auto prog = f_set_program(mu, nu);
    return lp::feasible(prog);
}

// Random vertex of F_mu^nu obtained by optimizing a random objective.
// Requires extended order; returns the eta measure.
template <class T>
Measure<T> sample_f_set(const Measure<T>& mu, const Measure<T>& nu, Rng& rng) {
    auto prog = f_set_program(mu, nu);
    for (auto& c : prog.objective) {
        if constexpr (scalar_traits<T>::exact)
            c = rng.rational(32, 1);
        else
            c = rng.uniform(-1.0, 1.0);
    }
    auto sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::Optimal)
        throw NotInExtendedOrder("sample_f_set: F set is empty");
    std::vector<std::pair<T, T>> pairs;
    for (std::size_t j = 0; j < nu.size(); ++j)
        if (sol.x[j] > T(0)) pairs.emplace_back(nu.atom(j).x, sol.x[j]);
    return Measure<T>::from_pairs(std::move(pairs));
}

// All vertices of the martingale polytope for tiny exact instances.
inline std::vector<Coupling<Rational>> martingale_vertices(const Measure<Rational>& mu,
                                                           const Measure<Rational>& nu) {
    std::vector<Rational> zero(mu.size() * nu.size(), Rational(0));
    auto prog = detail::transport_program(mu, nu, zero, /*martingale=*/true);
    std::vector<Coupling<Rational>> out;
    for (const auto& x : lp::enumerate_vertices(prog))
        out.push_back(detail::plan_from_vector(mu, nu, x, Rational(0)));
    return out;
}

}  // namespace mot
