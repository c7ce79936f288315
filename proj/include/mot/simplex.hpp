#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "mot/kernels.hpp"
#include "mot/rational.hpp"

namespace mot::lp {

enum class Rel { Eq, Le, Ge };

template <class T>
struct Constraint {
    std::vector<std::pair<std::size_t, T>> terms;  // sparse (variable, coefficient)
    Rel rel = Rel::Eq;
    T rhs{0};
};

// min objective . x  subject to rows, x >= 0.
template <class T>
struct Program {
    std::size_t num_vars = 0;
    std::vector<T> objective;
    std::vector<Constraint<T>> rows;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<T> x;      // values of the original variables
    T value{0};            // objective at the optimum
    std::vector<T> duals;  // row multipliers y: c_j - y.a_j >= 0 at optimum
    std::size_t iterations = 0;
};

// Dense revised primal simplex with an explicitly maintained basis inverse.
//
// Pricing uses the most-negative reduced cost with lowest-index tie-breaks
// and falls back to Bland's rule after a run of degenerate pivots, which
// guarantees termination; the pivot sequence is a deterministic function of
// the input. Exact when T is Rational (all tolerances are then zero).
//
// Phase 1 starts from artificial variables unless a feasible warm-start
// point is supplied, in which case the point is purified to a vertex and
// phase 1 is skipped entirely.
template <class T>
class SimplexSolver {
  public:
    explicit SimplexSolver(const Program<T>& prog) : prog_(prog) { build(); }

    // warm_start, when given, must satisfy all rows exactly (up to the float
    // pivot tolerance); it is purified to a basic feasible solution.
    Solution<T> solve(const std::vector<T>* warm_start = nullptr) {
        Solution<T> out;
        // Fall back to the artificial start when the warm point does not
        // survive purification (e.g. fp drift in its residuals).
        if (!warm_start || !install_warm_start(*warm_start)) {
            install_artificial_basis();
            if (!run_phase1(out)) return out;
        }
        const auto status = iterate(/*phase1=*/false);
        out.status = status;
        out.iterations = iterations_;
        if (status != SolveStatus::Optimal) return out;
        collect(out);
        return out;
    }

    // Phase 1 only: is the program feasible at all?
    bool feasible() {
        install_artificial_basis();
        Solution<T> scratch;
        return run_phase1(scratch);
    }

  private:
    static T pivot_eps() {
        if constexpr (scalar_traits<T>::exact)
            return T(0);
        else
            return T(1e-11);
    }
    static T price_eps() {
        if constexpr (scalar_traits<T>::exact)
            return T(0);
        else
            return T(1e-9);
    }

    void build() {
        nrows_ = prog_.rows.size();
        // Columns: original variables, then one slack/surplus per inequality
        // row, then one artificial per row.
        cols_.assign(prog_.num_vars, {});
        cost_.assign(prog_.num_vars, T(0));
        for (std::size_t j = 0; j < prog_.num_vars; ++j) cost_[j] = prog_.objective[j];
        row_sign_.assign(nrows_, T(1));
        rhs_.assign(nrows_, T(0));
        for (std::size_t r = 0; r < nrows_; ++r) {
            const auto& row = prog_.rows[r];
            rhs_[r] = row.rhs;
            for (const auto& [j, v] : row.terms) cols_[j].emplace_back(r, v);
        }
        for (std::size_t r = 0; r < nrows_; ++r) {
            const auto& row = prog_.rows[r];
            if (row.rel == Rel::Le) {
                slack_of_row_.push_back(cols_.size());
                cols_.push_back({{r, T(1)}});
                cost_.push_back(T(0));
            } else if (row.rel == Rel::Ge) {
                slack_of_row_.push_back(cols_.size());
                cols_.push_back({{r, T(-1)}});
                cost_.push_back(T(0));
            } else {
                slack_of_row_.push_back(par::npos);
            }
        }
        num_structural_ = cols_.size();
        // Normalize rhs >= 0 by flipping row signs (tracked for the duals).
        for (std::size_t r = 0; r < nrows_; ++r) {
            if (rhs_[r] < T(0)) {
                row_sign_[r] = T(-1);
                rhs_[r] = -rhs_[r];
            }
        }
        for (std::size_t j = 0; j < num_structural_; ++j)
            for (auto& [r, v] : cols_[j])
                if (row_sign_[r] < T(0)) v = -v;
        art_base_ = cols_.size();
        for (std::size_t r = 0; r < nrows_; ++r) {
            cols_.push_back({{r, T(1)}});
            cost_.push_back(T(0));
        }
    }

    void install_artificial_basis() {
        basis_.resize(nrows_);
        in_basis_.assign(cols_.size(), false);
        xb_ = rhs_;
        binv_.assign(nrows_ * nrows_, T(0));
        for (std::size_t r = 0; r < nrows_; ++r) {
            basis_[r] = art_base_ + r;
            in_basis_[art_base_ + r] = true;
            binv_[r * nrows_ + r] = T(1);
        }
    }

    bool run_phase1(Solution<T>& out) {
        phase1_cost_.assign(cols_.size(), T(0));
        for (std::size_t r = 0; r < nrows_; ++r) phase1_cost_[art_base_ + r] = T(1);
        const auto status = iterate(/*phase1=*/true);
        (void)status;  // phase 1 cannot be unbounded (objective >= 0)
        T infeas(0);
        for (std::size_t r = 0; r < nrows_; ++r)
            if (basis_[r] >= art_base_) infeas += xb_[r];
        T tol(0);
        if constexpr (!scalar_traits<T>::exact) tol = T(1e-8) * scale();
        if (infeas > tol) {
            out.status = SolveStatus::Infeasible;
            out.iterations = iterations_;
            return false;
        }
        drive_out_artificials();
        return true;
    }

    // A zero-level artificial can sit in the basis on a redundant row; swap
    // it for any structural column with a nonzero entry in its basis-inverse
    // row, if one exists.
    void drive_out_artificials() {
        for (std::size_t r = 0; r < nrows_; ++r) {
            if (basis_[r] < art_base_) continue;
            std::size_t replacement = par::npos;
            for (std::size_t j = 0; j < num_structural_ && replacement == par::npos; ++j) {
                if (in_basis_[j]) continue;
                T v(0);
                for (const auto& [rr, a] : cols_[j]) v += binv_[r * nrows_ + rr] * a;
                if (abs_value(v) > pivot_tol_) replacement = j;
            }
            if (replacement == par::npos) continue;  // genuinely redundant row
            // The artificial sits at (near) zero level; pivot at that level.
            auto u = compute_direction(replacement);
            const T t = xb_[r] / u[r];
            for (std::size_t k = 0; k < nrows_; ++k) {
                xb_[k] -= t * u[k];
                if (xb_[k] < T(0)) xb_[k] = T(0);
            }
            pivot(replacement, r, u);
            xb_[r] = t < T(0) ? T(0) : t;
        }
    }

    // Builds a basis containing (a maximal independent subset of) the warm
    // start's support, completes it with zero-level artificials, then pushes
    // any support column left outside the basis down to zero.
    bool install_warm_start(const std::vector<T>& x0) {
        // Full variable vector: originals plus slack values.
        std::vector<T> full(cols_.size(), T(0));
        for (std::size_t j = 0; j < prog_.num_vars; ++j) {
            if (x0[j] < T(0)) return false;
            full[j] = x0[j];
        }
        for (std::size_t r = 0; r < nrows_; ++r) {
            if (slack_of_row_[r] == par::npos) continue;
            T activity(0);
            for (const auto& [j, v] : prog_.rows[r].terms) activity += v * x0[j];
            const T gap = prog_.rows[r].rhs - activity;
            const T s = prog_.rows[r].rel == Rel::Le ? gap : -gap;
            if (s < -warm_tol()) return false;
            full[slack_of_row_[r]] = s < T(0) ? T(0) : s;
        }

        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < num_structural_; ++j)
            if (full[j] > T(0)) support.push_back(j);

        // Gaussian elimination over the support columns to pick an
        // independent subset, largest values first for float stability.
        std::vector<std::size_t> order = support;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return full[a] > full[b]; });
        std::vector<std::vector<T>> dense;  // reduced columns
        std::vector<std::size_t> pivot_row_of;
        std::vector<std::size_t> chosen;
        std::vector<char> row_used(nrows_, 0);
        for (std::size_t j : order) {
            std::vector<T> col(nrows_, T(0));
            for (const auto& [r, v] : cols_[j]) col[r] = v;
            // reduce by previously chosen columns
            for (std::size_t k = 0; k < chosen.size(); ++k) {
                const std::size_t pr = pivot_row_of[k];
                const T f = col[pr] / dense[k][pr];
                if (f == T(0)) continue;
                for (std::size_t r = 0; r < nrows_; ++r) col[r] -= f * dense[k][r];
            }
            std::size_t best = par::npos;
            for (std::size_t r = 0; r < nrows_; ++r) {
                if (row_used[r] || abs_value(col[r]) <= pivot_tol_) continue;
                if (best == par::npos || abs_value(col[r]) > abs_value(col[best])) best = r;
            }
            if (best == par::npos) continue;  // dependent on chosen columns
            row_used[best] = 1;
            pivot_row_of.push_back(best);
            dense.push_back(std::move(col));
            chosen.push_back(j);
        }

        // Assemble the basis: chosen support columns plus artificials on the
        // uncovered rows, then recompute the inverse from scratch.
        basis_.assign(nrows_, par::npos);
        in_basis_.assign(cols_.size(), false);
        for (std::size_t k = 0; k < chosen.size(); ++k) basis_[pivot_row_of[k]] = chosen[k];
        for (std::size_t r = 0; r < nrows_; ++r)
            if (basis_[r] == par::npos) basis_[r] = art_base_ + r;
        for (std::size_t r = 0; r < nrows_; ++r) in_basis_[basis_[r]] = true;
        if (!refactorize()) return false;

        // Basic values consistent with the warm point: xb = B^-1 (b - N x_N).
        std::vector<T> resid = rhs_;
        for (std::size_t j = 0; j < num_structural_; ++j) {
            if (in_basis_[j] || full[j] == T(0)) continue;
            for (const auto& [r, v] : cols_[j]) resid[r] -= v * full[j];
        }
        xb_.assign(nrows_, T(0));
        for (std::size_t r = 0; r < nrows_; ++r) {
            T s(0);
            for (std::size_t k = 0; k < nrows_; ++k) s += binv_[r * nrows_ + k] * resid[k];
            xb_[r] = s;
        }
        for (auto& v : xb_)
            if (v < T(0)) {
                if (v < -warm_tol()) return false;
                v = T(0);
            }

        // Push positive non-basic support columns to zero.
        nonbasic_value_.assign(cols_.size(), T(0));
        for (std::size_t j : support)
            if (!in_basis_[j]) nonbasic_value_[j] = full[j];
        for (std::size_t j : support) {
            while (!in_basis_[j] && nonbasic_value_[j] > T(0)) {
                auto u = compute_direction(j);
                // x_j -> x_j - t moves basics along +u; t capped by x_j.
                T theta = nonbasic_value_[j];
                std::size_t leave = par::npos;
                for (std::size_t r = 0; r < nrows_; ++r) {
                    if (u[r] < -pivot_tol_) {
                        const T cap = -xb_[r] / u[r];
                        if (cap < theta || (cap == theta && leave != par::npos &&
                                            basis_[r] < basis_[leave])) {
                            theta = cap;
                            leave = r;
                        }
                    }
                }
                if (leave == par::npos) {
                    // no basic blocks: the whole value moves out
                    apply_push(j, u, nonbasic_value_[j]);
                    nonbasic_value_[j] = T(0);
                } else {
                    apply_push(j, u, theta);
                    nonbasic_value_[j] -= theta;
                    // swap j into the basis at its remaining value
                    const T enter_val = nonbasic_value_[j];
                    nonbasic_value_[j] = T(0);
                    pivot(j, leave, u);
                    xb_[leave] = enter_val;
                }
            }
        }
        nonbasic_value_.assign(cols_.size(), T(0));
        return true;
    }

    void apply_push(std::size_t j, const std::vector<T>& u, const T& t) {
        (void)j;
        if (t == T(0)) return;
        for (std::size_t r = 0; r < nrows_; ++r) {
            xb_[r] += t * u[r];
            if (xb_[r] < T(0)) xb_[r] = T(0);  // clamp float dust
        }
    }

    bool refactorize() {
        // Invert the basis matrix by Gauss-Jordan with partial pivoting.
        std::vector<T> m(nrows_ * nrows_, T(0));
        for (std::size_t c = 0; c < nrows_; ++c)
            for (const auto& [r, v] : cols_[basis_[c]]) m[r * nrows_ + c] = v;
        binv_.assign(nrows_ * nrows_, T(0));
        for (std::size_t r = 0; r < nrows_; ++r) binv_[r * nrows_ + r] = T(1);
        for (std::size_t c = 0; c < nrows_; ++c) {
            std::size_t piv = par::npos;
            for (std::size_t r = c; r < nrows_; ++r) {
                if (abs_value(m[r * nrows_ + c]) <= pivot_tol_) continue;
                if (piv == par::npos || abs_value(m[r * nrows_ + c]) > abs_value(m[piv * nrows_ + c]))
                    piv = r;
            }
            if (piv == par::npos) return false;  // basis singular
            if (piv != c) {
                for (std::size_t k = 0; k < nrows_; ++k) {
                    std::swap(m[piv * nrows_ + k], m[c * nrows_ + k]);
                    std::swap(binv_[piv * nrows_ + k], binv_[c * nrows_ + k]);
                }
            }
            const T d = m[c * nrows_ + c];
            for (std::size_t k = 0; k < nrows_; ++k) {
                m[c * nrows_ + k] /= d;
                binv_[c * nrows_ + k] /= d;
            }
            for (std::size_t r = 0; r < nrows_; ++r) {
                if (r == c) continue;
                const T f = m[r * nrows_ + c];
                if (f == T(0)) continue;
                for (std::size_t k = 0; k < nrows_; ++k) {
                    m[r * nrows_ + k] -= f * m[c * nrows_ + k];
                    binv_[r * nrows_ + k] -= f * binv_[c * nrows_ + k];
                }
            }
        }
        return true;
    }

    std::vector<T> compute_direction(std::size_t j) const {
        std::vector<T> u(nrows_, T(0));
        for (const auto& [k, v] : cols_[j])
            for (std::size_t r = 0; r < nrows_; ++r) u[r] += binv_[r * nrows_ + k] * v;
        return u;
    }

    void pivot(std::size_t enter, std::size_t leave_row, std::vector<T> u) {
        // Scale the pivot row of the inverse, then eliminate u elsewhere.
        const T d = u[leave_row];
        T* prow = &binv_[leave_row * nrows_];
        for (std::size_t k = 0; k < nrows_; ++k) prow[k] /= d;
        u[leave_row] = T(0);
        par::rank1_update(binv_, nrows_, nrows_, u, leave_row);
        in_basis_[basis_[leave_row]] = false;
        basis_[leave_row] = enter;
        in_basis_[enter] = true;
    }

    T scale() const {
        T s(1);
        for (const auto& v : rhs_) s = std::max(s, abs_value(v));
        return s;
    }

    SolveStatus iterate(bool phase1) {
        const std::vector<T>& cost = phase1 ? phase1_cost_ : cost_;
        // Entering candidates are always structural: once an artificial
        // leaves the basis it is dropped for good.
        const std::size_t limit = num_structural_;
        std::vector<T> y(nrows_);
        std::size_t degenerate_run = 0;
        bool bland = false;
        const T eps = price_eps();
        while (true) {
            ++iterations_;
            if constexpr (!scalar_traits<T>::exact) {
                // Re-invert periodically to shed accumulated pivot error.
                if (iterations_ % 256 == 0) {
                    refactorize();
                    for (std::size_t r = 0; r < nrows_; ++r) {
                        T s(0);
                        for (std::size_t k = 0; k < nrows_; ++k)
                            s += binv_[r * nrows_ + k] * rhs_[k];
                        xb_[r] = s < T(0) ? T(0) : s;
                    }
                }
            }
            // duals y = c_B B^-1
            for (std::size_t k = 0; k < nrows_; ++k) {
                T s(0);
                for (std::size_t r = 0; r < nrows_; ++r)
                    s += cost[basis_[r]] * binv_[r * nrows_ + k];
                y[k] = s;
            }
            auto reduced = [&](std::size_t j) -> T {
                T d = cost[j];
                for (const auto& [r, v] : cols_[j]) d -= y[r] * v;
                return d;
            };
            std::size_t enter = par::npos;
            if (!bland) {
                enter = par::argmin_below<T>(limit, -eps, [&](std::size_t j) -> T {
                    if (in_basis_[j]) return T(0);
                    return reduced(j);
                });
            } else {
                for (std::size_t j = 0; j < limit; ++j) {
                    if (in_basis_[j]) continue;
                    if (reduced(j) < -eps) {
                        enter = j;
                        break;
                    }
                }
            }
            if (enter == par::npos) return SolveStatus::Optimal;

            const auto u = compute_direction(enter);
            std::size_t leave = par::npos;
            T theta{};
            for (std::size_t r = 0; r < nrows_; ++r) {
                if (u[r] <= pivot_tol_) continue;
                const T cap = xb_[r] / u[r];
                if (leave == par::npos || cap < theta ||
                    (cap == theta && basis_[r] < basis_[leave])) {
                    theta = cap;
                    leave = r;
                }
            }
            if (leave == par::npos) return SolveStatus::Unbounded;

            if (theta == T(0) || (!scalar_traits<T>::exact && theta <= pivot_tol_)) {
                if (++degenerate_run > 40) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
            for (std::size_t r = 0; r < nrows_; ++r) {
                xb_[r] -= theta * u[r];
                if (xb_[r] < T(0)) xb_[r] = T(0);
            }
            pivot(enter, leave, u);
            xb_[leave] = theta;
        }
    }

    void collect(Solution<T>& out) const {
        out.x.assign(prog_.num_vars, T(0));
        for (std::size_t r = 0; r < nrows_; ++r)
            if (basis_[r] < prog_.num_vars) out.x[basis_[r]] = xb_[r];
        T v(0);
        for (std::size_t j = 0; j < prog_.num_vars; ++j) v += prog_.objective[j] * out.x[j];
        out.value = v;
        out.duals.assign(nrows_, T(0));
        for (std::size_t k = 0; k < nrows_; ++k) {
            T s(0);
            for (std::size_t r = 0; r < nrows_; ++r)
                s += cost_[basis_[r]] * binv_[r * nrows_ + k];
            out.duals[k] = s * row_sign_[k];
        }
    }

    const Program<T>& prog_;
    std::size_t nrows_ = 0;
    std::size_t num_structural_ = 0;
    std::size_t art_base_ = 0;
    std::vector<std::vector<std::pair<std::size_t, T>>> cols_;
    std::vector<T> cost_;
    std::vector<T> phase1_cost_;
    std::vector<T> rhs_;
    std::vector<T> row_sign_;
    std::vector<std::size_t> slack_of_row_;

    std::vector<std::size_t> basis_;
    std::vector<char> in_basis_;
    std::vector<T> xb_;
    std::vector<T> binv_;
    std::vector<T> nonbasic_value_;
    std::size_t iterations_ = 0;

    const T pivot_tol_ = pivot_eps();

    static T warm_tol() {
        if constexpr (scalar_traits<T>::exact)
            return T(0);
        else
            return T(1e-7);
    }
};

template <class T>
Solution<T> solve(const Program<T>& prog, const std::vector<T>* warm_start = nullptr) {
    SimplexSolver<T> solver(prog);
    return solver.solve(warm_start);
}

template <class T>
bool feasible(const Program<T>& prog) {
    SimplexSolver<T> solver(prog);
    return solver.feasible();
}

// Exhaustive vertex enumeration for small exact programs (equality rows
// only): every basic feasible solution, deduplicated. Intended for n*m <= ~20
// columns; used by the uniqueness and monotonicity acceptance tests.
std::vector<std::vector<Rational>> enumerate_vertices(const Program<Rational>& prog);

// ---------------------------------------------------------------------------

inline std::vector<std::vector<Rational>> enumerate_vertices(const Program<Rational>& prog) {
    using R = Rational;
    const std::size_t m = prog.rows.size();
    const std::size_t n = prog.num_vars;
    // Dense A and b.
    std::vector<std::vector<R>> a(m, std::vector<R>(n, R(0)));
    std::vector<R> b(m, R(0));
    for (std::size_t r = 0; r < m; ++r) {
        assert(prog.rows[r].rel == Rel::Eq);
        b[r] = prog.rows[r].rhs;
        for (const auto& [j, v] : prog.rows[r].terms) a[r][j] = v;
    }
    // Rank via elimination on a copy.
    std::vector<std::vector<R>> e = a;
    std::vector<R> eb = b;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < m; ++c) {
        std::size_t piv = rank;
        while (piv < m && e[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(e[piv], e[rank]);
        std::swap(eb[piv], eb[rank]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rank || e[r][c] == 0) continue;
            const R f = e[r][c] / e[rank][c];
            for (std::size_t k = c; k < n; ++k) e[r][k] -= f * e[rank][k];
            eb[r] -= f * eb[rank];
        }
        ++rank;
    }
    for (std::size_t r = rank; r < m; ++r)
        if (eb[r] != 0) return {};  // inconsistent system

    std::vector<std::vector<R>> vertices;
    auto try_subset = [&](const std::vector<std::size_t>& cols) {
        // Solve A_S x_S = b; require a unique nonnegative solution.
        std::vector<std::vector<R>> s(m, std::vector<R>(cols.size() + 1, R(0)));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t k = 0; k < cols.size(); ++k) s[r][k] = a[r][cols[k]];
            s[r][cols.size()] = b[r];
        }
        std::vector<std::size_t> pivot_col_of_row(m, par::npos);
        std::size_t prank = 0;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::size_t piv = par::npos;
            for (std::size_t r = prank; r < m; ++r)
                if (s[r][c] != 0) {
                    piv = r;
                    break;
                }
            if (piv == par::npos) return;  // singular: not a basis
            std::swap(s[piv], s[prank]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == prank || s[r][c] == 0) continue;
                const R f = s[r][c] / s[prank][c];
                for (std::size_t k = c; k <= cols.size(); ++k) s[r][k] -= f * s[prank][k];
            }
            pivot_col_of_row[prank] = c;
            ++prank;
        }
        for (std::size_t r = prank; r < m; ++r)
            if (s[r][cols.size()] != 0) return;  // inconsistent
        std::vector<R> x(n, R(0));
        for (std::size_t r = 0; r < prank; ++r) {
            const std::size_t c = pivot_col_of_row[r];
            const R v = s[r][cols.size()] / s[r][c];
            if (v < 0) return;
            x[cols[c]] = v;
        }
        for (const auto& seen : vertices)
            if (seen == x) return;
        vertices.push_back(std::move(x));
    };

    // All subsets of columns of size `rank`.
    std::vector<std::size_t> comb(rank);
    for (std::size_t i = 0; i < rank; ++i) comb[i] = i;
    if (rank == 0) {
        vertices.emplace_back(n, R(0));
        return vertices;
    }
    if (rank > n) return {};
    while (true) {
        try_subset(comb);
        // next combination
        std::size_t i = rank;
        while (i-- > 0) {
            if (comb[i] != i + n - rank) {
                ++comb[i];
                for (std::size_t k = i + 1; k < rank; ++k) comb[k] = comb[k - 1] + 1;
                break;
            }
            if (i == 0) return vertices;
        }
    }
}

}  // namespace mot::lp
