#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mot::par {

// Runtime switch between the serial reference kernels and the OpenMP ones.
// Both paths produce identical results (reductions are argmin/min with
// deterministic tie-breaks, and element updates are independent); tests
// compare them directly and the bench tool times them.
enum class KernelMode { Serial, OpenMP };

KernelMode kernel_mode();
void set_kernel_mode(KernelMode m);

// ---------------------------------------------------------------------------
// Dense cost-matrix fill: out[i*m + j] = f(x[i], y[j]).

template <class T, class F>
void fill_cost_matrix_serial(const std::vector<T>& x, const std::vector<T>& y, F&& f,
                             std::vector<T>& out) {
    const std::size_t n = x.size(), m = y.size();
    out.resize(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out[i * m + j] = f(x[i], y[j]);
}

template <class T, class F>
void fill_cost_matrix_omp(const std::vector<T>& x, const std::vector<T>& y, F&& f,
                          std::vector<T>& out) {
    const std::size_t n = x.size(), m = y.size();
    out.resize(n * m);
#pragma omp parallel for schedule(static) if (n * m > 4096)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        for (std::size_t j = 0; j < m; ++j)
            out[static_cast<std::size_t>(i) * m + j] = f(x[static_cast<std::size_t>(i)], y[j]);
}

template <class T, class F>
void fill_cost_matrix(const std::vector<T>& x, const std::vector<T>& y, F&& f,
                      std::vector<T>& out) {
    if (kernel_mode() == KernelMode::OpenMP)
        fill_cost_matrix_omp(x, y, f, out);
    else
        fill_cost_matrix_serial(x, y, f, out);
}

// ---------------------------------------------------------------------------
// Argmin over a value functional; ties broken toward the lowest index, which
// keeps the parallel reduction bit-identical to the serial scan. Returns
// npos when no candidate value is below `bound`.

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

template <class T, class F>
std::size_t argmin_below_serial(std::size_t count, const T& bound, F&& value) {
    std::size_t best = npos;
    T best_v = bound;
    for (std::size_t j = 0; j < count; ++j) {
        const T v = value(j);
        if (v < best_v) {
            best_v = v;
            best = j;
        }
    }
    return best;
}

template <class T, class F>
std::size_t argmin_below_omp(std::size_t count, const T& bound, F&& value) {
    std::size_t best = npos;
    T best_v = bound;
#pragma omp parallel if (count > 4096)
    {
        std::size_t local = npos;
        T local_v = bound;
#pragma omp for schedule(static) nowait
        for (long long j = 0; j < static_cast<long long>(count); ++j) {
            const T v = value(static_cast<std::size_t>(j));
            if (v < local_v) {
                local_v = v;
                local = static_cast<std::size_t>(j);
            }
        }
#pragma omp critical
        {
            if (local != npos && (best == npos || local_v < best_v ||
                                  (local_v == best_v && local < best))) {
                best_v = local_v;
                best = local;
            }
        }
    }
    return best;
}

template <class T, class F>
std::size_t argmin_below(std::size_t count, const T& bound, F&& value) {
    if (kernel_mode() == KernelMode::OpenMP) return argmin_below_omp(count, bound, value);
    return argmin_below_serial(count, bound, value);
}

// ---------------------------------------------------------------------------
// Rank-1 elimination update of a dense row-major matrix: for every row r with
// col[r] != 0 (r != pivot), row_r -= col[r] * row_pivot. Rows are independent,
// so the parallel path is bitwise identical to the serial one.

template <class T>
void rank1_update_serial(std::vector<T>& mat, std::size_t rows, std::size_t cols,
                         const std::vector<T>& col, std::size_t pivot_row) {
    for (std::size_t r = 0; r < rows; ++r) {
        if (r == pivot_row || col[r] == T(0)) continue;
        const T f = col[r];
        const T* src = &mat[pivot_row * cols];
        T* dst = &mat[r * cols];
        for (std::size_t c = 0; c < cols; ++c) dst[c] -= f * src[c];
    }
}

template <class T>
void rank1_update_omp(std::vector<T>& mat, std::size_t rows, std::size_t cols,
                      const std::vector<T>& col, std::size_t pivot_row) {
#pragma omp parallel for schedule(static) if (rows * cols > 16384)
    for (long long r = 0; r < static_cast<long long>(rows); ++r) {
        const auto rr = static_cast<std::size_t>(r);
        if (rr == pivot_row || col[rr] == T(0)) continue;
        const T f = col[rr];
        const T* src = &mat[pivot_row * cols];
        T* dst = &mat[rr * cols];
        for (std::size_t c = 0; c < cols; ++c) dst[c] -= f * src[c];
    }
}

template <class T>
void rank1_update(std::vector<T>& mat, std::size_t rows, std::size_t cols,
                  const std::vector<T>& col, std::size_t pivot_row) {
    if (kernel_mode() == KernelMode::OpenMP)
        rank1_update_omp(mat, rows, cols, col, pivot_row);
    else
        rank1_update_serial(mat, rows, cols, col, pivot_row);
}

// ---------------------------------------------------------------------------
// Minimum dual margin c(x_i,y_j) - phi_i - psi_j - delta_i (y_j - x_i) over
// the full grid; min-reduction, deterministic.

template <class T>
T dual_margin_min_serial(const std::vector<T>& x, const std::vector<T>& y,
                         const std::vector<T>& cost, const std::vector<T>& phi,
                         const std::vector<T>& psi, const std::vector<T>& delta) {
    const std::size_t n = x.size(), m = y.size();
    T best(0);
    bool first = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const T margin = cost[i * m + j] - phi[i] - psi[j] - delta[i] * (y[j] - x[i]);
            if (first || margin < best) {
                best = margin;
                first = false;
            }
        }
    return best;
}

template <class T>
T dual_margin_min_omp(const std::vector<T>& x, const std::vector<T>& y,
                      const std::vector<T>& cost, const std::vector<T>& phi,
                      const std::vector<T>& psi, const std::vector<T>& delta) {
    const std::size_t n = x.size(), m = y.size();
    if (n == 0 || m == 0) return T(0);
    T best = cost[0] - phi[0] - psi[0] - delta[0] * (y[0] - x[0]);
#pragma omp parallel if (n * m > 4096)
    {
        T local = best;
#pragma omp for schedule(static) nowait
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            for (std::size_t j = 0; j < m; ++j) {
                const T margin = cost[ii * m + j] - phi[ii] - psi[j] - delta[ii] * (y[j] - x[ii]);
                if (margin < local) local = margin;
            }
        }
#pragma omp critical
        {
            if (local < best) best = local;
        }
    }
    return best;
}

template <class T>
T dual_margin_min(const std::vector<T>& x, const std::vector<T>& y, const std::vector<T>& cost,
                  const std::vector<T>& phi, const std::vector<T>& psi,
                  const std::vector<T>& delta) {
    if (kernel_mode() == KernelMode::OpenMP) return dual_margin_min_omp(x, y, cost, phi, psi, delta);
    return dual_margin_min_serial(x, y, cost, phi, psi, delta);
}

// ---------------------------------------------------------------------------
// Left-monotonicity scan over row supports. supports[i] holds the target
// positions of row i (sorted ascending, already mass-filtered). A violation
// is a triple (i, ip, jp) with i < ip and supports[ip][jp] strictly inside
// (min supports[i], max supports[i]). Returns the lexicographically first
// violation, so the parallel path agrees with the serial one.

template <class T>
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> monotone_scan_serial(
    const std::vector<std::vector<T>>& supports) {
    const std::size_t n = supports.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (supports[i].size() < 2) continue;
        const T lo = supports[i].front();
        const T hi = supports[i].back();
        for (std::size_t ip = i + 1; ip < n; ++ip)
            for (std::size_t jp = 0; jp < supports[ip].size(); ++jp) {
                const T y = supports[ip][jp];
                if (lo < y && y < hi) return std::tuple{i, ip, jp};
            }
    }
    return std::nullopt;
}

template <class T>
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> monotone_scan_omp(
    const std::vector<std::vector<T>>& supports) {
    const std::size_t n = supports.size();
    std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> best;
#pragma omp parallel if (n > 64)
    {
        std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> local;
#pragma omp for schedule(dynamic, 8) nowait
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            if (supports[ii].size() < 2) continue;
            if (local && std::get<0>(*local) < ii) continue;
            const T lo = supports[ii].front();
            const T hi = supports[ii].back();
            std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> found;
            for (std::size_t ip = ii + 1; ip < n && !found; ++ip)
                for (std::size_t jp = 0; jp < supports[ip].size(); ++jp) {
                    const T y = supports[ip][jp];
                    if (lo < y && y < hi) {
                        found = std::tuple{ii, ip, jp};
                        break;
                    }
                }
            if (found && (!local || *found < *local)) local = found;
        }
#pragma omp critical
        {
            if (local && (!best || *local < *best)) best = local;
        }
    }
    return best;
}

template <class T>
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> monotone_scan(
    const std::vector<std::vector<T>>& supports) {
    if (kernel_mode() == KernelMode::OpenMP) return monotone_scan_omp(supports);
    return monotone_scan_serial(supports);
}

}  // namespace mot::par
