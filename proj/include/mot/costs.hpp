#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mot/errors.hpp"
#include "mot/measure.hpp"
#include "mot/rational.hpp"

namespace mot {

// Analytic cost families. Polynomial data is kept as exact rationals so that
// rational-mode LPs stay exact; doubles are cached for the float path.
//
//   PowerDiff(p)   (y-x)^p, p >= 1
//   AbsDiff        |y-x|
//   NegAbsDiff     -|y-x|
//   ExpDiff        exp(y-x), binary64 only
//   PolyDiff       h(y-x) with h(t) = c0 + c1 t + ...
//   Separable      phi(x) psi(y), value tables aligned with marginal supports
//   Indicator      1_{(-inf,s]}(x) |y-t|
enum class CostKind { PowerDiff, AbsDiff, NegAbsDiff, ExpDiff, PolyDiff, Separable, Indicator };

struct CostSpec {
    CostKind kind = CostKind::AbsDiff;
    int power = 0;                    // PowerDiff
    std::vector<Rational> coeffs;     // PolyDiff, ascending degree
    std::vector<double> coeffs_d;     // cached doubles for PolyDiff
    std::vector<double> phi, psi;     // Separable tables
    std::string sep_file;             // Separable source path (round-trip)
    Rational ind_s, ind_t;            // Indicator parameters
};

// Grammar: pow:<p> | abs | neg-abs | exp | poly:<c0,c1,...> | sep:<file> |
// ind:<s>,<t>. Throws ParseError with the offending position. For sep: the
// tables are loaded separately (see io.hpp); parsing only records the path.
CostSpec parse_cost(const std::string& text);
std::string format_cost(const CostSpec& spec);

// Scalar evaluation for the analytic families. Separable costs evaluate by
// marginal index (their tables carry no positions) and throw UnsupportedCost
// here; the grid builder below handles them.
double eval_cost(const CostSpec& spec, double x, double y);
Rational eval_cost_exact(const CostSpec& spec, const Rational& x, const Rational& y);

template <class T>
T eval_cost_t(const CostSpec& spec, const T& x, const T& y);
template <>
inline double eval_cost_t<double>(const CostSpec& spec, const double& x, const double& y) {
    return eval_cost(spec, x, y);
}
template <>
inline Rational eval_cost_t<Rational>(const CostSpec& spec, const Rational& x,
                                      const Rational& y) {
    return eval_cost_exact(spec, x, y);
}

// Validates a separable spec against the marginal sizes and the hypotheses
// phi >= 0 nonincreasing, psi >= 0 convex (slopes nondecreasing over the nu
// support). Throws UnsupportedCost when violated.
void validate_separable(const CostSpec& spec, std::size_t n_mu,
                        const std::vector<double>& nu_positions);

// Dense row-major cost matrix on supp(mu) x supp(nu).
template <class T>
std::vector<T> cost_matrix(const CostSpec& spec, const Measure<T>& mu, const Measure<T>& nu);

// True iff h' is strictly convex for c(x,y) = h(y-x), decided exactly:
// h''' >= 0 and not identically zero on the hull (whole line when no hull is
// given). Throws UnsupportedCost for non-differentiable / non-h families.
bool strict_convex_derivative(const CostSpec& spec);
bool strict_convex_derivative(const CostSpec& spec, const Rational& hull_lo,
                              const Rational& hull_hi);

// h as an explicit coefficient vector; defined for PowerDiff and PolyDiff.
std::vector<Rational> cost_h_coefficients(const CostSpec& spec);

// c + p (y-x)^2 + q (y-x), the cost-shift family of the quadratic identities.
// Defined for PowerDiff/PolyDiff (result is PolyDiff).
CostSpec shifted_cost(const CostSpec& spec, const Rational& p, const Rational& q);

}  // namespace mot
