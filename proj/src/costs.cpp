#include "mot/costs.hpp"

#include <algorithm>
#include <cstdlib>

#include "mot/kernels.hpp"

namespace mot {

namespace {

// ---------------------------------------------------------------------------
// Exact univariate polynomials over Q, ascending-degree coefficient vectors.

using Poly = std::vector<Rational>;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<int>(i)));
    return d;
}

Rational eval(const Poly& p, const Rational& t) {
    Rational v(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
    return v;
}

// Remainder of polynomial division.
Poly rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        trim(a);
    }
    return a;
}

Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

int sign(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Sturm sequence of a square-free polynomial.
std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, derivative(p)};
    trim(chain[1]);
    while (!chain.back().empty() && chain.back().size() > 1) {
        Poly r = rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        trim(r);
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_variations(const std::vector<Poly>& chain, const Rational& t) {
    int count = 0, prev = 0;
    for (const auto& q : chain) {
        const int s = sign(eval(q, t));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// Number of distinct real roots of the square-free p in (a, b].
int roots_in(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

// Cauchy bound: all real roots lie in (-B, B).
Rational root_bound(const Poly& p) {
    Rational m(0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, abs_value(p[i] / p.back()));
    return m + 1;
}

// Isolating intervals (a_i, b_i] for the distinct real roots of square-free
// p inside (lo, hi], pairwise disjoint, by repeated bisection.
std::vector<std::pair<Rational, Rational>> isolate_roots(const Poly& p, const Rational& lo,
                                                         const Rational& hi) {
    std::vector<std::pair<Rational, Rational>> out;
    if (p.size() <= 1) return out;
    const auto chain = sturm_chain(p);
    std::vector<std::pair<Rational, Rational>> work{{lo, hi}};
    while (!work.empty()) {
        auto [a, b] = work.back();
        work.pop_back();
        const int k = roots_in(chain, a, b);
        if (k == 0) continue;
        if (k == 1) {
            out.emplace_back(a, b);
            continue;
        }
        const Rational mid = (a + b) / 2;
        work.emplace_back(a, mid);
        work.emplace_back(mid, b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// A point in (a, root) where root is the unique root of the chain's
// polynomial inside (a, b]: bisect until the root falls in the right half.
Rational sample_below_root(const std::vector<Poly>& chain, Rational a, Rational b) {
    while (true) {
        const Rational m = (a + b) / 2;
        if (roots_in(chain, a, m) >= 1)
            b = m;
        else
            return m;
    }
}

// Decides q >= 0 on [lo, hi] (and q not identically 0 there) exactly. The
// distinct roots of q are isolated with a Sturm chain; one non-root sample
// is taken in every maximal root-free region and its sign checked.
bool nonneg_on_interval(Poly q, const Rational& lo, const Rational& hi) {
    trim(q);
    if (q.empty()) return false;  // identically zero: h' affine, not strict
    if (q.size() == 1) return q[0] > 0;
    if (lo == hi) return eval(q, lo) > 0;
    const Poly sf = [&] {
        Poly g = gcd(q, derivative(q));
        if (g.size() <= 1) return q;
        // square-free part q / g (g is monic, division is exact)
        Poly num = q, quo;
        quo.assign(num.size() - g.size() + 1, Rational(0));
        while (num.size() >= g.size() && !num.empty()) {
            const Rational f = num.back() / g.back();
            const std::size_t shift = num.size() - g.size();
            quo[shift] = f;
            for (std::size_t i = 0; i < g.size(); ++i) num[shift + i] -= f * g[i];
            trim(num);
        }
        return quo;
    }();

    const auto chain = sturm_chain(sf);
    const auto roots = isolate_roots(sf, lo, hi);  // sorted, pairwise disjoint

    std::vector<Rational> samples;
    if (roots.empty()) {
        samples.push_back(eval(sf, hi) != 0 ? hi : lo);
    } else {
        // Region left of the first root.
        if (eval(sf, lo) != 0)
            samples.push_back(lo);
        else
            samples.push_back(sample_below_root(chain, lo, roots.front().second));
        // Regions between consecutive roots: the left endpoint of the next
        // isolating interval lies in the gap unless it is the previous root.
        for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
            const Rational c = roots[i + 1].first;
            if (eval(sf, c) != 0)
                samples.push_back(c);
            else
                samples.push_back(sample_below_root(chain, c, roots[i + 1].second));
        }
        // Region right of the last root ((root, hi] is empty when hi is it).
        if (eval(sf, hi) != 0) samples.push_back(hi);
    }
    for (const auto& t : samples)
        if (eval(q, t) <= 0) return false;
    return true;
}

bool nonneg_on_line(const Poly& q) {
    Poly qq = q;
    trim(qq);
    if (qq.empty()) return false;
    const Rational b = root_bound(qq);
    if (eval(qq, -b - 1) < 0 || eval(qq, b + 1) < 0) return false;
    return nonneg_on_interval(qq, -b - 1, b + 1);
}

// ---------------------------------------------------------------------------

template <class T>
T int_pow(const T& base, int p) {
    T v(1);
    for (int i = 0; i < p; ++i) v *= base;
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

CostSpec parse_cost(const std::string& text) {
    CostSpec spec;
    if (text == "abs") {
        spec.kind = CostKind::AbsDiff;
        return spec;
    }
    if (text == "neg-abs") {
        spec.kind = CostKind::NegAbsDiff;
        return spec;
    }
    if (text == "exp") {
        spec.kind = CostKind::ExpDiff;
        return spec;
    }
    if (text.rfind("pow:", 0) == 0) {
        const std::string arg = text.substr(4);
        char* end = nullptr;
        const long p = std::strtol(arg.c_str(), &end, 10);
        if (arg.empty() || *end != '\0' || p < 1)
            throw ParseError("pow: expects a positive integer exponent", 4);
        spec.kind = CostKind::PowerDiff;
        spec.power = static_cast<int>(p);
        return spec;
    }
    if (text.rfind("poly:", 0) == 0) {
        const auto parts = split(text.substr(5), ',');
        if (parts.empty() || (parts.size() == 1 && parts[0].empty()))
            throw ParseError("poly: expects a coefficient list", 5);
        spec.kind = CostKind::PolyDiff;
        std::size_t offset = 5;
        for (const auto& p : parts) {
            try {
                spec.coeffs.push_back(parse_rational(p));
            } catch (const ParseError&) {
                throw ParseError("poly: bad coefficient '" + p + "'", offset);
            }
            offset += p.size() + 1;
        }
        for (const auto& c : spec.coeffs) spec.coeffs_d.push_back(to_double(c));
        return spec;
    }
    if (text.rfind("sep:", 0) == 0) {
        if (text.size() == 4) throw ParseError("sep: expects a file path", 4);
        spec.kind = CostKind::Separable;
        spec.sep_file = text.substr(4);
        return spec;
    }
    if (text.rfind("ind:", 0) == 0) {
        const auto parts = split(text.substr(4), ',');
        if (parts.size() != 2) throw ParseError("ind: expects <s>,<t>", 4);
        spec.kind = CostKind::Indicator;
        try {
            spec.ind_s = parse_rational(parts[0]);
            spec.ind_t = parse_rational(parts[1]);
        } catch (const ParseError&) {
            throw ParseError("ind: bad parameter", 4);
        }
        return spec;
    }
    throw ParseError("unknown cost spec '" + text + "'", 0);
}

std::string format_cost(const CostSpec& spec) {
    switch (spec.kind) {
        case CostKind::AbsDiff:
            return "abs";
        case CostKind::NegAbsDiff:
            return "neg-abs";
        case CostKind::ExpDiff:
            return "exp";
        case CostKind::PowerDiff:
            return "pow:" + std::to_string(spec.power);
        case CostKind::PolyDiff: {
            std::string out = "poly:";
            for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
                if (i) out += ',';
                out += format_rational(spec.coeffs[i]);
            }
            return out;
        }
        case CostKind::Separable:
            return "sep:" + spec.sep_file;
        case CostKind::Indicator:
            return "ind:" + format_rational(spec.ind_s) + "," + format_rational(spec.ind_t);
    }
    return {};
}

double eval_cost(const CostSpec& spec, double x, double y) {
    const double d = y - x;
    switch (spec.kind) {
        case CostKind::PowerDiff:
            return int_pow(d, spec.power);
        case CostKind::AbsDiff:
            return std::abs(d);
        case CostKind::NegAbsDiff:
            return -std::abs(d);
        case CostKind::ExpDiff:
            return std::exp(d);
        case CostKind::PolyDiff: {
            double v = 0;
            for (auto it = spec.coeffs_d.rbegin(); it != spec.coeffs_d.rend(); ++it)
                v = v * d + *it;
            return v;
        }
        case CostKind::Indicator:
            return x <= to_double(spec.ind_s) ? std::abs(y - to_double(spec.ind_t)) : 0.0;
        case CostKind::Separable:
            throw UnsupportedCost("separable costs evaluate by marginal index");
    }
    return 0;
}

Rational eval_cost_exact(const CostSpec& spec, const Rational& x, const Rational& y) {
    const Rational d = y - x;
    switch (spec.kind) {
        case CostKind::PowerDiff:
            return int_pow(d, spec.power);
        case CostKind::AbsDiff:
            return abs_value(d);
        case CostKind::NegAbsDiff:
            return -abs_value(d);
        case CostKind::PolyDiff:
            return eval(spec.coeffs, d);
        case CostKind::Indicator:
            return x <= spec.ind_s ? abs_value(y - spec.ind_t) : Rational(0);
        case CostKind::ExpDiff:
            throw UnsupportedCost("exp cost is binary64 only; run in float mode");
        case CostKind::Separable:
            throw UnsupportedCost("separable costs evaluate by marginal index");
    }
    return Rational(0);
}

void validate_separable(const CostSpec& spec, std::size_t n_mu,
                        const std::vector<double>& nu_positions) {
    if (spec.phi.size() != n_mu || spec.psi.size() != nu_positions.size())
        throw UnsupportedCost("separable tables do not match marginal sizes");
    for (double v : spec.phi)
        if (v < 0) throw UnsupportedCost("separable phi must be nonnegative");
    for (double v : spec.psi)
        if (v < 0) throw UnsupportedCost("separable psi must be nonnegative");
    for (std::size_t i = 1; i < spec.phi.size(); ++i)
        if (spec.phi[i] > spec.phi[i - 1]) throw UnsupportedCost("separable phi must be nonincreasing");
    // Discrete convexity over the actual support: slopes nondecreasing.
    for (std::size_t j = 2; j < spec.psi.size(); ++j) {
        const double s1 = (spec.psi[j - 1] - spec.psi[j - 2]) /
                          (nu_positions[j - 1] - nu_positions[j - 2]);
        const double s2 = (spec.psi[j] - spec.psi[j - 1]) / (nu_positions[j] - nu_positions[j - 1]);
        if (s2 < s1 - 1e-12) throw UnsupportedCost("separable psi must be convex");
    }
}

template <class T>
std::vector<T> cost_matrix(const CostSpec& spec, const Measure<T>& mu, const Measure<T>& nu) {
    std::vector<T> xs, ys;
    xs.reserve(mu.size());
    ys.reserve(nu.size());
    for (const auto& a : mu.atoms()) xs.push_back(a.x);
    for (const auto& a : nu.atoms()) ys.push_back(a.x);
    std::vector<T> out;
    if (spec.kind == CostKind::Separable) {
        if constexpr (std::is_same_v<T, double>) {
            std::vector<double> nu_pos(ys.begin(), ys.end());
            validate_separable(spec, xs.size(), nu_pos);
            out.resize(xs.size() * ys.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j)
                    out[i * ys.size() + j] = spec.phi[i] * spec.psi[j];
            return out;
        } else {
            throw UnsupportedCost("separable costs are float-mode only");
        }
    }
    par::fill_cost_matrix(
        xs, ys, [&](const T& x, const T& y) { return eval_cost_t<T>(spec, x, y); }, out);
    return out;
}

template std::vector<double> cost_matrix<double>(const CostSpec&, const Measure<double>&,
                                                 const Measure<double>&);
template std::vector<Rational> cost_matrix<Rational>(const CostSpec&, const Measure<Rational>&,
                                                     const Measure<Rational>&);

std::vector<Rational> cost_h_coefficients(const CostSpec& spec) {
    if (spec.kind == CostKind::PowerDiff) {
        std::vector<Rational> c(static_cast<std::size_t>(spec.power) + 1, Rational(0));
        c.back() = 1;
        return c;
    }
    if (spec.kind == CostKind::PolyDiff) return spec.coeffs;
    throw UnsupportedCost("cost is not of the form h(y-x) with polynomial h");
}

namespace {
bool strict_convex_impl(const CostSpec& spec, const std::optional<std::pair<Rational, Rational>>& hull) {
    switch (spec.kind) {
        case CostKind::ExpDiff:
            return true;  // h''' = exp > 0 everywhere
        case CostKind::PowerDiff:
        case CostKind::PolyDiff: {
            Poly h = cost_h_coefficients(spec);
            const Poly q = derivative(derivative(derivative(h)));
            if (hull) return nonneg_on_interval(q, hull->first, hull->second);
            return nonneg_on_line(q);
        }
        default:
            throw UnsupportedCost("strict_convex_derivative: cost has no differentiable h");
    }
}
}  // namespace

bool strict_convex_derivative(const CostSpec& spec) { return strict_convex_impl(spec, std::nullopt); }

bool strict_convex_derivative(const CostSpec& spec, const Rational& hull_lo,
                              const Rational& hull_hi) {
    return strict_convex_impl(spec, std::pair{hull_lo, hull_hi});
}

CostSpec shifted_cost(const CostSpec& spec, const Rational& p, const Rational& q) {
    std::vector<Rational> c = cost_h_coefficients(spec);
    if (c.size() < 3) c.resize(3, Rational(0));
    c[1] += q;
    c[2] += p;
    CostSpec out;
    out.kind = CostKind::PolyDiff;
    out.coeffs = std::move(c);
    for (const auto& v : out.coeffs) out.coeffs_d.push_back(to_double(v));
    return out;
}

}  // namespace mot
