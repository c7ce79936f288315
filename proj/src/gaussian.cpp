#include "mot/gaussian.hpp"

#include <cmath>

#include "mot/errors.hpp"

namespace mot {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

// Acklam's coefficients for the inverse normal CDF.
constexpr double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                         -2.759285104469687e+02, 1.383577518672690e+02,
                         -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                         -1.556989798598866e+02, 6.680131188771972e+01,
                         -1.328068155288572e+01};
constexpr double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                         -2.400758277161838e+00, -2.549732539343734e+00,
                         4.374664141464968e+00,  2.938163982698783e+00};
constexpr double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                         2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kPLow = 0.02425;

double acklam(double p) {
    if (p < kPLow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
               ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }
    if (p > 1.0 - kPLow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
               ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
           (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
}

}  // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw DomainError("inverse_normal_cdf: p outside (0,1)");
    double x = acklam(p);
    // One Halley step on Phi(x) - p = 0.
    const double e = normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

MeasureD gaussian_quantize(double mean, double sd, std::size_t n) {
    if (!(sd > 0.0)) throw DomainError("gaussian_quantize: sd must be positive");
    if (n == 0) throw DomainError("gaussian_quantize: n must be >= 1");

    // Standardized conditional means over cells ((i-1)/n, i/n]:
    //   E[Z | z_{i-1} < Z <= z_i] = (phi(z_{i-1}) - phi(z_i)) * n.
    // Only the left half is computed; the right half is its mirror image so
    // the quantization is exactly symmetric (first moment exactly `mean`,
    // dilations map atom grids onto each other exactly).
    std::vector<double> z(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double lo = (i == 0) ? 0.0 : normal_pdf(inverse_normal_cdf(double(i) / double(n)));
        const double hi = normal_pdf(inverse_normal_cdf(double(i + 1) / double(n)));
        z[i] = (lo - hi) * double(n);
    }
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(n);
    const double w = 1.0 / double(n);
    for (std::size_t i = 0; i < n / 2; ++i) pairs.emplace_back(mean + sd * z[i], w);
    if (n % 2 == 1) pairs.emplace_back(mean, w);
    for (std::size_t i = n / 2; i-- > 0;) pairs.emplace_back(mean - sd * z[i], w);
    return MeasureD::from_pairs(std::move(pairs));
}

double gaussian_potential(double mean, double sd, double x) {
    const double z = (x - mean) / sd;
    return sd * (2.0 * normal_pdf(z) + z * (2.0 * normal_cdf(z) - 1.0));
}

}  // namespace mot
