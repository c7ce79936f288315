#pragma once

#include "mot/measure.hpp"

namespace mot {

// Inverse standard normal CDF. Acklam's rational approximation (documented
// constant set, |relative error| < 1.15e-9) followed by one Halley step,
// which brings the error to ~1e-13. Domain (0, 1).
double inverse_normal_cdf(double p);

// Standard normal pdf / cdf helpers.
double normal_pdf(double z);
double normal_cdf(double z);

// Equal-mass quantization of N(mean, sd^2): n atoms of mass 1/n, each placed
// at the conditional mean of its quantile cell ((i-1)/n, i/n]. Positions are
// mirror-symmetrized about the mean so that the first moment is exactly
// `mean` and dilations of quantized Gaussians stay exact. sd <= 0 throws
// DomainError.
MeasureD gaussian_quantize(double mean, double sd, std::size_t n);

// Analytic potential of N(mean, sd^2):
//   u(x) = sd * (2 phi(z) + z (2 Phi(z) - 1)),  z = (x - mean)/sd.
// Used by tests as the dominating envelope for quantized potentials.
double gaussian_potential(double mean, double sd, double x);

}  // namespace mot
