#pragma once

namespace vwa {

// Inverse standard normal CDF (Wichura's AS 241, PPND16 variant).
// Absolute error below 1e-15 for p in [1e-12, 1 - 1e-12].
// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

// Standard normal CDF via erfc; accurate far into both tails.
double normal_cdf(double z);

// Standard normal density.
double normal_pdf(double z);

}  // namespace vwa
