#pragma once

#include <string>

namespace vwa {

enum class KernelFamily { kGaussian, kUniform };

// Vertical weighting kernel k(z) = k_base(z / sigma) + ridge.
//
// Gaussian: k_base is the standard normal density. Deliberately not
// renormalized by 1/sigma; the estimator is invariant to constant weight
// factors, and keeping k(0) = phi(0) makes the ridge offset comparable
// across scales.
// Uniform: k_base is the indicator of the closed interval [-1, 1], so a
// point exactly sigma away still counts.
struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  double sigma = 1.0;
  double ridge = 0.0;

  KernelSpec() = default;
  KernelSpec(KernelFamily family, double sigma, double ridge = 0.0);
};

// Weight of a vertical distance z. Throws DomainError for non-finite z.
double evaluate(const KernelSpec& kernel, double z);

std::string to_string(KernelFamily family);

}  // namespace vwa
