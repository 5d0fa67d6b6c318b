#include "vwa/kernel.hpp"

#include <cmath>

#include "vwa/errors.hpp"

namespace vwa {

KernelSpec::KernelSpec(KernelFamily family, double sigma, double ridge)
    : family(family), sigma(sigma), ridge(ridge) {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw DomainError("KernelSpec: sigma must be finite and positive");
  }
  if (!std::isfinite(ridge) || ridge < 0.0) {
    throw DomainError("KernelSpec: ridge must be finite and non-negative");
  }
}

double evaluate(const KernelSpec& kernel, double z) {
  if (!std::isfinite(z)) {
    throw DomainError("evaluate: kernel argument must be finite");
  }
  const double u = z / kernel.sigma;
  double base;
  switch (kernel.family) {
    case KernelFamily::kGaussian:
      // standard normal density of the scaled distance
      base = std::exp(-0.5 * u * u) * 0.3989422804014326779;
      break;
    case KernelFamily::kUniform:
      base = (u >= -1.0 && u <= 1.0) ? 1.0 : 0.0;
      break;
    default:
      throw DomainError("evaluate: unknown kernel family");
  }
  return base + kernel.ridge;
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::kGaussian ? "gaussian" : "uniform";
}

}  // namespace vwa
