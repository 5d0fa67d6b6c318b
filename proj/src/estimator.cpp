#include "vwa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vwa/errors.hpp"
#include "vwa/summation.hpp"

namespace vwa {

namespace {

void require_finite(const std::vector<double>& xs, const char* who) {
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw DomainError(std::string(who) + ": observations must be finite");
    }
  }
}

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(who) + ": observations must be finite");
  }
}

}  // namespace

Estimate weighted_mean(const std::vector<double>& values,
                       const std::vector<double>& weights) {
  if (values.size() != weights.size()) {
    throw DomainError("weighted_mean: values and weights differ in length");
  }
  CompensatedSum num, den;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t active = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weights[i];
    num.add(w * values[i]);
    den.add(w);
    if (w > 0.0) {
      ++active;
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
  }
  Estimate est;
  est.weight_sum = den.value();
  est.effective_count = active;
  if (active == 0 || !(est.weight_sum > 0.0)) {
    est.value = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.value = std::clamp(num.value() / est.weight_sum, lo, hi);
  return est;
}

Estimate vwa(const NeighborhoodSample& sample, const KernelSpec& kernel) {
  if (sample.neighbors.empty()) {
    throw DomainError("vwa: at least one neighbor is required");
  }
  require_finite(sample.neighbors, "vwa");
  require_finite(sample.current, "vwa");

  std::vector<double> weights(sample.neighbors.size());
  for (std::size_t i = 0; i < sample.neighbors.size(); ++i) {
    weights[i] = evaluate(kernel, sample.neighbors[i] - sample.current);
  }
  Estimate est = weighted_mean(sample.neighbors, weights);
  if (est.effective_count == 0 || !(est.weight_sum > 0.0)) {
    throw DegenerateNeighborhoodError(
        "vwa: every neighbor weight is zero at current=" +
            std::to_string(sample.current),
        sample.current);
  }
  return est;
}

double leave_one_out(const NeighborhoodSample& sample, const KernelSpec& kernel,
                     std::size_t index) {
  const std::size_t m = sample.neighbors.size();
  if (index >= m) {
    throw DomainError("leave_one_out: index out of range");
  }
  if (m < 2) {
    throw DomainError("leave_one_out: need at least two neighbors");
  }
  require_finite(sample.neighbors, "leave_one_out");
  require_finite(sample.current, "leave_one_out");

  CompensatedSum num, den;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t active = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == index) continue;
    const double y = sample.neighbors[j];
    const double w = evaluate(kernel, y - sample.current);
    num.add(w * y);
    den.add(w);
    if (w > 0.0) {
      ++active;
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (active == 0 || !(den.value() > 0.0)) {
    throw DegenerateNeighborhoodError(
        "leave_one_out: every remaining weight is zero at current=" +
            std::to_string(sample.current),
        sample.current, index);
  }
  return std::clamp(num.value() / den.value(), lo, hi);
}

Reconstruction reconstruct(const std::vector<double>& series,
                           const KernelSpec& kernel) {
  const std::size_t n = series.size();
  if (n < 2) {
    throw DomainError("reconstruct: series must hold at least two points");
  }
  require_finite(series, "reconstruct");

  Reconstruction out;
  out.values.resize(n);
  out.degenerate.assign(n, false);
  std::vector<double> neighbors(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) neighbors[k++] = series[j];
    }
    try {
      out.values[i] = vwa({neighbors, series[i]}, kernel).value;
    } catch (const DegenerateNeighborhoodError&) {
      out.values[i] = series[i];
      out.degenerate[i] = true;
    }
  }
  return out;
}

FunctionalEstimates empirical_functionals(const std::vector<double>& data,
                                          const KernelSpec& kernel, double y) {
  const std::size_t n = data.size();
  if (n < 2) {
    throw DomainError("empirical_functionals: need at least two observations");
  }
  require_finite(data, "empirical_functionals");
  require_finite(y, "empirical_functionals");

  std::vector<double> k(n);
  CompensatedSum sum_k, sum_ky;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = evaluate(kernel, data[i] - y);
    sum_k.add(k[i]);
    sum_ky.add(k[i] * data[i]);
  }
  FunctionalEstimates f;
  f.nu = sum_k.value() / static_cast<double>(n);
  f.mu = sum_ky.value() / static_cast<double>(n);
  if (!(f.nu > 0.0)) {
    throw DegenerateNeighborhoodError(
        "empirical_functionals: nu_hat is zero at y=" + std::to_string(y), y);
  }
  f.theta = f.mu / f.nu;

  // xi_i is the linearization of theta_hat around (mu, nu); its sample
  // mean is identically zero, so the variance reduces to a mean square.
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) {
    xi[i] = (k[i] * data[i] - f.mu) / f.nu - f.theta * (k[i] - f.nu) / f.nu;
  }
  f.sigma_xi_sq = sample_variance(xi);
  return f;
}

FixpointResult fixpoint_theta(const std::vector<double>& data,
                              const KernelSpec& kernel, double y0, double tol,
                              int max_iter) {
  if (data.size() < 2) {
    throw DomainError("fixpoint_theta: need at least two observations");
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw DomainError("fixpoint_theta: tol and max_iter must be positive");
  }
  require_finite(data, "fixpoint_theta");
  require_finite(y0, "fixpoint_theta");

  FixpointResult res;
  res.value = y0;
  for (int t = 0; t < max_iter; ++t) {
    const Estimate step = vwa({data, res.value}, kernel);
    ++res.iterations;
    const double prev = res.value;
    res.value = step.value;
    if (std::abs(res.value - prev) <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace vwa
