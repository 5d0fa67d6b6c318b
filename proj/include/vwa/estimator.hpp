#pragma once

#include <cstddef>
#include <vector>

#include "vwa/kernel.hpp"

namespace vwa {

// One evaluation point: the observation being denoised plus everything
// else in its window. current is never a member of neighbors.
struct NeighborhoodSample {
  std::vector<double> neighbors;
  double current = 0.0;
};

struct Estimate {
  double value = 0.0;        // the weighted average itself
  double weight_sum = 0.0;   // total kernel mass behind it
  std::size_t effective_count = 0;  // neighbors with strictly positive weight
};

// Plug-in estimates of the population functionals at a point y:
// mu(y) = E[k(Y-y) Y], nu(y) = E[k(Y-y)], theta = mu/nu, and the
// variance of the linearization of theta_hat.
struct FunctionalEstimates {
  double mu = 0.0;
  double nu = 0.0;
  double theta = 0.0;
  double sigma_xi_sq = 0.0;
};

struct FixpointResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct Reconstruction {
  std::vector<double> values;
  // true where the neighborhood was degenerate and values[i] fell back
  // to the raw observation
  std::vector<bool> degenerate;
};

// Core reduction: sum(w_i * v_i) / sum(w_i), accumulated with compensated
// summation in index order and clamped into the hull of the positively
// weighted values (a weighted mean cannot leave it; clamping removes the
// last-ulp rounding spill). If no weight is positive, value is NaN and
// effective_count is 0; callers decide how to report that.
Estimate weighted_mean(const std::vector<double>& values,
                       const std::vector<double>& weights);

// Vertically weighted average of the neighbors, weighted by their kernel
// distance to the current observation:
//   sum_{i<=m} Y_i k(Y_i - Y_n) / sum_{i<=m} k(Y_i - Y_n).
// Throws DegenerateNeighborhoodError when every weight is zero.
Estimate vwa(const NeighborhoodSample& sample, const KernelSpec& kernel);

// vwa recomputed with neighbor `index` deleted (current unchanged).
double leave_one_out(const NeighborhoodSample& sample, const KernelSpec& kernel,
                     std::size_t index);

// Denoises a whole series: element i is the vwa at current = Y_i with all
// other n-1 points as neighbors. Degenerate points fall back to Y_i and
// are flagged.
Reconstruction reconstruct(const std::vector<double>& series,
                           const KernelSpec& kernel);

// Sample analogues of mu, nu, theta at y, plus sigma_xi_sq: the sample
// variance (denominator n-1) of the linearization
//   xi_i = [k(Y_i-y) Y_i - mu]/nu - theta [k(Y_i-y) - nu]/nu.
FunctionalEstimates empirical_functionals(const std::vector<double>& data,
                                          const KernelSpec& kernel, double y);

// Picard iteration for the fix point x = sum Y_i k(Y_i-x) / sum k(Y_i-x),
// started from y0. Non-convergence is reported via the flag, not thrown.
FixpointResult fixpoint_theta(const std::vector<double>& data,
                              const KernelSpec& kernel, double y0,
                              double tol = 1e-10, int max_iter = 200);

}  // namespace vwa
