#pragma once

#include <cstdint>
#include <vector>

#include "vwa/estimator.hpp"
#include "vwa/rng.hpp"

namespace vwa {

// Delete-one jackknife of the vertically weighted average.
//   var_hat  = ((m-1)/m) * sum_i (loo_i - mean(loo))^2,
//   var_asym = m * var_hat,
// where m is the neighbor count. var_hat estimates the variance of the
// estimate itself; var_asym the asymptotic (root-n scaled) variance.
struct JackknifeResult {
  double var_hat = 0.0;
  double var_asym = 0.0;
  std::vector<double> loo_values;
};

JackknifeResult jackknife(const NeighborhoodSample& sample,
                          const KernelSpec& kernel);

// size i.i.d. draws from the empirical distribution of data.
std::vector<double> resample_empirical(const std::vector<double>& data,
                                       std::size_t size, const RngSeed& seed);

// Empirical draw plus N(0, bandwidth^2) noise per element. bandwidth 0
// degenerates to resample_empirical with the same seed, draw for draw.
std::vector<double> smooth_resample(const std::vector<double>& data,
                                    std::size_t size, double bandwidth,
                                    const RngSeed& seed);

// Normal-reference rule 1.06 * s * n^(-1/5) with s the sample standard
// deviation (denominator n-1). Constant data gives 0.
double normal_reference_bandwidth(const std::vector<double>& data);

struct BootstrapVariance {
  double variance = 0.0;
  int dropped = 0;  // degenerate replications, discarded rather than retried
  int valid = 0;
};

// Bootstrap variance of the estimator with nothing held fixed: each
// replication redraws all n positions from the empirical distribution and
// treats the last draw as the current observation. Replicate b runs on
// substream b of seed, so a parallel driver reproduces the serial result.
BootstrapVariance bootstrap_variance_unconditional(
    const std::vector<double>& series, const KernelSpec& kernel, int reps,
    const RngSeed& seed);

// 1-based order statistic at rank ceil(size * level) of a replicate set.
// The rank computation absorbs binary-representation spill (0.95 * 2000
// must select rank 1900, not 1901).
double quantile_order_statistic(std::vector<double> replicates, double level);

struct BootstrapTQuantile {
  double value = 0.0;
  int dropped = 0;
};

// Studentized bootstrap quantile for the two-stage procedure. Resamples
// m_star = n_star - 1 values per replication from the first-stage pool
// {neighbors, current} (empirical, or smoothed with the normal-reference
// bandwidth of the pool), keeps the current observation fixed as the
// evaluation point, forms
//   t_b = sqrt(m_star) * (mu_hat_star_b - mu_hat_n0) / sigma_tilde_n0
// with sigma_tilde_n0^2 the jackknife var_asym of the first stage, and
// returns the order statistic at rank ceil(level * valid replications).
BootstrapTQuantile bootstrap_t_quantile(const NeighborhoodSample& first_stage,
                                        const KernelSpec& kernel, double level,
                                        int reps, int n_star, bool smooth,
                                        const RngSeed& seed);

}  // namespace vwa
