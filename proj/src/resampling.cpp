#include "vwa/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vwa/errors.hpp"
#include "vwa/summation.hpp"

namespace vwa {

JackknifeResult jackknife(const NeighborhoodSample& sample,
                          const KernelSpec& kernel) {
  const std::size_t m = sample.neighbors.size();
  if (m < 2) {
    throw DomainError("jackknife: need at least two neighbors");
  }

  // Weights depend only on the fixed current observation, so evaluate
  // them once; each leave-one-out pass just skips index i. The skip loop
  // accumulates in the same index order as leave_one_out, so loo_values
  // match that function bit for bit.
  std::vector<double> weights(m);
  for (std::size_t j = 0; j < m; ++j) {
    weights[j] = evaluate(kernel, sample.neighbors[j] - sample.current);
  }

  JackknifeResult res;
  res.loo_values.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    CompensatedSum num, den;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t active = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double y = sample.neighbors[j];
      num.add(weights[j] * y);
      den.add(weights[j]);
      if (weights[j] > 0.0) {
        ++active;
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    if (active == 0 || !(den.value() > 0.0)) {
      throw DegenerateNeighborhoodError(
          "jackknife: deleting neighbor " + std::to_string(i) +
              " leaves zero total weight",
          sample.current, i);
    }
    res.loo_values[i] = std::clamp(num.value() / den.value(), lo, hi);
  }

  const double mean =
      compensated_total(res.loo_values) / static_cast<double>(m);
  CompensatedSum ss;
  for (double v : res.loo_values) {
    const double d = v - mean;
    ss.add(d * d);
  }
  const double md = static_cast<double>(m);
  res.var_hat = (md - 1.0) / md * ss.value();
  res.var_asym = md * res.var_hat;
  return res;
}

std::vector<double> resample_empirical(const std::vector<double>& data,
                                       std::size_t size, const RngSeed& seed) {
  if (data.empty()) {
    throw DomainError("resample_empirical: data must be non-empty");
  }
  Rng rng(seed);
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    out[i] = data[rng.bounded(data.size())];
  }
  return out;
}

std::vector<double> smooth_resample(const std::vector<double>& data,
                                    std::size_t size, double bandwidth,
                                    const RngSeed& seed) {
  if (data.empty()) {
    throw DomainError("smooth_resample: data must be non-empty");
  }
  if (!(bandwidth >= 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("smooth_resample: bandwidth must be finite and >= 0");
  }
  if (bandwidth == 0.0) {
    return resample_empirical(data, size, seed);
  }
  Rng rng(seed);
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double base = data[rng.bounded(data.size())];
    out[i] = base + bandwidth * rng.normal();
  }
  return out;
}

double normal_reference_bandwidth(const std::vector<double>& data) {
  if (data.size() < 2) {
    throw DomainError(
        "normal_reference_bandwidth: need at least two observations");
  }
  const double s = std::sqrt(sample_variance(data));
  return 1.06 * s * std::pow(static_cast<double>(data.size()), -0.2);
}

BootstrapVariance bootstrap_variance_unconditional(
    const std::vector<double>& series, const KernelSpec& kernel, int reps,
    const RngSeed& seed) {
  const std::size_t n = series.size();
  if (n < 2) {
    throw DomainError(
        "bootstrap_variance_unconditional: series must hold at least two "
        "points");
  }
  if (reps < 2) {
    throw DomainError("bootstrap_variance_unconditional: need reps >= 2");
  }

  BootstrapVariance out;
  std::vector<double> estimates;
  estimates.reserve(static_cast<std::size_t>(reps));
  NeighborhoodSample replicate;
  replicate.neighbors.resize(n - 1);
  for (int b = 0; b < reps; ++b) {
    Rng rng(substream(seed, static_cast<std::uint64_t>(b)));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      replicate.neighbors[i] = series[rng.bounded(n)];
    }
    replicate.current = series[rng.bounded(n)];
    try {
      estimates.push_back(vwa(replicate, kernel).value);
    } catch (const DegenerateNeighborhoodError&) {
      ++out.dropped;
    }
  }
  out.valid = static_cast<int>(estimates.size());
  if (out.valid < 2) {
    throw ResamplingError(
        "bootstrap_variance_unconditional: fewer than two usable "
        "replications");
  }
  out.variance = sample_variance(estimates);
  return out;
}

double quantile_order_statistic(std::vector<double> replicates, double level) {
  if (replicates.empty()) {
    throw DomainError("quantile_order_statistic: empty replicate set");
  }
  if (!(level > 0.0) || !(level <= 1.0)) {
    throw DomainError("quantile_order_statistic: level must be in (0, 1]");
  }
  const double b = static_cast<double>(replicates.size());
  // ceil(b * level), shielded against the product landing one ulp above
  // an integer it mathematically equals
  auto rank = static_cast<std::size_t>(std::ceil(b * level - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, replicates.size());
  std::nth_element(replicates.begin(), replicates.begin() + (rank - 1),
                   replicates.end());
  return replicates[rank - 1];
}

BootstrapTQuantile bootstrap_t_quantile(const NeighborhoodSample& first_stage,
                                        const KernelSpec& kernel, double level,
                                        int reps, int n_star, bool smooth,
                                        const RngSeed& seed) {
  if (reps < 1) {
    throw DomainError("bootstrap_t_quantile: need reps >= 1");
  }
  if (n_star < 2) {
    throw DomainError("bootstrap_t_quantile: need n_star >= 2");
  }
  if (!(level > 0.0) || !(level < 1.0)) {
    throw DomainError("bootstrap_t_quantile: level must be in (0, 1)");
  }

  const double center = vwa(first_stage, kernel).value;
  const double sigma_tilde =
      std::sqrt(jackknife(first_stage, kernel).var_asym);
  if (!(sigma_tilde > 0.0)) {
    throw DegenerateScaleError(
        "bootstrap_t_quantile: first-stage jackknife scale is zero");
  }

  std::vector<double> pool(first_stage.neighbors);
  pool.push_back(first_stage.current);
  const double bandwidth = smooth ? normal_reference_bandwidth(pool) : 0.0;

  const std::size_t m_star = static_cast<std::size_t>(n_star) - 1;
  const double root_m = std::sqrt(static_cast<double>(m_star));

  BootstrapTQuantile out;
  std::vector<double> t_reps;
  t_reps.reserve(static_cast<std::size_t>(reps));
  NeighborhoodSample replicate;
  replicate.current = first_stage.current;
  for (int b = 0; b < reps; ++b) {
    const RngSeed sub = substream(seed, static_cast<std::uint64_t>(b));
    replicate.neighbors = smooth ? smooth_resample(pool, m_star, bandwidth, sub)
                                 : resample_empirical(pool, m_star, sub);
    try {
      const double est = vwa(replicate, kernel).value;
      t_reps.push_back(root_m * (est - center) / sigma_tilde);
    } catch (const DegenerateNeighborhoodError&) {
      ++out.dropped;
    }
  }
  if (t_reps.empty()) {
    throw ResamplingError(
        "bootstrap_t_quantile: every replication was degenerate");
  }
  out.value = quantile_order_statistic(std::move(t_reps), level);
  return out;
}

}  // namespace vwa
