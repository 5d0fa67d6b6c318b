#include "vwa/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "vwa/resampling.hpp"

namespace vwa {

namespace {

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw DomainError(std::string(who) + ": alpha must be in (0, 1)");
  }
}

void check_width(double d, const char* who) {
  if (!std::isfinite(d) || !(d > 0.0)) {
    throw DomainError(std::string(who) + ": d must be finite and positive");
  }
}

long long floor_size(double x, const char* who) {
  if (!std::isfinite(x) || x > 9.0e15) {
    throw DomainError(std::string(who) + ": sample size overflows");
  }
  return static_cast<long long>(std::floor(x));
}

}  // namespace

ConfidenceInterval conditional_fixed_sample_ci(const NeighborhoodSample& sample,
                                               const KernelSpec& kernel,
                                               double alpha) {
  check_alpha(alpha, "conditional_fixed_sample_ci");
  const double center = vwa(sample, kernel).value;
  const double sd = std::sqrt(jackknife(sample, kernel).var_hat);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return {center, center - z * sd, center + z * sd, 1.0 - alpha};
}

ConfidenceInterval unconditional_fixed_sample_ci(
    const std::vector<double>& series, const KernelSpec& kernel, double alpha,
    int reps, const RngSeed& seed) {
  check_alpha(alpha, "unconditional_fixed_sample_ci");
  if (series.size() < 2) {
    throw DomainError(
        "unconditional_fixed_sample_ci: series must hold at least two points");
  }
  NeighborhoodSample sample;
  sample.neighbors.assign(series.begin(), series.end() - 1);
  sample.current = series.back();
  const double center = vwa(sample, kernel).value;
  const double sd = std::sqrt(
      bootstrap_variance_unconditional(series, kernel, reps, seed).variance);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return {center, center - z * sd, center + z * sd, 1.0 - alpha};
}

int initial_sample_size(double d, double alpha) {
  check_width(d, "initial_sample_size");
  check_alpha(alpha, "initial_sample_size");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const long long by_rule = floor_size(z / d, "initial_sample_size");
  return static_cast<int>(std::max<long long>(by_rule, 3));
}

long long final_sample_size(double sigma_tilde_sq, double d, double alpha,
                            int n0) {
  check_width(d, "final_sample_size");
  check_alpha(alpha, "final_sample_size");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return bootstrap_final_sample_size(sigma_tilde_sq, z, d, n0);
}

long long bootstrap_final_sample_size(double sigma_tilde_sq, double t_quantile,
                                      double d, int n0) {
  check_width(d, "bootstrap_final_sample_size");
  if (!(sigma_tilde_sq >= 0.0) || !std::isfinite(sigma_tilde_sq)) {
    throw DomainError(
        "bootstrap_final_sample_size: sigma_tilde_sq must be finite and >= 0");
  }
  if (!std::isfinite(t_quantile)) {
    throw DomainError("bootstrap_final_sample_size: quantile must be finite");
  }
  // the +2 rides inside the floor
  const long long sized = floor_size(
      sigma_tilde_sq * t_quantile * t_quantile / (d * d) + 2.0,
      "bootstrap_final_sample_size");
  return std::max<long long>(sized, n0);
}

TwoStageRun run_two_stage(SampleSource& source, double current,
                          const KernelSpec& kernel, double d, double alpha,
                          const TwoStageOptions& options, const RngSeed& seed) {
  check_width(d, "run_two_stage");
  check_alpha(alpha, "run_two_stage");
  if (!std::isfinite(current)) {
    throw DomainError("run_two_stage: current observation must be finite");
  }

  TwoStageRun run;
  run.variant = options.variant;
  if (options.n0_override) {
    if (*options.n0_override < 3) {
      throw DomainError("run_two_stage: n0 override must be at least 3");
    }
    run.n0 = *options.n0_override;
  } else {
    run.n0 = initial_sample_size(d, alpha);
  }

  NeighborhoodSample sample;
  sample.current = current;
  sample.neighbors.reserve(static_cast<std::size_t>(run.n0) - 1);
  for (int i = 0; i + 1 < run.n0; ++i) {
    const auto obs = source.next();
    if (!obs) {
      throw InsufficientDataError(
          "run_two_stage: source exhausted during the first stage", run);
    }
    sample.neighbors.push_back(*obs);
  }

  run.sigma_tilde_sq = jackknife(sample, kernel).var_asym;

  if (options.variant == TwoStageVariant::kBootstrap) {
    if (options.t_quantile_override) {
      run.quantile = *options.t_quantile_override;
    } else {
      // resample size rule: n_star = floor(min(1.5 * n0, 50))
      const int n_star =
          static_cast<int>(std::floor(std::min(1.5 * run.n0, 50.0)));
      const BootstrapTQuantile t = bootstrap_t_quantile(
          sample, kernel, 1.0 - alpha / 2.0, options.boot_reps, n_star,
          options.smooth, seed);
      run.quantile = t.value;
      run.boot_dropped = t.dropped;
    }
    run.n_final =
        bootstrap_final_sample_size(run.sigma_tilde_sq, run.quantile, d, run.n0);
  } else {
    run.quantile = normal_quantile(1.0 - alpha / 2.0);
    run.n_final = final_sample_size(run.sigma_tilde_sq, d, alpha, run.n0);
  }

  // second stage reuses the first; only the shortfall is drawn
  for (long long i = run.n0; i < run.n_final; ++i) {
    const auto obs = source.next();
    if (!obs) {
      throw InsufficientDataError(
          "run_two_stage: source exhausted during the second stage", run);
    }
    sample.neighbors.push_back(*obs);
  }

  run.center = vwa(sample, kernel).value;
  run.interval = {run.center, run.center - d, run.center + d, 1.0 - alpha};
  return run;
}

}  // namespace vwa
