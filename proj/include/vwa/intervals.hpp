#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vwa/errors.hpp"
#include "vwa/estimator.hpp"
#include "vwa/normal.hpp"
#include "vwa/rng.hpp"

namespace vwa {

struct ConfidenceInterval {
  double center = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;  // nominal confidence 1 - alpha
};

// Jackknife-studentized interval for the conditional mean of the
// estimator given the current observation:
//   mu_hat +- qnorm(1 - alpha/2) * sigma_hat_n.
ConfidenceInterval conditional_fixed_sample_ci(const NeighborhoodSample& sample,
                                               const KernelSpec& kernel,
                                               double alpha);

// Unconditional interval: center treats the last series element as the
// current observation, spread comes from the all-positions bootstrap
// variance (reps replications on substreams of seed).
ConfidenceInterval unconditional_fixed_sample_ci(
    const std::vector<double>& series, const KernelSpec& kernel, double alpha,
    int reps, const RngSeed& seed);

// First-stage size: n0 = max{ floor(qnorm(1 - alpha/2) / d), 3 }.
int initial_sample_size(double d, double alpha);

// Final size of the two-stage procedure:
//   N = max{ n0, floor(sigma_tilde_sq * qnorm(1 - alpha/2)^2 / d^2 + 2) }.
long long final_sample_size(double sigma_tilde_sq, double d, double alpha,
                            int n0);

// Same rule with a bootstrap-t quantile in place of the normal one.
long long bootstrap_final_sample_size(double sigma_tilde_sq, double t_quantile,
                                      double d, int n0);

// One observation at a time; std::nullopt signals exhaustion. run_two_stage
// pulls exactly the observations it needs and nothing more.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::optional<double> next() = 0;
};

class VectorSource : public SampleSource {
 public:
  explicit VectorSource(std::vector<double> values)
      : values_(std::move(values)) {}
  std::optional<double> next() override {
    if (pos_ >= values_.size()) return std::nullopt;
    return values_[pos_++];
  }

 private:
  std::vector<double> values_;
  std::size_t pos_ = 0;
};

// Inexhaustible source backed by a deterministic generator.
class GeneratorSource : public SampleSource {
 public:
  GeneratorSource(std::function<double(Rng&)> draw, const RngSeed& seed)
      : draw_(std::move(draw)), rng_(seed) {}
  std::optional<double> next() override { return draw_(rng_); }

 private:
  std::function<double(Rng&)> draw_;
  Rng rng_;
};

enum class TwoStageVariant { kClt, kBootstrap };

struct TwoStageOptions {
  TwoStageVariant variant = TwoStageVariant::kClt;
  int boot_reps = 2000;
  bool smooth = true;
  // Simulation tables with a pinned first stage bypass the n0 rule.
  std::optional<int> n0_override;
  // Testing seam: replaces the bootstrap-t quantile so the bootstrap
  // variant can be checked against the clt variant exactly.
  std::optional<double> t_quantile_override;
};

struct TwoStageRun {
  int n0 = 0;
  double sigma_tilde_sq = 0.0;
  double quantile = 0.0;  // normal or bootstrap-t, whichever sized N
  long long n_final = 0;
  double center = 0.0;
  ConfidenceInterval interval{};
  TwoStageVariant variant = TwoStageVariant::kClt;
  int boot_dropped = 0;
};

// The source ran dry before the procedure finished. Carries whatever part
// of the run had been completed when it happened.
class InsufficientDataError : public Error {
 public:
  InsufficientDataError(const std::string& what, TwoStageRun partial)
      : Error(what), partial_(std::move(partial)) {}
  const TwoStageRun& partial() const { return partial_; }

 private:
  TwoStageRun partial_;
};

// Fixed-width interval [mu_hat_N - d, mu_hat_N + d] around the current
// observation. Stage one draws n0 - 1 neighbors and jackknifes them for
// sigma_tilde_sq; stage two extends the sample to N - 1 neighbors (the
// first stage is reused; N <= n0 draws nothing further) and re-estimates.
// seed feeds only the bootstrap variant's resampling.
TwoStageRun run_two_stage(SampleSource& source, double current,
                          const KernelSpec& kernel, double d, double alpha,
                          const TwoStageOptions& options, const RngSeed& seed);

}  // namespace vwa
