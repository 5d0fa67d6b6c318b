#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vwa/intervals.hpp"
#include "vwa/kernel.hpp"
#include "vwa/rng.hpp"

namespace vwa {

// Error law of the simulated observations. All laws are standardized to
// unit variance before law_scale and law_shift apply, so F has mean
// law_shift and standard deviation law_scale. law_scale = 0 collapses F
// to a point mass at law_shift.
enum class ErrorLaw {
  kStandardNormal,
  kShiftedNormal,
  kLaplace,
  kUniformSymmetric,
};

struct SimConfig {
  ErrorLaw law = ErrorLaw::kStandardNormal;
  double law_shift = 0.0;
  double law_scale = 1.0;

  // Kernel for the fixed-width tables; the fixed-sample tables override
  // sigma cell by cell from sigma_values.
  KernelSpec kernel{KernelFamily::kGaussian, 0.6, 0.0};

  std::vector<double> sigma_values{0.4, 0.8};
  std::vector<int> n_values{20, 50};
  std::vector<double> levels{0.95};
  std::vector<double> q_values{0.05, 0.5, 0.95};
  double d = 0.2;

  int runs = 10000;
  int boot_reps = 1000;
  bool smooth_bootstrap = true;
  std::uint64_t oracle_size = 200000;
  RngSeed seed{};
  int threads = 1;  // 0 picks hardware concurrency
  bool real_ci_column = true;
};

struct CoverageRow {
  double sigma = 0.0;
  double n_or_d = 0.0;
  double level = 0.0;
  // "q=<value>" for pinned-quantile cells, "real" for the random-current
  // column, "marginal" for unconditional cells
  std::string q_label;
  double q = 0.0;
  double coverage = 0.0;
  double mc_se = 0.0;
  bool has_mean_n = false;
  double mean_n = 0.0;
  long runs = 0;
  long dropped = 0;
};

struct CoverageReport {
  std::string title;
  std::vector<std::string> notes;
  std::vector<CoverageRow> rows;

  // 17 significant digits per numeric cell, '#'-prefixed note header
  std::string to_csv() const;
  // aligned table, 3-4 significant digits
  std::string to_text() const;
};

// Monte Carlo estimate of E[ mu_hat_n | current = y ]: averages the
// estimator over fresh neighbor sets of size n-1 until oracle_size draws
// are consumed. Values are cached on disk under the directory named by
// VWA_ORACLE_CACHE_DIR (a temp-dir default otherwise), keyed by a content
// hash of every input.
double oracle_conditional_mean(double y, int n, const KernelSpec& kernel,
                               const SimConfig& config);

// Monte Carlo estimate of theta(y) = E[k(Y-y) Y] / E[k(Y-y)] over
// oracle_size draws (ratio of means, single pass). Cached like
// oracle_conditional_mean.
double oracle_theta(double y, const KernelSpec& kernel,
                    const SimConfig& config);

struct SdProfilePoint {
  double y = 0.0;
  double sd = 0.0;
  double se = 0.0;  // normal-theory MC error of sd: sd / sqrt(2 (R-1))
};

// Sampling standard deviation of mu_hat_n(y) on a grid of evaluation
// points, config.runs replications per point.
std::vector<SdProfilePoint> sd_profile(const SimConfig& config, int n,
                                       double y_lo, double y_hi, double step);

// Coverage of the conditional fixed-sample interval with current pinned to
// the law quantile q (plus one "real" row per (sigma, n, level) with a
// random current, scored against the oracle interpolated on a 0.025-step
// grid).
CoverageReport coverage_conditional_fixed(const SimConfig& config);

// Coverage of the unconditional (bootstrap-variance) interval for the
// population mean.
CoverageReport coverage_unconditional(const SimConfig& config);

struct FixedWidthMode {
  enum Kind { kFixedN0, kRuleN0, kBootstrap } kind = kRuleN0;
  int n0 = 0;  // kFixedN0 only
};

// Coverage of theta(current) by the two-stage fixed-width interval, and
// the average final sample size, per (level, q) cell.
CoverageReport coverage_fixed_width(const SimConfig& config,
                                    const FixedWidthMode& mode);

// One observation from the configured law.
double draw_law(const SimConfig& config, Rng& rng);

// Quantile of the configured law (law_scale = 0 returns law_shift).
double law_quantile(const SimConfig& config, double q);

}  // namespace vwa
