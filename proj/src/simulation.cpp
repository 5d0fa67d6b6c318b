#include "vwa/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "vwa/errors.hpp"
#include "vwa/resampling.hpp"
#include "vwa/summation.hpp"

namespace vwa {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Experiment-id mixing: every simulation cell gets its own master, and
// run r inside the cell draws from stream r. Identical configs therefore
// reproduce identical results whatever the thread count.
std::uint64_t cell_master(const SimConfig& config, const std::string& label) {
  return detail::mix2(detail::mix2(config.seed.master, config.seed.stream),
                      fnv1a(label));
}

std::string law_tag(const SimConfig& config) {
  const char* name = "";
  switch (config.law) {
    case ErrorLaw::kStandardNormal:
      name = "normal";
      break;
    case ErrorLaw::kShiftedNormal:
      name = "shifted-normal";
      break;
    case ErrorLaw::kLaplace:
      name = "laplace";
      break;
    case ErrorLaw::kUniformSymmetric:
      name = "uniform-symmetric";
      break;
  }
  return std::string(name) + "(" + fmt17(config.law_shift) + "," +
         fmt17(config.law_scale) + ")";
}

std::string kernel_tag(const KernelSpec& kernel) {
  return to_string(kernel.family) + "(" + fmt17(kernel.sigma) + "," +
         fmt17(kernel.ridge) + ")";
}

// ---------------------------------------------------------------------
// Oracle disk cache. One small text file per value: first line the full
// content key, second line the value. A stale or colliding file fails the
// key comparison and is simply recomputed.

std::filesystem::path cache_dir() {
  const char* env = std::getenv("VWA_ORACLE_CACHE_DIR");
  std::filesystem::path dir;
  if (env != nullptr && *env != '\0') {
    dir = env;
  } else {
    dir = std::filesystem::temp_directory_path() / "vwa-oracle-cache";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  return dir;
}

std::filesystem::path cache_path(const std::string& key) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(key)));
  return cache_dir() / (std::string(buf) + ".txt");
}

bool cache_lookup(const std::string& key, double* value) {
  std::ifstream in(cache_path(key));
  if (!in) return false;
  std::string stored;
  if (!std::getline(in, stored) || stored != key) return false;
  std::string num;
  if (!std::getline(in, num)) return false;
  char* end = nullptr;
  const double v = std::strtod(num.c_str(), &end);
  if (end == num.c_str()) return false;
  *value = v;
  return true;
}

void cache_store(const std::string& key, double value) {
  const auto path = cache_path(key);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;  // unwritable cache never blocks computation
    out << key << "\n" << fmt17(value) << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

// ---------------------------------------------------------------------
// Deterministic parallel driver: static block partition over run indices,
// every run writes only its own slot, reductions happen afterwards in
// index order. body must not throw.

void parallel_runs(int runs, int threads, const std::function<void(int)>& body) {
  int t = threads;
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  t = std::clamp(t, 1, std::max(runs, 1));
  if (t == 1) {
    for (int r = 0; r < runs; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(runs) * w / t);
    const int hi = static_cast<int>(static_cast<long long>(runs) * (w + 1) / t);
    pool.emplace_back([lo, hi, &body] {
      for (int r = lo; r < hi; ++r) body(r);
    });
  }
  for (auto& th : pool) th.join();
}

double binomial_se(double p, long n) {
  if (n <= 0) return 0.0;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

std::string q_cell(const CoverageRow& row) {
  if (!row.q_label.empty()) return row.q_label;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", row.q);
  return buf;
}

}  // namespace

double draw_law(const SimConfig& config, Rng& rng) {
  double z = 0.0;
  switch (config.law) {
    case ErrorLaw::kStandardNormal:
    case ErrorLaw::kShiftedNormal:
      z = rng.normal();
      break;
    case ErrorLaw::kLaplace: {
      // inverse CDF of the unit-variance Laplace (scale 1/sqrt(2))
      const double u = rng.uniform01();
      z = (u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u))) / kSqrt2;
      break;
    }
    case ErrorLaw::kUniformSymmetric:
      z = kSqrt3 * (2.0 * rng.uniform01() - 1.0);
      break;
  }
  return config.law_shift + config.law_scale * z;
}

double law_quantile(const SimConfig& config, double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw DomainError("law_quantile: q must be in (0, 1)");
  }
  double z = 0.0;
  switch (config.law) {
    case ErrorLaw::kStandardNormal:
    case ErrorLaw::kShiftedNormal:
      z = normal_quantile(q);
      break;
    case ErrorLaw::kLaplace:
      z = (q < 0.5 ? std::log(2.0 * q) : -std::log(2.0 * (1.0 - q))) / kSqrt2;
      break;
    case ErrorLaw::kUniformSymmetric:
      z = kSqrt3 * (2.0 * q - 1.0);
      break;
  }
  return config.law_shift + config.law_scale * z;
}

double oracle_conditional_mean(double y, int n, const KernelSpec& kernel,
                               const SimConfig& config) {
  if (n < 2) {
    throw DomainError("oracle_conditional_mean: need n >= 2");
  }
  if (!std::isfinite(y)) {
    throw DomainError("oracle_conditional_mean: y must be finite");
  }
  const std::size_t m = static_cast<std::size_t>(n) - 1;
  const std::uint64_t batches = config.oracle_size / m;
  if (batches == 0) {
    throw DomainError(
        "oracle_conditional_mean: oracle_size smaller than one batch");
  }

  const std::string key = "oracle-cmean|law=" + law_tag(config) +
                          "|y=" + fmt17(y) + "|n=" + std::to_string(n) +
                          "|k=" + kernel_tag(kernel) +
                          "|size=" + std::to_string(config.oracle_size) +
                          "|seed=" + std::to_string(config.seed.master) + "," +
                          std::to_string(config.seed.stream);
  double cached;
  if (cache_lookup(key, &cached)) return cached;

  Rng rng(RngSeed{cell_master(config, key), 0});
  NeighborhoodSample sample;
  sample.current = y;
  sample.neighbors.resize(m);
  CompensatedSum total;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::uint64_t valid = 0;
  for (std::uint64_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < m; ++i) {
      sample.neighbors[i] = draw_law(config, rng);
    }
    try {
      const double est = vwa(sample, kernel).value;
      total.add(est);
      lo = std::min(lo, est);
      hi = std::max(hi, est);
      ++valid;
    } catch (const DegenerateNeighborhoodError&) {
      // dropped, not retried
    }
  }
  if (valid == 0) {
    throw ResamplingError(
        "oracle_conditional_mean: every batch was degenerate at y=" +
        std::to_string(y));
  }
  const double value =
      std::clamp(total.value() / static_cast<double>(valid), lo, hi);
  cache_store(key, value);
  return value;
}

double oracle_theta(double y, const KernelSpec& kernel,
                    const SimConfig& config) {
  if (!std::isfinite(y)) {
    throw DomainError("oracle_theta: y must be finite");
  }
  if (config.oracle_size == 0) {
    throw DomainError("oracle_theta: oracle_size must be positive");
  }

  const std::string key = "oracle-theta|law=" + law_tag(config) +
                          "|y=" + fmt17(y) + "|k=" + kernel_tag(kernel) +
                          "|size=" + std::to_string(config.oracle_size) +
                          "|seed=" + std::to_string(config.seed.master) + "," +
                          std::to_string(config.seed.stream);
  double cached;
  if (cache_lookup(key, &cached)) return cached;

  // ratio of means over one pass, clamped into the hull of the
  // positively weighted draws (a point mass then comes back exactly)
  Rng rng(RngSeed{cell_master(config, key), 0});
  CompensatedSum num, den;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::uint64_t active = 0;
  for (std::uint64_t i = 0; i < config.oracle_size; ++i) {
    const double yi = draw_law(config, rng);
    const double w = evaluate(kernel, yi - y);
    num.add(w * yi);
    den.add(w);
    if (w > 0.0) {
      ++active;
      lo = std::min(lo, yi);
      hi = std::max(hi, yi);
    }
  }
  if (active == 0 || !(den.value() > 0.0)) {
    throw DegenerateNeighborhoodError(
        "oracle_theta: kernel mass vanished at y=" + std::to_string(y), y);
  }
  const double value = std::clamp(num.value() / den.value(), lo, hi);
  cache_store(key, value);
  return value;
}

std::vector<SdProfilePoint> sd_profile(const SimConfig& config, int n,
                                       double y_lo, double y_hi, double step) {
  if (n < 2) throw DomainError("sd_profile: need n >= 2");
  if (!(step > 0.0)) throw DomainError("sd_profile: step must be positive");
  if (!(y_hi >= y_lo)) throw DomainError("sd_profile: empty grid");
  const int points = static_cast<int>((y_hi - y_lo) / step + 1e-9) + 1;

  std::vector<SdProfilePoint> profile;
  profile.reserve(static_cast<std::size_t>(points));
  const std::size_t m = static_cast<std::size_t>(n) - 1;
  for (int p = 0; p < points; ++p) {
    const double y = y_lo + step * p;
    const std::string label = "sd-profile|law=" + law_tag(config) +
                              "|k=" + kernel_tag(config.kernel) +
                              "|n=" + std::to_string(n) + "|y=" + fmt17(y);
    const std::uint64_t master = cell_master(config, label);

    std::vector<double> estimates(static_cast<std::size_t>(config.runs));
    std::vector<unsigned char> ok(static_cast<std::size_t>(config.runs), 0);
    parallel_runs(config.runs, config.threads, [&](int r) {
      Rng rng(RngSeed{master, static_cast<std::uint64_t>(r)});
      NeighborhoodSample sample;
      sample.current = y;
      sample.neighbors.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        sample.neighbors[i] = draw_law(config, rng);
      }
      try {
        estimates[static_cast<std::size_t>(r)] =
            vwa(sample, config.kernel).value;
        ok[static_cast<std::size_t>(r)] = 1;
      } catch (const Error&) {
        // degenerate run dropped
      }
    });

    std::vector<double> valid;
    valid.reserve(estimates.size());
    for (std::size_t r = 0; r < estimates.size(); ++r) {
      if (ok[r]) valid.push_back(estimates[r]);
    }
    SdProfilePoint point;
    point.y = y;
    if (valid.size() >= 2) {
      point.sd = std::sqrt(sample_variance(valid));
      point.se =
          point.sd / std::sqrt(2.0 * (static_cast<double>(valid.size()) - 1.0));
    }
    profile.push_back(point);
  }
  return profile;
}

CoverageReport coverage_conditional_fixed(const SimConfig& config) {
  CoverageReport report;
  report.title = "conditional fixed-sample coverage";
  report.notes.push_back("law=" + law_tag(config));
  report.notes.push_back(
      "runs=" + std::to_string(config.runs) +
      " oracle_size=" + std::to_string(config.oracle_size) +
      " seed=" + std::to_string(config.seed.master) + "," +
      std::to_string(config.seed.stream));

  for (double sigma : config.sigma_values) {
    const KernelSpec kernel(config.kernel.family, sigma, config.kernel.ridge);
    for (int n : config.n_values) {
      const std::size_t m = static_cast<std::size_t>(n) - 1;

      for (double level : config.levels) {
        const double alpha = 1.0 - level;
        for (double q : config.q_values) {
          const double y = law_quantile(config, q);
          const double target = oracle_conditional_mean(y, n, kernel, config);
          const std::string label =
              "classi|s=" + fmt17(sigma) + "|n=" + std::to_string(n) +
              "|lvl=" + fmt17(level) + "|q=" + fmt17(q);
          const std::uint64_t master = cell_master(config, label);

          std::vector<unsigned char> covered(
              static_cast<std::size_t>(config.runs), 0);
          std::vector<unsigned char> bad(static_cast<std::size_t>(config.runs),
                                         0);
          parallel_runs(config.runs, config.threads, [&](int r) {
            Rng rng(RngSeed{master, static_cast<std::uint64_t>(r)});
            NeighborhoodSample sample;
            sample.current = y;
            sample.neighbors.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
              sample.neighbors[i] = draw_law(config, rng);
            }
            try {
              const ConfidenceInterval ci =
                  conditional_fixed_sample_ci(sample, kernel, alpha);
              covered[static_cast<std::size_t>(r)] =
                  (ci.lower <= target && target <= ci.upper) ? 1 : 0;
            } catch (const Error&) {
              bad[static_cast<std::size_t>(r)] = 1;
            }
          });

          long hits = 0, dropped = 0;
          for (std::size_t r = 0; r < covered.size(); ++r) {
            if (bad[r]) {
              ++dropped;
            } else if (covered[r]) {
              ++hits;
            }
          }
          const long valid = config.runs - dropped;
          CoverageRow row;
          row.sigma = sigma;
          row.n_or_d = n;
          row.level = level;
          row.q = q;
          row.coverage = valid > 0 ? static_cast<double>(hits) / valid : 0.0;
          row.mc_se = binomial_se(row.coverage, valid);
          row.runs = config.runs;
          row.dropped = dropped;
          report.rows.push_back(row);
        }
      }

      if (!config.real_ci_column) continue;

      // Random-current column: the oracle target is interpolated from a
      // cached grid at the figure resolution (0.025 in law-scale units,
      // reaching 4.2 scale units out; draws beyond the edge clamp to it).
      const double gstep = 0.025 * std::max(config.law_scale, 0.0);
      const int half = gstep > 0.0 ? 168 : 0;
      std::vector<double> grid(static_cast<std::size_t>(2 * half) + 1);
      for (int gi = -half; gi <= half; ++gi) {
        const double gy = config.law_shift + gstep * gi;
        grid[static_cast<std::size_t>(gi + half)] =
            oracle_conditional_mean(gy, n, kernel, config);
      }
      const double y_min = config.law_shift - gstep * half;
      const double y_max = config.law_shift + gstep * half;
      const auto interp = [&](double y) {
        if (half == 0) return grid[0];
        const double yc = std::clamp(y, y_min, y_max);
        const double pos = (yc - y_min) / gstep;
        const std::size_t j = std::min(static_cast<std::size_t>(pos),
                                       grid.size() - 2);
        const double t = pos - static_cast<double>(j);
        return grid[j] * (1.0 - t) + grid[j + 1] * t;
      };

      for (double level : config.levels) {
        const double alpha = 1.0 - level;
        const std::string label = "classi-real|s=" + fmt17(sigma) +
                                  "|n=" + std::to_string(n) +
                                  "|lvl=" + fmt17(level);
        const std::uint64_t master = cell_master(config, label);

        std::vector<unsigned char> covered(
            static_cast<std::size_t>(config.runs), 0);
        std::vector<unsigned char> bad(static_cast<std::size_t>(config.runs),
                                       0);
        parallel_runs(config.runs, config.threads, [&](int r) {
          Rng rng(RngSeed{master, static_cast<std::uint64_t>(r)});
          NeighborhoodSample sample;
          sample.current = draw_law(config, rng);  // random current first
          sample.neighbors.resize(m);
          for (std::size_t i = 0; i < m; ++i) {
            sample.neighbors[i] = draw_law(config, rng);
          }
          try {
            const ConfidenceInterval ci =
                conditional_fixed_sample_ci(sample, kernel, alpha);
            const double target = interp(sample.current);
            covered[static_cast<std::size_t>(r)] =
                (ci.lower <= target && target <= ci.upper) ? 1 : 0;
          } catch (const Error&) {
            bad[static_cast<std::size_t>(r)] = 1;
          }
        });

        long hits = 0, dropped = 0;
        for (std::size_t r = 0; r < covered.size(); ++r) {
          if (bad[r]) {
            ++dropped;
          } else if (covered[r]) {
            ++hits;
          }
        }
        const long valid = config.runs - dropped;
        CoverageRow row;
        row.sigma = sigma;
        row.n_or_d = n;
        row.level = level;
        row.q_label = "real";
        row.coverage = valid > 0 ? static_cast<double>(hits) / valid : 0.0;
        row.mc_se = binomial_se(row.coverage, valid);
        row.runs = config.runs;
        row.dropped = dropped;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

CoverageReport coverage_unconditional(const SimConfig& config) {
  CoverageReport report;
  report.title = "unconditional fixed-sample coverage (bootstrap variance)";
  report.notes.push_back("law=" + law_tag(config));
  report.notes.push_back(
      "runs=" + std::to_string(config.runs) +
      " boot_reps=" + std::to_string(config.boot_reps) +
      " seed=" + std::to_string(config.seed.master) + "," +
      std::to_string(config.seed.stream));

  const double mean = config.law_shift;  // every law is symmetric
  const std::size_t levels = config.levels.size();
  std::vector<double> zs(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    zs[l] = normal_quantile(1.0 - (1.0 - config.levels[l]) / 2.0);
  }

  for (double sigma : config.sigma_values) {
    const KernelSpec kernel(config.kernel.family, sigma, config.kernel.ridge);
    for (int n : config.n_values) {
      const std::string label = "marginal|s=" + fmt17(sigma) +
                                "|n=" + std::to_string(n);
      const std::uint64_t master = cell_master(config, label);
      const std::uint64_t boot_master = cell_master(config, label + "|boot");

      std::vector<unsigned char> covered(
          static_cast<std::size_t>(config.runs) * levels, 0);
      std::vector<unsigned char> bad(static_cast<std::size_t>(config.runs), 0);
      parallel_runs(config.runs, config.threads, [&](int r) {
        Rng rng(RngSeed{master, static_cast<std::uint64_t>(r)});
        std::vector<double> series(static_cast<std::size_t>(n));
        for (auto& v : series) v = draw_law(config, rng);
        try {
          // one bootstrap variance per run; the per-level intervals all
          // reuse it, exactly as per-level unconditional_fixed_sample_ci
          // calls with this seed would
          NeighborhoodSample sample;
          sample.neighbors.assign(series.begin(), series.end() - 1);
          sample.current = series.back();
          const double center = vwa(sample, kernel).value;
          const double sd =
              std::sqrt(bootstrap_variance_unconditional(
                            series, kernel, config.boot_reps,
                            RngSeed{boot_master, static_cast<std::uint64_t>(r)})
                            .variance);
          for (std::size_t l = 0; l < levels; ++l) {
            const double half = zs[l] * sd;
            covered[static_cast<std::size_t>(r) * levels + l] =
                (center - half <= mean && mean <= center + half) ? 1 : 0;
          }
        } catch (const Error&) {
          bad[static_cast<std::size_t>(r)] = 1;
        }
      });

      for (std::size_t l = 0; l < levels; ++l) {
        long hits = 0, dropped = 0;
        for (int r = 0; r < config.runs; ++r) {
          if (bad[static_cast<std::size_t>(r)]) {
            ++dropped;
          } else if (covered[static_cast<std::size_t>(r) * levels + l]) {
            ++hits;
          }
        }
        const long valid = config.runs - dropped;
        CoverageRow row;
        row.sigma = sigma;
        row.n_or_d = n;
        row.level = config.levels[l];
        row.q_label = "marginal";
        row.coverage = valid > 0 ? static_cast<double>(hits) / valid : 0.0;
        row.mc_se = binomial_se(row.coverage, valid);
        row.runs = config.runs;
        row.dropped = dropped;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

CoverageReport coverage_fixed_width(const SimConfig& config,
                                    const FixedWidthMode& mode) {
  CoverageReport report;
  const char* mode_name = mode.kind == FixedWidthMode::kFixedN0 ? "fixed-n0"
                          : mode.kind == FixedWidthMode::kRuleN0
                              ? "rule-n0"
                              : "bootstrap";
  report.title = std::string("two-stage fixed-width coverage, ") + mode_name;
  report.notes.push_back("law=" + law_tag(config) +
                         " kernel=" + kernel_tag(config.kernel));
  report.notes.push_back(
      "d=" + fmt17(config.d) + " runs=" + std::to_string(config.runs) +
      " seed=" + std::to_string(config.seed.master) + "," +
      std::to_string(config.seed.stream));
  if (mode.kind == FixedWidthMode::kFixedN0) {
    report.notes.push_back("n0 pinned at " + std::to_string(mode.n0));
  }
  if (mode.kind == FixedWidthMode::kBootstrap) {
    report.notes.push_back(
        "boot_reps=" + std::to_string(config.boot_reps) +
        std::string(config.smooth_bootstrap ? " smooth" : " empirical") +
        " resampling");
  }

  TwoStageOptions options;
  options.variant = mode.kind == FixedWidthMode::kBootstrap
                        ? TwoStageVariant::kBootstrap
                        : TwoStageVariant::kClt;
  options.boot_reps = config.boot_reps;
  options.smooth = config.smooth_bootstrap;
  if (mode.kind == FixedWidthMode::kFixedN0) {
    options.n0_override = mode.n0;
  }

  const std::string n0_part =
      mode.kind == FixedWidthMode::kFixedN0
          ? "|n0=" + std::to_string(mode.n0)
          : "";

  for (double level : config.levels) {
    const double alpha = 1.0 - level;
    for (double q : config.q_values) {
      const double y = law_quantile(config, q);
      const double target = oracle_theta(y, config.kernel, config);
      // the source label carries no variant, so the clt and bootstrap
      // modes see identical observation streams run for run
      const std::string src_label = "fixed-width|d=" + fmt17(config.d) +
                                    "|lvl=" + fmt17(level) + "|q=" + fmt17(q) +
                                    n0_part;
      const std::uint64_t src_master = cell_master(config, src_label);
      const std::uint64_t boot_master =
          cell_master(config, src_label + "|boot");

      std::vector<unsigned char> covered(static_cast<std::size_t>(config.runs),
                                         0);
      std::vector<unsigned char> bad(static_cast<std::size_t>(config.runs), 0);
      std::vector<long long> n_final(static_cast<std::size_t>(config.runs), 0);
      parallel_runs(config.runs, config.threads, [&](int r) {
        GeneratorSource source(
            [&config](Rng& rng) { return draw_law(config, rng); },
            RngSeed{src_master, static_cast<std::uint64_t>(r)});
        try {
          const TwoStageRun run = run_two_stage(
              source, y, config.kernel, config.d, alpha, options,
              RngSeed{boot_master, static_cast<std::uint64_t>(r)});
          covered[static_cast<std::size_t>(r)] =
              (run.interval.lower <= target && target <= run.interval.upper)
                  ? 1
                  : 0;
          n_final[static_cast<std::size_t>(r)] = run.n_final;
        } catch (const Error&) {
          bad[static_cast<std::size_t>(r)] = 1;
        }
      });

      long hits = 0, dropped = 0;
      CompensatedSum n_total;
      for (int r = 0; r < config.runs; ++r) {
        if (bad[static_cast<std::size_t>(r)]) {
          ++dropped;
          continue;
        }
        if (covered[static_cast<std::size_t>(r)]) ++hits;
        n_total.add(static_cast<double>(n_final[static_cast<std::size_t>(r)]));
      }
      const long valid = config.runs - dropped;
      CoverageRow row;
      row.sigma = config.kernel.sigma;
      row.n_or_d = config.d;
      row.level = level;
      row.q = q;
      row.coverage = valid > 0 ? static_cast<double>(hits) / valid : 0.0;
      row.mc_se = binomial_se(row.coverage, valid);
      row.has_mean_n = true;
      row.mean_n = valid > 0 ? n_total.value() / valid : 0.0;
      row.runs = config.runs;
      row.dropped = dropped;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string CoverageReport::to_csv() const {
  std::ostringstream out;
  out << "# " << title << "\n";
  for (const auto& note : notes) out << "# " << note << "\n";
  out << "sigma,n_or_d,level,q,coverage,mc_se,mean_N,runs,dropped\n";
  for (const auto& row : rows) {
    out << fmt17(row.sigma) << "," << fmt17(row.n_or_d) << ","
        << fmt17(row.level) << "," << q_cell(row) << "," << fmt17(row.coverage)
        << "," << fmt17(row.mc_se) << ",";
    if (row.has_mean_n) out << fmt17(row.mean_n);
    out << "," << row.runs << "," << row.dropped << "\n";
  }
  return out.str();
}

std::string CoverageReport::to_text() const {
  std::ostringstream out;
  out << title << "\n";
  for (const auto& note : notes) out << "  " << note << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%8s %8s %7s %10s %9s %8s %10s %8s\n",
                "sigma", "n|d", "level", "q", "coverage", "mc_se", "mean_N",
                "dropped");
  out << line;
  for (const auto& row : rows) {
    char mean_n[24] = "-";
    if (row.has_mean_n) {
      std::snprintf(mean_n, sizeof mean_n, "%.2f", row.mean_n);
    }
    std::snprintf(line, sizeof line,
                  "%8.4g %8.4g %7.4g %10s %9.3f %8.4f %10s %8ld\n", row.sigma,
                  row.n_or_d, row.level, q_cell(row).c_str(), row.coverage,
                  row.mc_se, mean_n, row.dropped);
    out << line;
  }
  return out.str();
}

}  // namespace vwa
