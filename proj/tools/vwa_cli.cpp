#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "vwa/csv.hpp"
#include "vwa/errors.hpp"
#include "vwa/estimator.hpp"
#include "vwa/intervals.hpp"
#include "vwa/kernel.hpp"
#include "vwa/normal.hpp"
#include "vwa/resampling.hpp"
#include "vwa/rng.hpp"
#include "vwa/simulation.hpp"

namespace {

using vwa::format_cell;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInsufficient = 4;

struct Options {
  std::string command;
  std::string input;
  std::string output;
  std::string column;
  std::string kernel_name = "gaussian";
  double sigma = 1.0;
  double ridge = 0.0;
  double level = 0.95;
  double d = 0.1;
  std::string method = "jackknife";
  std::string variant = "clt";
  std::string generate = "normal";
  double current = 0.0;
  bool have_current = false;
  int boot_reps = 1000;
  bool smooth = true;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  int runs = 10000;
  std::uint64_t oracle_size = 200000;
  std::string table;
  int n0 = 50;
  int threads = 1;
  bool runs_set = false;
  bool boot_reps_set = false;
  bool level_set = false;
  bool sigma_set = false;
  bool d_set = false;
};

vwa::KernelSpec make_kernel(const Options& opt) {
  vwa::KernelFamily family;
  if (opt.kernel_name == "gaussian") {
    family = vwa::KernelFamily::kGaussian;
  } else if (opt.kernel_name == "uniform") {
    family = vwa::KernelFamily::kUniform;
  } else {
    throw vwa::DomainError("unknown kernel: " + opt.kernel_name);
  }
  return vwa::KernelSpec(family, opt.sigma, opt.ridge);
}

vwa::ErrorLaw parse_law(const std::string& name) {
  if (name == "normal") return vwa::ErrorLaw::kStandardNormal;
  if (name == "laplace") return vwa::ErrorLaw::kLaplace;
  if (name == "uniform") return vwa::ErrorLaw::kUniformSymmetric;
  throw vwa::DomainError("unknown generator law: " + name);
}

void write_or_print(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path);
  if (!out) throw vwa::DomainError("cannot open output file: " + path);
  out << payload;
}

int cmd_denoise(const Options& opt) {
  if (opt.input.empty()) throw vwa::DomainError("denoise requires --input");
  const auto values = vwa::read_csv_column(opt.input, opt.column);
  const auto kernel = make_kernel(opt);
  const auto result = vwa::reconstruct(values, kernel);

  std::ostringstream out;
  out << "index,y,mu_hat,degenerate\n";
  bool any_degenerate = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << "," << format_cell(values[i]) << ","
        << format_cell(result.values[i]) << "," << (result.degenerate[i] ? 1 : 0)
        << "\n";
    any_degenerate = any_degenerate || result.degenerate[i];
  }
  write_or_print(opt.output, out.str());
  if (any_degenerate) {
    std::cerr << "warning: degenerate neighborhoods fell back to the raw value\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_ci(const Options& opt) {
  if (opt.input.empty()) throw vwa::DomainError("ci requires --input");
  const auto values = vwa::read_csv_column(opt.input, opt.column);
  if (values.size() < 2) {
    throw vwa::DomainError("ci needs at least 2 observations");
  }
  const auto kernel = make_kernel(opt);
  const double alpha = 1.0 - opt.level;

  vwa::ConfidenceInterval ci;
  if (opt.method == "jackknife") {
    vwa::NeighborhoodSample sample;
    sample.neighbors.assign(values.begin(), values.end() - 1);
    sample.current = values.back();
    ci = vwa::conditional_fixed_sample_ci(sample, kernel, alpha);
  } else if (opt.method == "bootstrap") {
    ci = vwa::unconditional_fixed_sample_ci(values, kernel, alpha, opt.boot_reps,
                                            vwa::RngSeed{opt.seed, 0});
  } else {
    throw vwa::DomainError("unknown method: " + opt.method);
  }

  std::cout << opt.method << "," << format_cell(ci.center) << ","
            << format_cell(ci.lower) << "," << format_cell(ci.upper) << ","
            << format_cell(ci.level) << "\n";
  return kExitOk;
}

void print_fixed_width_row(const vwa::TwoStageRun& run) {
  std::cout << run.n0 << "," << format_cell(run.sigma_tilde_sq) << ","
            << run.n_final << "," << format_cell(run.center) << ","
            << format_cell(run.interval.lower) << ","
            << format_cell(run.interval.upper) << ","
            << (run.variant == vwa::TwoStageVariant::kBootstrap ? "bootstrap"
                                                                : "clt")
            << "\n";
}

int cmd_fixed_width(const Options& opt) {
  const auto kernel = make_kernel(opt);
  const double alpha = 1.0 - opt.level;

  vwa::TwoStageOptions options;
  options.variant = [&] {
    if (opt.variant == "clt") return vwa::TwoStageVariant::kClt;
    if (opt.variant == "bootstrap") return vwa::TwoStageVariant::kBootstrap;
    throw vwa::DomainError("unknown variant: " + opt.variant);
  }();
  options.boot_reps = opt.boot_reps;
  options.smooth = opt.smooth;

  std::unique_ptr<vwa::SampleSource> source;
  double current = opt.current;
  if (!opt.input.empty()) {
    auto values = vwa::read_csv_column(opt.input, opt.column);
    if (!opt.have_current) {
      // without an explicit current the last row plays that role
      if (values.size() < 2) {
        throw vwa::DomainError("fixed-width needs at least 2 observations");
      }
      current = values.back();
      values.pop_back();
    }
    source = std::make_unique<vwa::VectorSource>(std::move(values));
  } else {
    vwa::SimConfig law_config;
    law_config.law = parse_law(opt.generate);
    source = std::make_unique<vwa::GeneratorSource>(
        [law_config](vwa::Rng& rng) { return vwa::draw_law(law_config, rng); },
        vwa::RngSeed{opt.seed, 1});
  }

  try {
    const vwa::TwoStageRun run =
        vwa::run_two_stage(*source, current, kernel, opt.d, alpha, options,
                           vwa::RngSeed{opt.seed, 2});
    print_fixed_width_row(run);
    std::cerr << "n0=" << run.n0 << " N=" << run.n_final << " interval=["
              << run.interval.lower << ", " << run.interval.upper << "]\n";
    return kExitOk;
  } catch (const vwa::InsufficientDataError& e) {
    print_fixed_width_row(e.partial());
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficient;
  }
}

vwa::SimConfig base_sim_config(const Options& opt) {
  vwa::SimConfig config;
  config.kernel = make_kernel(opt);
  config.runs = opt.runs;
  config.boot_reps = opt.boot_reps;
  config.smooth_bootstrap = opt.smooth;
  config.oracle_size = opt.oracle_size;
  config.seed = vwa::RngSeed{opt.seed, 0};
  config.threads = opt.threads;
  config.d = opt.d;
  if (opt.level_set) config.levels = {opt.level};
  if (opt.sigma_set) config.sigma_values = {opt.sigma};
  return config;
}

int emit_report(const Options& opt, vwa::CoverageReport report) {
  report.notes.push_back("desk-scale defaults unless overridden by flags");
  if (opt.output.empty()) {
    std::cout << report.to_csv();
  } else {
    write_or_print(opt.output, report.to_csv());
    std::cout << report.to_text();
  }
  return kExitOk;
}

int cmd_sd_profile(const Options& opt) {
  vwa::SimConfig config = base_sim_config(opt);
  if (!opt.sigma_set) {
    config.kernel = vwa::KernelSpec(config.kernel.family, 0.4,
                                    config.kernel.ridge);
  }
  const int n = 30;
  const double lo = vwa::normal_quantile(0.05);
  const double hi = vwa::normal_quantile(0.95);
  const auto profile = vwa::sd_profile(config, n, lo, hi, 0.025);

  std::ostringstream csv;
  csv << "# sd profile of the estimator, n=" << n
      << " kernel=" << to_string(config.kernel.family)
      << " sigma=" << format_cell(config.kernel.sigma)
      << " runs=" << config.runs << " seed=" << config.seed.master << "\n";
  csv << "y,sd,se\n";
  for (const auto& point : profile) {
    csv << format_cell(point.y) << "," << format_cell(point.sd) << ","
        << format_cell(point.se) << "\n";
  }
  if (opt.output.empty()) {
    std::cout << csv.str();
  } else {
    write_or_print(opt.output, csv.str());
    for (const auto& point : profile) {
      char line[80];
      std::snprintf(line, sizeof line, "%8.3f %10.4f\n", point.y, point.sd);
      std::cout << line;
    }
  }
  return kExitOk;
}

int cmd_simulate(Options opt) {
  if (opt.table == "sd-profile") {
    return cmd_sd_profile(opt);
  }

  if (opt.table == "classi") {
    vwa::SimConfig config = base_sim_config(opt);
    config.q_values = {0.05, 0.5, 0.95};
    return emit_report(opt, vwa::coverage_conditional_fixed(config));
  }

  if (opt.table == "marginal-bt") {
    if (!opt.runs_set) opt.runs = 5000;
    vwa::SimConfig config = base_sim_config(opt);
    if (!opt.sigma_set) config.sigma_values = {0.4, 0.8, 2.0};
    if (!opt.level_set) config.levels = {0.75, 0.95, 0.99};
    return emit_report(opt, vwa::coverage_unconditional(config));
  }

  if (opt.table == "fw-fixed" || opt.table == "fw-rule" ||
      opt.table == "fw-boot") {
    if (opt.table == "fw-boot" && !opt.runs_set) opt.runs = 2000;
    if (opt.table == "fw-boot" && !opt.boot_reps_set) opt.boot_reps = 2000;
    if ((opt.table == "fw-fixed" || opt.table == "fw-boot") && !opt.d_set) {
      opt.d = 0.1;
    } else if (!opt.d_set) {
      opt.d = 0.2;
    }

    vwa::SimConfig config = base_sim_config(opt);
    if (!opt.sigma_set) {
      config.kernel = vwa::KernelSpec(config.kernel.family, 0.6,
                                      config.kernel.ridge);
    }
    if (!opt.level_set) config.levels = {0.9, 0.95, 0.975};
    // the narrower precision tables condition on the outer deciles
    config.q_values =
        config.d < 0.15 ? std::vector<double>{0.1, 0.5, 0.9}
                        : std::vector<double>{0.05, 0.5, 0.95};

    vwa::FixedWidthMode mode;
    if (opt.table == "fw-fixed") {
      mode.kind = vwa::FixedWidthMode::kFixedN0;
      mode.n0 = opt.n0;
    } else if (opt.table == "fw-rule") {
      mode.kind = vwa::FixedWidthMode::kRuleN0;
    } else {
      mode.kind = vwa::FixedWidthMode::kBootstrap;
    }
    vwa::CoverageReport report = vwa::coverage_fixed_width(config, mode);
    if (opt.table == "fw-fixed" && !opt.sigma_set) {
      report.notes.push_back(
          "assumption: kernel sigma=0.6 (source tables omit it)");
    }
    return emit_report(opt, std::move(report));
  }

  throw vwa::DomainError("unknown table id: " + opt.table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vertically weighted averaging toolkit"};
  app.set_config("--config", "", "flat key=value configuration file");

  Options opt;
  app.add_option("command", opt.command, "one of denoise, ci, fixed-width, simulate, sd-profile")
      ->required()
      ->check(CLI::IsMember(
          {"denoise", "ci", "fixed-width", "simulate", "sd-profile"}));
  app.add_option("--input", opt.input, "input CSV path");
  app.add_option("--output", opt.output, "output path (default standard output)");
  app.add_option("--column", opt.column,
                 "input column, by header name or zero-based index");
  app.add_option("--kernel", opt.kernel_name, "kernel family")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  app.add_option("--sigma", opt.sigma, "kernel scale");
  app.add_option("--ridge", opt.ridge, "additive kernel floor");
  app.add_option("--level", opt.level, "confidence level in (0,1)");
  app.add_option("--d", opt.d, "fixed half-width of the interval");
  app.add_option("--method", opt.method, "ci method")
      ->check(CLI::IsMember({"jackknife", "bootstrap"}));
  app.add_option("--variant", opt.variant, "fixed-width variant")
      ->check(CLI::IsMember({"clt", "bootstrap"}));
  app.add_option("--generate", opt.generate, "generator law for fixed-width")
      ->check(CLI::IsMember({"normal", "laplace", "uniform"}));
  auto* current_opt =
      app.add_option("--current", opt.current, "current observation value");
  app.add_option("--boot-reps", opt.boot_reps, "bootstrap replicates")
      ->check(CLI::PositiveNumber);
  app.add_flag("--smooth,!--no-smooth", opt.smooth,
               "smooth bootstrap resampling (default on)");
  app.add_option("--seed", opt.seed, "master seed");
  app.add_option("--runs", opt.runs, "Monte Carlo runs per cell")
      ->check(CLI::PositiveNumber);
  app.add_option("--oracle-size", opt.oracle_size, "oracle draw budget")
      ->check(CLI::PositiveNumber);
  app.add_option("--table", opt.table,
                 "simulate table id: classi, marginal-bt, fw-fixed, fw-rule, "
                 "fw-boot, sd-profile");
  app.add_option("--n0", opt.n0, "pinned first-stage size for fw-fixed")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", opt.threads,
                 "worker threads for simulate (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  opt.have_current = current_opt->count() > 0;
  opt.runs_set = app.count("--runs") > 0;
  opt.boot_reps_set = app.count("--boot-reps") > 0;
  opt.level_set = app.count("--level") > 0;
  opt.sigma_set = app.count("--sigma") > 0;
  opt.d_set = app.count("--d") > 0;

  try {
    if (opt.command == "denoise") return cmd_denoise(opt);
    if (opt.command == "ci") return cmd_ci(opt);
    if (opt.command == "fixed-width") return cmd_fixed_width(opt);
    if (opt.command == "sd-profile") return cmd_sd_profile(opt);
    if (opt.command == "simulate") {
      if (opt.table.empty()) {
        throw vwa::DomainError("simulate requires --table");
      }
      return cmd_simulate(opt);
    }
    throw vwa::DomainError("unknown command: " + opt.command);
  } catch (const vwa::InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficient;
  } catch (const vwa::DegenerateNeighborhoodError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const vwa::DegenerateScaleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const vwa::ResamplingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
