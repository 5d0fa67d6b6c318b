#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vwa/errors.hpp"
#include "vwa/estimator.hpp"
#include "vwa/kernel.hpp"
#include "vwa/rng.hpp"
#include "vwa/summation.hpp"

using vwa::DegenerateNeighborhoodError;
using vwa::DomainError;
using vwa::Estimate;
using vwa::KernelFamily;
using vwa::KernelSpec;
using vwa::NeighborhoodSample;

namespace {

std::vector<double> normal_sample(std::size_t n, vwa::Rng& rng, double mean = 0.0) {
  std::vector<double> out(n);
  for (auto& v : out) v = mean + rng.normal();
  return out;
}

}  // namespace

TEST_CASE("vwa selects the value level around the current observation") {
  // |0-2| > 1 drops the first neighbor; {1,3} average to 2
  NeighborhoodSample s{{0.0, 1.0, 3.0}, 2.0};
  Estimate est = vwa::vwa(s, KernelSpec(KernelFamily::kUniform, 1.0));
  CHECK(est.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.weight_sum == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.effective_count == 2);
}

TEST_CASE("vwa on constant neighbors returns the constant") {
  NeighborhoodSample s{{4.2, 4.2, 4.2}, 7.0};
  Estimate est = vwa::vwa(s, KernelSpec(KernelFamily::kGaussian, 1.0));
  CHECK(est.value == 4.2);
}

TEST_CASE("vwa with symmetric neighbors lands on the current value") {
  NeighborhoodSample s{{0.0, 2.0}, 1.0};
  Estimate est = vwa::vwa(s, KernelSpec(KernelFamily::kGaussian, 1.0));
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vwa reports an empty weight set as degenerate") {
  NeighborhoodSample s{{0.0, 1.0}, 5.0};
  try {
    vwa::vwa(s, KernelSpec(KernelFamily::kUniform, 1.0));
    FAIL("expected degenerate neighborhood");
  } catch (const DegenerateNeighborhoodError& e) {
    CHECK(e.current() == 5.0);
    CHECK_FALSE(e.deleted_index().has_value());
  }
}

TEST_CASE("vwa validates inputs") {
  KernelSpec k(KernelFamily::kGaussian, 1.0);
  CHECK_THROWS_AS(vwa::vwa({{}, 1.0}, k), DomainError);
  CHECK_THROWS_AS(vwa::vwa({{1.0, std::nan("")}, 1.0}, k), DomainError);
}

TEST_CASE("leave one out drops exactly the named neighbor") {
  NeighborhoodSample s{{0.0, 2.0}, 1.0};
  KernelSpec k(KernelFamily::kUniform, 2.0);
  CHECK(vwa::leave_one_out(s, k, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(vwa::leave_one_out(s, k, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(vwa::leave_one_out(s, k, 2), DomainError);
}

TEST_CASE("leave one out keeps constants fixed") {
  NeighborhoodSample s{{3.0, 3.0, 3.0}, 3.0};
  KernelSpec k(KernelFamily::kGaussian, 0.5);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(vwa::leave_one_out(s, k, i) == 3.0);
  }
}

TEST_CASE("leave one out flags a deletion that removes all weight") {
  // only 0.5 is within reach of current 0; deleting it leaves nothing
  NeighborhoodSample s{{0.5, 5.0}, 0.0};
  KernelSpec k(KernelFamily::kUniform, 1.0);
  try {
    vwa::leave_one_out(s, k, 0);
    FAIL("expected degenerate neighborhood");
  } catch (const DegenerateNeighborhoodError& e) {
    REQUIRE(e.deleted_index().has_value());
    CHECK(*e.deleted_index() == 0);
  }
}

TEST_CASE("reconstruct preserves a clean jump exactly") {
  std::vector<double> series{0, 0, 0, 10, 10, 10};
  auto rec = vwa::reconstruct(series, KernelSpec(KernelFamily::kUniform, 1.0));
  REQUIRE(rec.values.size() == series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(rec.values[i] == series[i]);
    CHECK_FALSE(rec.degenerate[i]);
  }
}

TEST_CASE("reconstruct keeps constant series fixed") {
  std::vector<double> series(4, 2.5);
  auto rec = vwa::reconstruct(series, KernelSpec(KernelFamily::kGaussian, 1.0));
  for (double v : rec.values) CHECK(v == 2.5);
}

TEST_CASE("reconstruct excludes the evaluation point from its own average") {
  // each point averages the other two within reach of its value
  std::vector<double> series{0.0, 1.0, 2.0};
  auto rec = vwa::reconstruct(series, KernelSpec(KernelFamily::kUniform, 1.0));
  CHECK(rec.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.values[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct falls back to the raw value where weights vanish") {
  std::vector<double> series{0.0, 10.0};
  auto rec = vwa::reconstruct(series, KernelSpec(KernelFamily::kUniform, 1.0));
  CHECK(rec.values[0] == 0.0);
  CHECK(rec.values[1] == 10.0);
  CHECK(rec.degenerate[0]);
  CHECK(rec.degenerate[1]);
  CHECK_THROWS_AS(
      vwa::reconstruct({1.0}, KernelSpec(KernelFamily::kUniform, 1.0)),
      DomainError);
}

TEST_CASE("functionals on constant data collapse to the constant") {
  auto f = vwa::empirical_functionals({3.0, 3.0, 3.0, 3.0},
                                      KernelSpec(KernelFamily::kGaussian, 1.0),
                                      3.0);
  CHECK(f.theta == 3.0);
  CHECK(f.sigma_xi_sq == 0.0);
}

TEST_CASE("functionals match the two point hand computation") {
  auto f = vwa::empirical_functionals(
      {-1.0, 1.0}, KernelSpec(KernelFamily::kUniform, 3.0), 0.0);
  CHECK(f.mu == 0.0);
  CHECK(f.nu == 1.0);
  CHECK(f.theta == 0.0);
  CHECK(f.sigma_xi_sq == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("functionals keep theta equal to mu over nu") {
  vwa::Rng rng(vwa::RngSeed{2024, 0});
  auto data = normal_sample(200, rng);
  KernelSpec k(KernelFamily::kGaussian, 0.6);
  for (double y : {-1.0, 0.0, 0.4, 1.3}) {
    auto f = vwa::empirical_functionals(data, k, y);
    CHECK(f.theta == doctest::Approx(f.mu / f.nu).epsilon(1e-14));
  }
  CHECK_THROWS_AS(vwa::empirical_functionals(
                      {0.0, 1.0}, KernelSpec(KernelFamily::kUniform, 1.0), 8.0),
                  DegenerateNeighborhoodError);
}

TEST_CASE("theta estimate tracks the closed form for normal data") {
  // Gaussian kernel sigma on N(0,1) gives theta(y) = y / (1 + sigma^2)
  vwa::Rng rng(vwa::RngSeed{5150, 0});
  auto data = normal_sample(1000000, rng);
  KernelSpec k(KernelFamily::kGaussian, 0.6);
  for (double y : {0.0, 0.8}) {
    auto f = vwa::empirical_functionals(data, k, y);
    const double truth = y / (1.0 + 0.36);
    const double se = std::sqrt(f.sigma_xi_sq / static_cast<double>(data.size()));
    CHECK(std::abs(f.theta - truth) <= 3.0 * se);
  }
}

TEST_CASE("fixpoint iteration settles on symmetry centers") {
  KernelSpec k(KernelFamily::kGaussian, 1.0);
  auto r = vwa::fixpoint_theta({4.0, 6.0}, k, 5.0);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.converged);
  CHECK(r.iterations == 1);
}

TEST_CASE("fixpoint iteration climbs to the nearby level of a jump") {
  auto r = vwa::fixpoint_theta({0, 0, 0, 10, 10, 10},
                               KernelSpec(KernelFamily::kUniform, 1.0), 9.5);
  CHECK(r.value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(r.converged);
}

TEST_CASE("fixpoint run that exhausts its iterations reports no convergence") {
  auto r = vwa::fixpoint_theta({0, 0, 0, 10, 10, 10},
                               KernelSpec(KernelFamily::kUniform, 1.0), 9.5,
                               1e-10, 1);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
}

TEST_CASE("weighted mean is exactly invariant to weight scaling") {
  vwa::Rng rng(vwa::RngSeed{88, 0});
  std::vector<double> values(40), weights(40);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = 3.0 * rng.normal();
    weights[i] = rng.uniform01();
  }
  const double base = vwa::weighted_mean(values, weights).value;
  for (double c : {0.25, 0.5, 2.0, 8.0, 1024.0}) {
    std::vector<double> scaled(weights);
    for (auto& w : scaled) w *= c;
    CHECK(vwa::weighted_mean(values, scaled).value == base);
  }
}

TEST_CASE("vwa is shift equivariant") {
  vwa::Rng rng(vwa::RngSeed{99, 0});
  KernelSpec k(KernelFamily::kGaussian, 0.8);
  NeighborhoodSample s{normal_sample(30, rng), 0.3};
  const double base = vwa::vwa(s, k).value;
  for (double shift : {-7.5, 3.25, 100.0}) {
    NeighborhoodSample moved = s;
    for (auto& v : moved.neighbors) v += shift;
    moved.current += shift;
    CHECK(vwa::vwa(moved, k).value ==
          doctest::Approx(base + shift).epsilon(1e-12));
  }
}

TEST_CASE("uniform kernel beyond the data range averages plainly") {
  vwa::Rng rng(vwa::RngSeed{31, 0});
  NeighborhoodSample s{normal_sample(25, rng), 0.0};
  const double est =
      vwa::vwa(s, KernelSpec(KernelFamily::kUniform, 1e6)).value;
  const double mean = vwa::compensated_total(s.neighbors) /
                      static_cast<double>(s.neighbors.size());
  CHECK(est == mean);
}

TEST_CASE("vwa stays inside the hull of the weighted neighbors") {
  vwa::Rng rng(vwa::RngSeed{7214, 0});
  KernelSpec k(KernelFamily::kGaussian, 0.5);
  for (int rep = 0; rep < 200; ++rep) {
    NeighborhoodSample s{normal_sample(12, rng), rng.normal()};
    Estimate est = vwa::vwa(s, k);
    const double lo =
        *std::min_element(s.neighbors.begin(), s.neighbors.end());
    const double hi =
        *std::max_element(s.neighbors.begin(), s.neighbors.end());
    CHECK(est.value >= lo);
    CHECK(est.value <= hi);
  }
}

TEST_CASE("estimate medians sit at the true level for symmetric noise") {
  // N(5,1) data: the distribution of the estimate is centered at 5
  const int reps = 20000;
  const int n = 30;
  const double m = 5.0;
  KernelSpec k(KernelFamily::kGaussian, 0.6);
  std::vector<double> diffs;
  diffs.reserve(reps);
  int positive = 0;
  for (int r = 0; r < reps; ++r) {
    vwa::Rng rng(vwa::substream(vwa::RngSeed{420, 17}, r));
    NeighborhoodSample s;
    s.neighbors = normal_sample(n - 1, rng, m);
    s.current = m + rng.normal();
    const double diff = vwa::vwa(s, k).value - m;
    diffs.push_back(diff);
    if (diff > 0.0) ++positive;
  }
  std::sort(diffs.begin(), diffs.end());
  // order-statistic 99% band for a population median of zero
  const double half = 2.5758293035489004 * std::sqrt(reps / 4.0);
  const auto lo = static_cast<std::size_t>(reps / 2.0 - half);
  const auto hi = static_cast<std::size_t>(reps / 2.0 + half);
  CHECK(diffs[lo] <= 0.0);
  CHECK(diffs[hi] >= 0.0);
  // sign test for symmetry: positive fraction in the same binomial band
  const double frac = static_cast<double>(positive) / reps;
  CHECK(std::abs(frac - 0.5) <= half / reps);
}
