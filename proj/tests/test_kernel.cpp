#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "vwa/errors.hpp"
#include "vwa/kernel.hpp"
#include "vwa/rng.hpp"

using vwa::DomainError;
using vwa::KernelFamily;
using vwa::KernelSpec;

TEST_CASE("gaussian weight at zero is the standard normal density") {
  KernelSpec spec(KernelFamily::kGaussian, 1.0);
  const double phi0 = 0.39894228040143268;
  CHECK(vwa::evaluate(spec, 0.0) == doctest::Approx(phi0).epsilon(1e-12));
}

TEST_CASE("uniform weight includes the support boundary") {
  KernelSpec spec(KernelFamily::kUniform, 1.0);
  CHECK(vwa::evaluate(spec, 1.0) == 1.0);
  CHECK(vwa::evaluate(spec, -1.0) == 1.0);
  CHECK(vwa::evaluate(spec, 1.5) == 0.0);
}

TEST_CASE("ridge floors the weight outside the support") {
  KernelSpec spec(KernelFamily::kUniform, 2.0, 0.001);
  CHECK(vwa::evaluate(spec, 5.0) == 0.001);
  CHECK(vwa::evaluate(spec, 0.0) == 1.001);
}

TEST_CASE("weights are symmetric in the distance") {
  vwa::Rng rng(vwa::RngSeed{123, 0});
  for (KernelFamily fam : {KernelFamily::kGaussian, KernelFamily::kUniform}) {
    KernelSpec spec(fam, 0.7, 0.01);
    for (int i = 0; i < 1000; ++i) {
      const double z = 6.0 * (rng.uniform01() - 0.5);
      CHECK(vwa::evaluate(spec, z) == vwa::evaluate(spec, -z));
    }
  }
}

TEST_CASE("scaling sigma equals scaling the argument") {
  vwa::Rng rng(vwa::RngSeed{321, 0});
  for (KernelFamily fam : {KernelFamily::kGaussian, KernelFamily::kUniform}) {
    const double sigma = 0.6;
    KernelSpec scaled(fam, sigma, 0.0);
    KernelSpec unit(fam, 1.0, 0.0);
    for (int i = 0; i < 1000; ++i) {
      const double z = 4.0 * (rng.uniform01() - 0.5);
      CHECK(vwa::evaluate(scaled, z) ==
            doctest::Approx(vwa::evaluate(unit, z / sigma)).epsilon(1e-15));
    }
  }
}

TEST_CASE("uniform family is indicator valued plus ridge") {
  KernelSpec spec(KernelFamily::kUniform, 1.3, 0.25);
  vwa::Rng rng(vwa::RngSeed{777, 0});
  for (int i = 0; i < 1000; ++i) {
    const double z = 8.0 * (rng.uniform01() - 0.5);
    const double w = vwa::evaluate(spec, z);
    CHECK((w == 0.25 || w == 1.25));
  }
}

TEST_CASE("weights never fall below the ridge") {
  KernelSpec spec(KernelFamily::kGaussian, 0.4, 0.002);
  vwa::Rng rng(vwa::RngSeed{49, 0});
  for (int i = 0; i < 1000; ++i) {
    const double z = 20.0 * (rng.uniform01() - 0.5);
    CHECK(vwa::evaluate(spec, z) >= 0.002);
  }
}

TEST_CASE("non-finite arguments are rejected") {
  KernelSpec spec(KernelFamily::kGaussian, 1.0);
  CHECK_THROWS_AS(vwa::evaluate(spec, std::nan("")), DomainError);
  CHECK_THROWS_AS(
      vwa::evaluate(spec, std::numeric_limits<double>::infinity()),
      DomainError);
}

TEST_CASE("spec construction validates scale and ridge") {
  CHECK_THROWS_AS(KernelSpec(KernelFamily::kGaussian, 0.0), DomainError);
  CHECK_THROWS_AS(KernelSpec(KernelFamily::kGaussian, -1.0), DomainError);
  CHECK_THROWS_AS(KernelSpec(KernelFamily::kUniform, 1.0, -0.5), DomainError);
}

TEST_CASE("family names render for reports") {
  CHECK(vwa::to_string(KernelFamily::kGaussian) == "gaussian");
  CHECK(vwa::to_string(KernelFamily::kUniform) == "uniform");
}
