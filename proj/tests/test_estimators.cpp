#include "regent/apps.hpp"
#include "regent/estimators.hpp"
#include "regent/sets.hpp"

#include "doctest.h"

#include <cmath>

using namespace regent;

TEST_CASE("required level formula") {
  CHECK(required_level(1.0, 2) == 64);
  CHECK(required_level(0.5, 3) == 601);
  long long prev = required_level(0.1, 3);
  for (double delta : {0.2, 0.5, 1.0, 2.0, 4.0}) {
    const long long cur = required_level(delta, 3);
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(required_level(0.0, 2), DomainError);
}

TEST_CASE("gap bound formula") {
  CHECK(gap_bound(2, 1) == doctest::Approx(12.0 * std::log2(3.0)));
  CHECK(gap_bound(4, 3) == doctest::Approx(40.0 * std::log2(7.0) / 3.0));
  CHECK(gap_bound(3, 100) < gap_bound(3, 10));
}

TEST_CASE("D_max precheck examples") {
  CHECK(std::abs(dmax_precheck(build_density_set(3), build_density_set(3))) < 1e-6);
  RVector e0 = RVector::Zero(2), e1 = RVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  CHECK(std::isinf(dmax_precheck(build_singleton(HermitianOperator::diagonal(e0)),
                                 build_singleton(HermitianOperator::diagonal(e1)))));
  const double v = dmax_precheck(build_singleton(max_entangled_state(2).op()), build_rains(2, 2));
  CHECK(std::isfinite(v));
  CHECK(v <= 1.0 + 1e-6);
}

TEST_CASE("sandwich of a set against itself is zero") {
  const HermitianOperator rho = random_density(3, 3, 4).op();
  const SetFactory f = [&](int m) { return build_singleton(rho, m); };
  const SandwichReport r = sandwich(f, f, 1);
  CHECK(std::abs(r.lower) < 1e-6);
  CHECK(std::abs(r.upper) < 1e-6);
  CHECK_FALSE(r.infinite);
}

TEST_CASE("maximally entangled qubits against the Rains set") {
  const SandwichReport r = apps::rains_sandwich(apps::isotropic(2, 1.0), 1);
  CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.lower == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.d == 4);
  CHECK(r.assumptions_certified);
}

TEST_CASE("disjoint supports propagate infinity") {
  RVector e0 = RVector::Zero(2), e1 = RVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  const SandwichReport r =
      sandwich([&](int m) { return build_singleton(HermitianOperator::diagonal(e0), m); },
               [&](int m) { return build_singleton(HermitianOperator::diagonal(e1), m); }, 1);
  CHECK(r.infinite);
  CHECK(std::isinf(r.upper));
}

TEST_CASE("level bounds are consistent across levels") {
  const DensityOperator rho = apps::isotropic(2, 0.8);
  const SandwichReport r1 = apps::rains_sandwich(rho, 1);
  SandwichOptions sym;
  sym.use_symmetry = true;
  const SandwichReport r2 = apps::rains_sandwich(rho, 2, sym);
  CHECK(r1.lower <= r1.upper + 1e-6);
  CHECK(r2.lower <= r2.upper + 1e-6);
  CHECK(r1.lower <= r2.upper + 1e-6);
  CHECK(r2.lower <= r1.upper + 1e-6);
  // m * upper_m is subadditive and m * lower_m superadditive.
  CHECK(2 * r2.upper <= 2 * r1.upper + 1e-6);
  CHECK(2 * r2.lower >= 2 * r1.lower - 1e-6);
  CHECK(r2.upper - r2.lower <= r2.gap_bound + 1e-6);
  CHECK(r2.use_symmetry);
}
