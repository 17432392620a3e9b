#include "regent/divergences.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace regent;

namespace {

HermitianOperator diag(std::initializer_list<double> v) {
  RVector d(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return HermitianOperator::diagonal(d);
}

// Classical relative entropy of the outcome distributions of a qubit basis measurement.
double basis_kl(const CMatrix& rho, const CMatrix& sigma, double theta, double phi) {
  CVector u(2), v(2);
  u << std::cos(theta / 2), std::exp(cd(0, phi)) * std::sin(theta / 2);
  v << -std::exp(cd(0, -phi)) * std::sin(theta / 2), std::cos(theta / 2);
  RVector p(2), q(2);
  p << (u.adjoint() * rho * u)(0).real(), (v.adjoint() * rho * v)(0).real();
  q << (u.adjoint() * sigma * u)(0).real(), (v.adjoint() * sigma * v)(0).real();
  return classical_kl(p, q);
}

// Grid search followed by coordinate refinement over all qubit bases.
double measured_bruteforce(const CMatrix& rho, const CMatrix& sigma) {
  const double pi = std::numbers::pi;
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; j < 120; ++j) {
      const double t = pi * i / 60, ph = 2 * pi * j / 120;
      const double v = basis_kl(rho, sigma, t, ph);
      if (v > best) best = v, bt = t, bp = ph;
    }
  for (double h = pi / 60; h > 1e-10; h *= 0.5)
    for (bool moved = true; moved;) {
      moved = false;
      for (auto [dt, dp] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}) {
        const double v = basis_kl(rho, sigma, bt + dt, bp + dp);
        if (v > best) best = v, bt += dt, bp += dp, moved = true;
      }
    }
  return best;
}

}  // namespace

TEST_CASE("closed forms on commuting states") {
  const DensityOperator rho(diag({0.5, 0.3, 0.2}));
  const HermitianOperator sigma = diag({0.2, 0.2, 0.6});
  const double kl = 0.5 * std::log2(2.5) + 0.3 * std::log2(1.5) + 0.2 * std::log2(1.0 / 3.0);
  CHECK(umegaki(rho, sigma).value == doctest::Approx(kl).epsilon(1e-12));
  CHECK(measured(rho, sigma).value == doctest::Approx(kl).epsilon(1e-7));
  CHECK(d_max(rho, sigma).value == doctest::Approx(std::log2(2.5)).epsilon(1e-10));
  CHECK(d_min(rho, sigma).value == doctest::Approx(0.0).epsilon(1e-12));
  const double f = std::sqrt(0.1) + std::sqrt(0.06) + std::sqrt(0.12);
  CHECK(measured_half(rho, sigma).value == doctest::Approx(-2 * std::log2(f)).epsilon(1e-10));
}

TEST_CASE("min-relative entropy uses the support of the first state") {
  const DensityOperator rho(diag({1.0, 0.0}));
  CHECK(d_min(rho, diag({0.25, 0.75})).value == doctest::Approx(2.0));
  CHECK(umegaki(rho, diag({0.25, 0.75})).value == doctest::Approx(2.0));
}

TEST_CASE("support violations give infinite divergences") {
  const DensityOperator rho(diag({0.5, 0.5}));
  const HermitianOperator sigma = diag({1.0, 0.0});
  CHECK_FALSE(support_contained(rho.op(), sigma));
  CHECK(umegaki(rho, sigma).is_infinite());
  CHECK(d_max(rho, sigma).is_infinite());
  CHECK(measured(rho, sigma).is_infinite());
  CHECK_FALSE(d_min(rho, sigma).is_infinite());
  const DensityOperator zero(diag({1.0, 0.0}));
  CHECK(d_min(zero, diag({0.0, 1.0})).is_infinite());
  CHECK(measured_half(zero, diag({0.0, 1.0})).is_infinite());
}

TEST_CASE("divergence ordering on random qutrit pairs") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const DensityOperator rho = random_density(3, 3, seed);
    const DensityOperator sigma = random_density(3, 3, 100 + seed);
    const double dmin = d_min(rho, sigma.op()).value;
    const double half = measured_half(rho, sigma.op()).value;
    const double dm = measured(rho, sigma.op()).value;
    const double du = umegaki(rho, sigma.op()).value;
    const double dx = d_max(rho, sigma.op()).value;
    CHECK(dmin <= half + 1e-7);
    CHECK(half <= dm + 1e-7);
    CHECK(dm <= du + 1e-7);
    CHECK(du <= dx + 1e-7);
  }
}

TEST_CASE("measured relative entropy matches an optimization over qubit bases") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const DensityOperator rho = random_density(2, 2, seed);
    const DensityOperator sigma = random_density(2, 2, 50 + seed);
    CHECK(measured(rho, sigma.op()).value ==
          doctest::Approx(measured_bruteforce(rho.matrix(), sigma.matrix())).epsilon(1e-6));
  }
  SUBCASE("pure first state") {
    for (std::uint64_t seed = 5; seed <= 7; ++seed) {
      const DensityOperator rho = random_density(2, 1, seed);
      const DensityOperator sigma = random_density(2, 2, 50 + seed);
      CHECK(measured(rho, sigma.op()).value ==
            doctest::Approx(measured_bruteforce(rho.matrix(), sigma.matrix())).epsilon(1e-6));
    }
  }
}

TEST_CASE("divergences of a state with itself vanish") {
  const DensityOperator rho = random_density(3, 2, 8);
  for (DivergenceKind k : {DivergenceKind::Umegaki, DivergenceKind::Max, DivergenceKind::Measured,
                           DivergenceKind::MeasuredHalf})
    CHECK(std::abs(divergence(k, rho, rho.op()).value) < 1e-6);
  CHECK(divergence_kind_from_string(to_string(DivergenceKind::Min)) == DivergenceKind::Min);
  CHECK_THROWS_AS(divergence_kind_from_string("renyi"), DomainError);
}

TEST_CASE("classical relative entropy") {
  RVector p(2), q(2);
  p << 1.0, 0.0;
  q << 0.5, 0.5;
  CHECK(classical_kl(p, q) == doctest::Approx(1.0));
  CHECK(std::isinf(classical_kl(q, p)));
}
