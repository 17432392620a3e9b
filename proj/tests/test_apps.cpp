#include "regent/apps.hpp"
#include "regent/divergences.hpp"
#include "regent/sets.hpp"

#include "doctest.h"

#include <cmath>

using namespace regent;
using namespace regent::apps;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityOperator product_pure(int seed) {
  const CVector a = random_unitary(3, seed).col(0), b = random_unitary(3, seed + 1).col(0);
  CVector ab(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ab(3 * i + j) = a(i) * b(j);
  return DensityOperator::pure(ab, {3, 3});
}

DensityOperator mix(const DensityOperator& a, const DensityOperator& b, double t) {
  return DensityOperator((a.op() * t + b.op() * (1.0 - t)).with_subsystems({3, 3}));
}

}  // namespace

TEST_CASE("channel constructions") {
  const double p = 0.07;
  const CMatrix out = platypus_channel(p).apply(CMatrix(CMatrix::Identity(3, 3) / 3.0));
  CMatrix expected = CMatrix::Zero(3, 3);
  expected.diagonal() << p / 3, (1 - p) / 3, 2.0 / 3;
  CHECK(max_abs(out - expected) < 1e-14);

  const CMatrix rho = random_density(2, 2, 3).matrix();
  CHECK(max_abs(ad_channel(0.0).apply(rho) - rho) < 1e-14);
  CMatrix ground = CMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(max_abs(ad_channel(1.0).apply(rho) - ground) < 1e-14);
  CHECK_THROWS_AS(ad_channel(1.5), DomainError);
  CHECK_THROWS_AS(platypus_channel(-0.1), DomainError);

  const CVector psi = replacer_vector();
  CHECK(psi.norm() == doctest::Approx(1.0));
  const CMatrix r = replacer_channel(psi, 3).apply(random_density(3, 3, 4).matrix());
  CHECK(max_abs(r - psi * psi.adjoint()) < 1e-14);

  const DensityOperator choi = choi_state(ad_channel(0.4));
  CHECK(choi.op().subsystems() == std::vector<int>{2, 2});
  CHECK(max_abs(partial_trace(choi.op(), 1).matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-14);
}

TEST_CASE("isotropic and Werner states") {
  const DensityOperator iso = isotropic(3, 0.6);
  CHECK(iso.op().inner(max_entangled_state(3).op()) == doctest::Approx(0.6));
  const DensityOperator w = werner(3, 0.4);
  const HermitianOperator pa = antisymmetric_projector(3);
  CHECK(pa.trace() == doctest::Approx(3.0));
  CHECK(w.op().inner(pa) == doctest::Approx(0.4));
}

TEST_CASE("analytic reference formulas") {
  CHECK(analytic_iso(2, 1.0) == doctest::Approx(1.0));
  CHECK(analytic_iso(3, 1.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(analytic_iso(3, 0.2) == 0.0);
  CHECK(analytic_iso(3, 0.5) ==
        doctest::Approx(std::log2(3.0) + 0.5 * std::log2(0.5) + 0.5 * std::log2(0.25)));
  CHECK(analytic_werner(3, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(analytic_werner(3, 1.0) == doctest::Approx(std::log2(5.0 / 3.0)));
  const double pc = 5.0 / 6.0;
  CHECK(analytic_werner(3, pc - 1e-9) == doctest::Approx(analytic_werner(3, pc + 1e-9)).epsilon(1e-7));
  CHECK(analytic_werner(3, 0.7) == doctest::Approx(1.0 - binary_entropy(0.7)));
}

TEST_CASE("entanglement measures on the maximally entangled qubit pair") {
  const DensityOperator phi = max_entangled_state(2);
  CHECK(e_wd1(phi) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(e_wd2(phi) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(e_wd2_direct(phi) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(e_wjz(phi, 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d_m_pptk(phi, 2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("E_WD,2 agrees with its direct primal program") {
  // Indices 4, 5, 12 and 13 are rank 5 and 6 states where the value is negative.
  for (int i = 0; i < 20; ++i) {
    const int rank = 1 + i % 8;
    const DensityOperator rho = random_density(9, rank, 300 + i, {3, 3});
    CHECK(e_wd2(rho) == doctest::Approx(e_wd2_direct(rho)).epsilon(1e-6));
  }
}

TEST_CASE("the WD set strictly contains PPT_2") {
  const DensityOperator rho = random_density(9, 5, 304, {3, 3});
  const HermitianOperator pi = support_projector(rho.op());
  const double h_wd = support_function(build_wd(3, 3), pi);
  const double h_ppt2 = support_function(build_pptk(3, 3, 2), pi);
  CHECK(h_wd > 1.0 + 1e-3);
  CHECK(h_ppt2 <= 1.0 + 1e-7);
  CHECK(e_wd2(rho) < -1e-3);
}

TEST_CASE("separable states have zero entanglement bounds") {
  const DensityOperator prod = product_pure(11);
  CHECK(std::abs(e_wd1(prod)) < 1e-6);
  CHECK(std::abs(e_wd2(prod)) < 1e-6);
  CHECK(std::abs(e_wjz(prod, 2)) < 1e-6);
  CHECK(std::abs(d_m_pptk(prod, 2)) < 1e-5);
  CHECK(std::abs(rains_bound(DensityOperator::maximally_mixed(4, {2, 2}))) < 1e-6);
}

TEST_CASE("full-rank states have vanishing E_WD but positive D_M when entangled") {
  for (int i = 0; i < 3; ++i) {
    const DensityOperator rho = mix(max_entangled_state(3), random_density(9, 9, 40 + i, {3, 3}), 0.8);
    CHECK(numerical_rank(rho.op()) == 9);
    CHECK(e_wd1(rho) <= 1e-7);
    CHECK(e_wd2(rho) <= 1e-7);
    CHECK(d_m_pptk(rho, 2) > 1e-3);
    CHECK(*e_lr(rho) == 0.0);
  }
  CHECK_FALSE(e_lr(max_entangled_state(3)).has_value());
}

TEST_CASE("bound ordering chain on random two-qutrit states") {
  for (int i = 0; i < 30; ++i) {
    const DensityOperator rho = random_density(9, 1 + i % 9, 500 + i, {3, 3});
    const double lower = std::max({e_wd1(rho), e_wd2(rho), e_wjz(rho, 2)});
    // At level one the sandwich lower bound is D_M(rho || PPT_2).
    const SandwichReport s = pptk_sandwich(rho, 2, 1);
    CHECK(lower <= s.lower + 1e-6);
    CHECK(s.lower <= s.upper + 1e-6);
  }
}

TEST_CASE("entanglement report collects the level-one bounds") {
  const BoundReport r = entanglement_report(max_entangled_state(2), 2);
  REQUIRE(r.e_wd1);
  REQUIRE(r.d_m_pptk);
  CHECK(*r.e_wd1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(*r.d_m_pptk == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("amplitude damping capacity formula") {
  CHECK(std::abs(q_ad(0.5)) < 1e-9);
  for (double g : {0.6, 0.75, 0.9}) CHECK(std::abs(q_ad(g)) < 1e-9);
  CHECK(q_ad(0.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(q_ad(0.1) > q_ad(0.3));
}

TEST_CASE("thauma of stabilizer and strange states") {
  const std::vector<DensityOperator> stab = stabilizer_states(3);
  CHECK(stab.size() == 12);
  for (size_t i = 0; i < stab.size(); i += 4) CHECK(std::abs(thauma(stab[i])) < 1e-6);
  const double t = thauma(strange_state());
  CHECK(t > 0.3);
  CHECK(t <= std::log2(5.0 / 3.0) + 1e-6);
}

TEST_CASE("channel bounds vanish for identical channels and diverge for orthogonal replacers") {
  const QuantumChannel n = platypus_channel(0.05);
  const SandwichReport r = adc_bounds(n, n, 1);
  CHECK(std::abs(r.upper) < 1e-6);
  CHECK(std::abs(r.lower) < 1e-6);
  const QuantumChannel n0 = replacer_channel(CVector::Unit(2, 0), 2);
  const QuantumChannel n1 = replacer_channel(CVector::Unit(2, 1), 2);
  CHECK(adc_bounds(n0, n1, 1).infinite);
}

TEST_CASE("figure tables have the documented shape") {
  FigureOptions opt;
  opt.samples = 2;
  const Table t = figure2a(opt);
  CHECK(t.columns == std::vector<std::string>{"p", "D_M(rho||PPT2)", "E_WJZ", "D^inf(rho||PPT)"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == 0.0);
  CHECK(t.rows[1][0] == 1.0);
  CHECK(t.rows[1][1] == doctest::Approx(std::log2(3.0)).epsilon(1e-5));
  CHECK_THROWS_AS(figure("5", opt), DomainError);
}
