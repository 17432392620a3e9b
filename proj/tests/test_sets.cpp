#include "regent/apps.hpp"
#include "regent/sets.hpp"

#include "doctest.h"

#include <cmath>

using namespace regent;

TEST_CASE("set builders produce consistent representations") {
  for (const SetRepresentation& c : {build_rains(2, 2), build_pptk(2, 2, 2), build_ppt(2, 3), build_wigner_set(3),
                                     build_density_set(3), build_singleton(max_entangled_state(2).op()),
                                     build_channel_image(apps::ad_channel(0.3)), build_ppt_twirled(3)}) {
    CHECK_NOTHROW(c.validate());
    CHECK(c.projection.rows() == c.ambient.size());
    CHECK(c.projection.cols() == c.lift.size());
  }
  CHECK_THROWS_AS(build_wigner_set(4), DomainError);
  CHECK_THROWS_AS(build_pptk(2, 2, 0), DomainError);
}

TEST_CASE("support function of the maximally entangled state") {
  const HermitianOperator phi = max_entangled_state(2).op();
  CHECK(support_function(build_rains(2, 2), phi) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(support_function(build_ppt(2, 2), phi) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(support_function(build_pptk(2, 2, 2), phi) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(support_function(build_density_set(4), phi) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("PPT hierarchy nesting on random positive witnesses") {
  const SetRepresentation ppt = build_ppt(2, 3), ppt3 = build_pptk(2, 3, 3), ppt2 = build_pptk(2, 3, 2);
  const SetRepresentation rains = build_rains(2, 3), wd = build_wd(2, 3);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const HermitianOperator w = random_density(6, 6, seed, {2, 3}).op();
    const double a = support_function(ppt, w), b = support_function(ppt3, w), c = support_function(ppt2, w);
    CHECK(a <= b + 1e-7);
    CHECK(b <= c + 1e-7);
    CHECK(c <= support_function(rains, w) + 1e-7);
    CHECK(c <= support_function(wd, w) + 1e-7);
  }
  CHECK(contains(build_pptk(3, 3, 2), DensityOperator::maximally_mixed(9, {3, 3}).op()));
}

TEST_CASE("support function of a singleton is the inner product") {
  const DensityOperator rho = random_density(3, 3, 2);
  const HermitianOperator w = random_hermitian(3, 3);
  CHECK(support_function(build_singleton(rho.op()), w) == doctest::Approx(w.inner(rho.op())).epsilon(1e-8));
}

TEST_CASE("epigraph form agrees with the direct support function") {
  const SetRepresentation c = build_rains(2, 2);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const RVector w = hvec::pack(random_hermitian(4, seed).matrix());
    const SupportResult direct = support_function_coords(c, w);
    CHECK(direct.value == doctest::Approx(direct.dual_value).epsilon(1e-6));
    CHECK(support_function_epigraph(c, w) == doctest::Approx(direct.value).epsilon(1e-6));
  }
}

TEST_CASE("twirled PPT set matches the full PPT set on invariant witnesses") {
  const HermitianOperator pa = apps::antisymmetric_projector(3);
  const HermitianOperator ps = HermitianOperator::identity(9) - pa;
  const SetRepresentation tw = build_ppt_twirled(3), full = build_ppt(3, 3);
  for (double a : {0.0, 0.3, 1.0}) {
    const HermitianOperator w = pa * a + ps * (1.0 - a) * 0.5;
    CHECK(support_function(tw, w) == doctest::Approx(support_function(full, w)).epsilon(1e-7));
  }
  CHECK(support_function(tw, pa * (1.0 / 3.0)) == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
}

TEST_CASE("polar membership and set membership") {
  const HermitianOperator phi = max_entangled_state(2).op();
  const SetRepresentation rains = build_rains(2, 2);
  CHECK(polar_membership(rains, phi * 1.9));
  CHECK_FALSE(polar_membership(rains, phi * 2.1));
  const SetRepresentation ppt = build_ppt(2, 2);
  CHECK(contains(ppt, DensityOperator::maximally_mixed(4, {2, 2}).op()));
  CHECK_FALSE(contains(ppt, phi));
  CHECK(membership_distance(ppt, phi) > 0.1);
}

TEST_CASE("Wigner norm of stabilizer and strange states") {
  for (const DensityOperator& s : apps::stabilizer_states(3))
    CHECK(wigner_norm(s.op(), 3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(wigner_norm(apps::strange_state().op(), 3) == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
  // The Wigner function is real and sums to one on states.
  const RVector w = wigner_function(random_density(3, 2, 5).op(), 3);
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(is_odd_prime(3));
  CHECK_FALSE(is_odd_prime(9));
}

TEST_CASE("multi-copy builders are covariant under copy permutations") {
  CHECK(symmetry_defect(build_rains(2, 2, 2), 3, 7) < 1e-10);
  CHECK(symmetry_defect(build_pptk(2, 2, 2, 2), 3, 7) < 1e-10);
  CHECK(symmetry_defect(build_channel_image(apps::ad_channel(0.2), 2), 3, 7) < 1e-10);
  CHECK(symmetry_defect(build_wigner_set(3, 2), 3, 7) < 1e-10);
}

TEST_CASE("Rains set is submultiplicative on random witnesses") {
  const SetRepresentation one = build_rains(2, 2), two = build_rains(2, 2, 2);
  const SubmultiplicativityReport r = submultiplicativity_probe(one, one, two, 4, 3);
  CHECK(r.violations.size() == 4);
  CHECK(r.max_violation <= 1e-6);
}

TEST_CASE("PPT set is not submultiplicative on the antisymmetric witness") {
  const HermitianOperator pa = apps::antisymmetric_projector(3) * (1.0 / 3.0);
  const double gap =
      submultiplicativity_gap(build_ppt_twirled(3), build_ppt_twirled(3), build_ppt_twirled(3, 2), pa, pa);
  CHECK(gap == doctest::Approx(1.0 / 27.0 - 1.0 / 36.0).epsilon(1e-6));
}

TEST_CASE("copy dimensions interleave the sites") {
  CHECK(copy_dims({2, 3}, 2) == std::vector<int>{2, 3, 2, 3});
}
