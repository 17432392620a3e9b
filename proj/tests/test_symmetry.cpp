#include "regent/sets.hpp"
#include "regent/symmetry.hpp"

#include "doctest.h"

#include <algorithm>
#include <numeric>

using namespace regent;
using namespace regent::symmetry;

TEST_CASE("partitions of m with at most d rows") {
  CHECK(enumerate_partitions(2, 2) == std::vector<Partition>{{2}, {1, 1}});
  CHECK(enumerate_partitions(3, 3) == std::vector<Partition>{{3}, {2, 1}, {1, 1, 1}});
  CHECK(enumerate_partitions(2, 3) == std::vector<Partition>{{3}, {2, 1}});
  CHECK(enumerate_partitions(4, 4).size() == 5);
}

TEST_CASE("semistandard tableaux counts match brute force") {
  for (int d = 1; d <= 4; ++d)
    for (int m = 1; m <= 4; ++m)
      for (const Partition& l : enumerate_partitions(d, m)) CHECK(ssyt_count(l, d) == ssyt_count_bruteforce(l, d));
  CHECK(ssyt_count({2, 1}, 3) == 8);
  CHECK(syt_count({2, 1}) == 2);
  CHECK(syt_count({3, 2}) == 5);
}

TEST_CASE("Schur-Weyl dimension count") {
  // sum_lambda ssyt(lambda, d) * syt(lambda) = d^m.
  for (int d = 2; d <= 3; ++d)
    for (int m = 1; m <= 4; ++m) {
      long long total = 0;
      for (const Partition& l : enumerate_partitions(d, m)) total += ssyt_count(l, d) * syt_count(l);
      long long dm = 1;
      for (int i = 0; i < m; ++i) dm *= d;
      CHECK(total == dm);
    }
}

TEST_CASE("character orthogonality over the symmetric group") {
  for (int m = 2; m <= 4; ++m) {
    const std::vector<Partition> parts = enumerate_partitions(m, m);
    const auto perms = all_permutations(m);
    for (const Partition& a : parts)
      for (const Partition& b : parts) {
        long long s = 0;
        for (const auto& p : perms) s += character(a, cycle_type(p)) * character(b, cycle_type(p));
        CHECK(s == (a == b ? static_cast<long long>(perms.size()) : 0));
      }
    for (const Partition& a : parts) CHECK(character(a, Partition(m, 1)) == syt_count(a));
  }
}

TEST_CASE("block certificates equal brute-force orbit counts") {
  for (auto [d, m] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
    const BlockDecomposition bd = block_decompose(d, m, 1);
    CHECK(bd.certificate() == orbit_count(d, m));
  }
  const BlockDecomposition b22 = block_decompose(2, 2);
  REQUIRE(b22.blocks().size() == 2);
  CHECK(b22.blocks()[0].size == 3);
  CHECK(b22.blocks()[1].size == 1);
  CHECK(b22.certificate() == 10);
}

TEST_CASE("block map round trip on invariant operators") {
  const int d = 2, m = 3;
  const BlockDecomposition bd = block_decompose(d, m, 2);
  const RMatrix u = bd.unitary();
  CHECK((u.transpose() * u - RMatrix::Identity(bd.dim(), bd.dim())).cwiseAbs().maxCoeff() < 1e-10);
  const CMatrix x = twirl(random_hermitian(8, 5).matrix(), d, m);
  const std::vector<CMatrix> blocks = bd.phi(x);
  CHECK((bd.phi_inverse(blocks) - x).cwiseAbs().maxCoeff() < 1e-10);
  // The block map preserves the trace inner product with multiplicity weights.
  const CMatrix y = twirl(random_hermitian(8, 6).matrix(), d, m);
  const std::vector<CMatrix> yb = bd.phi(y);
  double inner = 0.0;
  for (size_t i = 0; i < blocks.size(); ++i)
    inner += bd.blocks()[i].multiplicity * (blocks[i] * yb[i]).trace().real();
  CHECK(inner == doctest::Approx((x * y).trace().real()).epsilon(1e-10));
}

TEST_CASE("twirl is an idempotent projection onto the commutant") {
  const CMatrix x = random_hermitian(9, 3).matrix();
  const CMatrix t = twirl(x, 3, 2);
  CHECK((twirl(t, 3, 2) - t).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(t.trace() - x.trace()) < 1e-12);
}

TEST_CASE("reduced sets keep support function values on invariant witnesses") {
  const SetRepresentation full = build_rains(2, 2, 2);
  const ReducedSet rs = reduce(full, 1);
  const SetRepresentation& red = rs.rep;
  CHECK(red.reduced);
  CHECK(red.lift_size() < full.lift_size());
  // Rains copies live on the tensor power of the single-copy space of dimension 4.
  const CMatrix w = twirl(random_hermitian(16, 9).matrix(), 4, 2);
  const RVector wc = hvec::pack(w);
  const double hf = support_function_coords(full, wc).value;
  const RVector wr = rs.ambient_embedding.transpose() * wc;
  CHECK(support_function_coords(red, wr).value == doctest::Approx(hf).epsilon(1e-6));
}
