#include "regent/coords.hpp"
#include "regent/sdp.hpp"

#include "doctest.h"

using namespace regent;

namespace {

SparseMatrix dense_rows(const RMatrix& a) { return a.sparseView(); }

sdp::Problem lambda_min_problem(const CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  sdp::Problem p;
  p.blocks = {{sdp::BlockKind::Hermitian, n}};
  p.A = dense_rows(hvec::pack(CMatrix::Identity(n, n)).transpose());
  p.b = RVector::Ones(1);
  p.c = hvec::pack(m);
  return p;
}

}  // namespace

TEST_CASE("linear program over the nonnegative orthant") {
  sdp::Problem p;
  p.blocks = {{sdp::BlockKind::Nonneg, 3}};
  RMatrix a(2, 3);
  a << 1, 1, 1, 1, -1, 0;
  p.A = dense_rows(a);
  p.b = RVector::Zero(2);
  p.b << 1, 0.2;
  p.c = RVector::Zero(3);
  p.c << 1, 2, 3;
  // x2 = x1 - 0.2, so the optimum puts the rest on x1 and x2: x = (0.6, 0.4, 0).
  const sdp::Result r = sdp::solve(p);
  REQUIRE(r.status == sdp::Status::Optimal);
  CHECK(r.primal_objective == doctest::Approx(1.4).epsilon(1e-7));
  CHECK(r.dual_objective == doctest::Approx(1.4).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("minimum eigenvalue as a semidefinite program") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const HermitianOperator m = random_hermitian(4, seed);
    const sdp::Result r = sdp::solve(lambda_min_problem(m.matrix()));
    REQUIRE(r.status == sdp::Status::Optimal);
    CHECK(r.primal_objective == doctest::Approx(m.min_eigenvalue()).epsilon(1e-7));
    CHECK(r.accuracy() < 1e-6);
  }
}

TEST_CASE("stated and dual forms agree") {
  const HermitianOperator m = random_hermitian(3, 42);
  sdp::Options a, b;
  a.form = sdp::Form::Primal;
  b.form = sdp::Form::Dual;
  const sdp::Result ra = sdp::solve(lambda_min_problem(m.matrix()), a);
  const sdp::Result rb = sdp::solve(lambda_min_problem(m.matrix()), b);
  REQUIRE(ra.status == sdp::Status::Optimal);
  REQUIRE(rb.status == sdp::Status::Optimal);
  CHECK(ra.primal_objective == doctest::Approx(rb.primal_objective).epsilon(1e-7));
}

TEST_CASE("real symmetric blocks") {
  RMatrix m(2, 2);
  m << 2, 1, 1, 2;
  sdp::Problem p;
  p.blocks = {{sdp::BlockKind::Symmetric, 2}};
  p.A = dense_rows(svec::pack(RMatrix::Identity(2, 2)).transpose());
  p.b = RVector::Ones(1);
  p.c = svec::pack(m);
  const sdp::Result r = sdp::solve(p);
  REQUIRE(r.status == sdp::Status::Optimal);
  CHECK(r.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("infeasible and unbounded problems are detected") {
  sdp::Problem p;
  p.blocks = {{sdp::BlockKind::Nonneg, 2}};
  RMatrix a(1, 2);
  a << 1, 1;
  p.A = dense_rows(a);
  p.b = RVector::Constant(1, -1.0);
  p.c = RVector::Ones(2);
  CHECK(sdp::solve(p).status == sdp::Status::PrimalInfeasible);

  sdp::Problem q;
  q.blocks = {{sdp::BlockKind::Nonneg, 2}};
  RMatrix aq(1, 2);
  aq << 1, -1;
  q.A = dense_rows(aq);
  q.b = RVector::Zero(1);
  q.c = RVector::Constant(2, -1.0);
  CHECK(sdp::solve(q).status == sdp::Status::DualInfeasible);
}

TEST_CASE("problem validation") {
  sdp::Problem p;
  p.blocks = {{sdp::BlockKind::Nonneg, 2}};
  p.A = SparseMatrix(1, 3);
  p.b = RVector::Zero(1);
  p.c = RVector::Zero(2);
  CHECK_THROWS_AS(p.validate(), DomainError);
}
