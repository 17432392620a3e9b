#include "regent/coords.hpp"
#include "regent/linalg.hpp"

#include "doctest.h"

#include <cmath>

using namespace regent;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("hermitian operators validate their input") {
  CMatrix m(2, 2);
  m << 1.0, cd(0, 1), cd(0, 1), 1.0;
  CHECK_THROWS_AS(HermitianOperator{m}, DomainError);
  CHECK_THROWS_AS(HermitianOperator(RMatrix(RMatrix::Identity(2, 2)), {3}), DomainError);
  CHECK_NOTHROW(HermitianOperator(RMatrix(RMatrix::Identity(4, 4)), {2, 2}));
}

TEST_CASE("inner product is the trace of the product") {
  const HermitianOperator a = random_hermitian(3, 1), b = random_hermitian(3, 2);
  CHECK(a.inner(b) == doctest::Approx((a.matrix() * b.matrix()).trace().real()));
  CHECK(a.inner(b) == doctest::Approx(b.inner(a)));
}

TEST_CASE("density operators require unit trace and positivity") {
  CHECK_THROWS_AS(DensityOperator(HermitianOperator::identity(2)), DomainError);
  CHECK_THROWS_AS(DensityOperator(HermitianOperator::diagonal(RVector::Map(std::vector<double>{1.5, -0.5}.data(), 2))),
                  DomainError);
  CHECK(DensityOperator::maximally_mixed(3).op().trace() == doctest::Approx(1.0));
}

TEST_CASE("partial transpose of the two-qubit maximally entangled state") {
  const DensityOperator phi = max_entangled_state(2);
  const RVector ev = partial_transpose(phi.op(), 1).eigenvalues();
  CHECK(ev(0) == doctest::Approx(-0.5));
  CHECK(ev(1) == doctest::Approx(0.5));
  CHECK(ev(3) == doctest::Approx(0.5));
  // Transposing both factors is the full transpose.
  const HermitianOperator r = random_density(6, 6, 3, {2, 3}).op();
  const CMatrix full = partial_transpose(r, std::vector<int>{0, 1}).matrix();
  CHECK(max_abs(full - r.matrix().transpose()) < 1e-14);
}

TEST_CASE("partial trace of a product operator") {
  const HermitianOperator a = random_density(2, 2, 1).op();
  const HermitianOperator b = random_density(3, 3, 2).op();
  const HermitianOperator ab = kron(a, b).with_subsystems({2, 3});
  CHECK(max_abs(partial_trace(ab, 1).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(ab, 0).matrix() - b.matrix()) < 1e-14);
}

TEST_CASE("matrix functions act on eigenvalues") {
  RVector d(2);
  d << 2.0, 4.0;
  const HermitianOperator x = HermitianOperator::diagonal(d);
  const HermitianOperator lg = matrix_function(x, MatrixFunction::Log);
  CHECK(lg.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(lg.matrix()(1, 1).real() == doctest::Approx(2.0));
  const HermitianOperator back = matrix_function(lg, MatrixFunction::Exp);
  CHECK(max_abs(back.matrix() - x.matrix()) < 1e-12);
  const HermitianOperator r = random_density(4, 4, 9).op();
  const HermitianOperator s = matrix_function(r, MatrixFunction::Sqrt);
  CHECK(max_abs(s.matrix() * s.matrix() - r.matrix()) < 1e-12);
  const HermitianOperator ln = matrix_function(r, MatrixFunction::Ln);
  CHECK(max_abs(matrix_function(ln, MatrixFunction::NaturalExp).matrix() - r.matrix()) < 1e-12);
}

TEST_CASE("support projector and rank") {
  const DensityOperator r = random_density(5, 2, 4);
  CHECK(numerical_rank(r.op()) == 2);
  const HermitianOperator p = support_projector(r.op());
  CHECK(max_abs(p.matrix() * p.matrix() - p.matrix()) < 1e-12);
  CHECK(p.trace() == doctest::Approx(2.0));
}

TEST_CASE("fidelity oracles") {
  const DensityOperator r = random_density(3, 3, 5);
  CHECK(fidelity(r.op(), r.op()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(DensityOperator::pure(CVector::Unit(2, 0)).op(), DensityOperator::pure(CVector::Unit(2, 1)).op()) ==
        doctest::Approx(0.0));
  RVector p(3), q(3);
  p << 0.2, 0.3, 0.5;
  q << 0.6, 0.3, 0.1;
  const double expected = std::sqrt(0.12) + 0.3 + std::sqrt(0.05);
  CHECK(fidelity(HermitianOperator::diagonal(p), HermitianOperator::diagonal(q)) == doctest::Approx(expected));
}

TEST_CASE("copy permutation swaps tensor factors") {
  const CMatrix a = random_hermitian(3, 1).matrix();
  const CMatrix b = random_hermitian(3, 2).matrix();
  CHECK(max_abs(permute_copies(kron(a, b), 3, {1, 0}) - kron(b, a)) < 1e-14);
  const CMatrix c = random_hermitian(3, 3).matrix();
  // Output factor k is input factor perm[k].
  CHECK(max_abs(permute_copies(kron(kron(a, b), c), 3, {2, 0, 1}) - kron(kron(c, a), b)) < 1e-13);
  CHECK_THROWS_AS(copy_permutation_indices(2, {0, 0}), DomainError);
}

TEST_CASE("random states are valid and reproducible") {
  const DensityOperator r1 = random_density(6, 3, 11, {2, 3});
  const DensityOperator r2 = random_density(6, 3, 11, {2, 3});
  CHECK(max_abs(r1.matrix() - r2.matrix()) == 0.0);
  CHECK(r1.op().min_eigenvalue() > -1e-12);
  CHECK(numerical_rank(r1.op()) == 3);
  const CMatrix u = random_unitary(4, 2);
  CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("channels check completeness and compose with tensor powers") {
  CMatrix k = CMatrix::Identity(2, 2) * 0.5;
  CHECK_THROWS_AS(QuantumChannel({k}, true), DomainError);
  CHECK_NOTHROW(QuantumChannel({k}, false));
  CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(0.7);
  e1(0, 1) = std::sqrt(0.3);
  const QuantumChannel ch({e0, e1}, true);
  const CMatrix x = random_density(2, 2, 1).matrix(), y = random_density(2, 2, 2).matrix();
  const CMatrix lhs = ch.tensor_power(2).apply(kron(x, y));
  CHECK(max_abs(lhs - kron(ch.apply(x), ch.apply(y))) < 1e-14);
  // Adjoint: tr(N(X) Y) = tr(X N^dag(Y)).
  CHECK(std::abs((ch.apply(x) * y).trace() - (x * ch.apply_adjoint(y)).trace()) < 1e-14);
}

TEST_CASE("binary entropy and safe logarithm") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::isinf(log2_safe(0.0)));
}

TEST_CASE("hvec coordinates are an isometry") {
  const CMatrix a = random_hermitian(4, 7).matrix();
  const CMatrix b = random_hermitian(4, 8).matrix();
  const RVector va = hvec::pack(a), vb = hvec::pack(b);
  CHECK(va.dot(vb) == doctest::Approx((a * b).trace().real()));
  CHECK(max_abs(hvec::unpack(va, 4) - a) < 1e-14);
  const RMatrix s = random_hermitian(3, 9).matrix().real();
  CHECK((svec::unpack(svec::pack(s), 3) - s).cwiseAbs().maxCoeff() < 1e-15);
}
