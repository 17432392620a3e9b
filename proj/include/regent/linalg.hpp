#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace regent {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Raised for invalid inputs (bad dimensions, parameters out of range, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical solve fails to reach the requested accuracy.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense Hermitian matrix with an optional tensor-product structure.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Symmetrizes the input; throws DomainError if it was not Hermitian to 1e-8.
  explicit HermitianOperator(const CMatrix& m, std::vector<int> subsystems = {});
  explicit HermitianOperator(const RMatrix& m, std::vector<int> subsystems = {});

  static HermitianOperator identity(int dim, std::vector<int> subsystems = {});
  static HermitianOperator zero(int dim, std::vector<int> subsystems = {});
  static HermitianOperator projector(const CVector& v, std::vector<int> subsystems = {});
  static HermitianOperator diagonal(const RVector& d, std::vector<int> subsystems = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  const std::vector<int>& subsystems() const { return subsystems_; }
  /// Subsystem list, or {dim} when unstructured.
  std::vector<int> factors() const;
  HermitianOperator with_subsystems(std::vector<int> subsystems) const;

  double trace() const;
  RVector eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  HermitianOperator operator-() const { return *this * -1.0; }
  /// tr(A B), real for Hermitian A, B.
  double inner(const HermitianOperator& o) const;

 private:
  CMatrix m_;
  std::vector<int> subsystems_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

/// Positive semidefinite, unit-trace Hermitian operator.
class DensityOperator {
 public:
  DensityOperator() = default;
  /// Throws DomainError if min eigenvalue < -1e-10 or |tr - 1| > 1e-10.
  explicit DensityOperator(HermitianOperator op);
  static DensityOperator pure(const CVector& psi, std::vector<int> subsystems = {});
  static DensityOperator maximally_mixed(int dim, std::vector<int> subsystems = {});

  const HermitianOperator& op() const { return op_; }
  operator const HermitianOperator&() const { return op_; }
  int dim() const { return op_.dim(); }
  const CMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

/// Completely positive map given by Kraus operators K_i: X -> sum K_i X K_i^dagger.
class QuantumChannel {
 public:
  QuantumChannel() = default;
  /// When trace_preserving is set, sum K^dag K must equal the identity to 1e-10.
  QuantumChannel(std::vector<CMatrix> kraus, bool trace_preserving);

  const std::vector<CMatrix>& kraus() const { return kraus_; }
  bool trace_preserving() const { return trace_preserving_; }
  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }

  CMatrix apply(const CMatrix& x) const;
  CMatrix apply_adjoint(const CMatrix& y) const;
  HermitianOperator apply(const HermitianOperator& x) const;
  /// Kraus operators of the n-fold tensor power channel.
  QuantumChannel tensor_power(int n) const;

 private:
  std::vector<CMatrix> kraus_;
  bool trace_preserving_ = true;
  int dim_in_ = 0;
  int dim_out_ = 0;
};

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator tensor_power(const HermitianOperator& a, int n);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix tensor_power(const CMatrix& a, int n);

/// Transpose of the factor with the given 0-based index.
HermitianOperator partial_transpose(const HermitianOperator& x, int subsystem);
/// Transpose applied to each listed 0-based factor.
HermitianOperator partial_transpose(const HermitianOperator& x, const std::vector<int>& subsystems);
CMatrix partial_transpose(const CMatrix& x, const std::vector<int>& dims, const std::vector<int>& which);
/// Trace over the factor with the given 0-based index.
HermitianOperator partial_trace(const HermitianOperator& x, int subsystem);
CMatrix partial_trace(const CMatrix& x, const std::vector<int>& dims, int which);

/// Index map of the permutation of m tensor factors of dimension q that moves
/// input factor perm[k] to output position k.
std::vector<int> copy_permutation_indices(int q, const std::vector<int>& perm);
/// P X P^dag for the factor permutation above.
CMatrix permute_copies(const CMatrix& x, int q, const std::vector<int>& perm);

enum class MatrixFunction {
  Log,              ///< base-2 logarithm on the support
  Exp,              ///< 2^A, inverse of Log
  Ln,               ///< natural logarithm on the support
  NaturalExp,       ///< e^A
  Sqrt,             ///< square root (negative noise clipped to zero)
  InverseOnSupport  ///< Moore-Penrose style inverse on the support
};

/// Applies f to the eigenvalues. Log/Ln/InverseOnSupport map eigenvalues
/// at or below the rank tolerance to zero.
HermitianOperator matrix_function(const HermitianOperator& a, MatrixFunction f);

struct Norms {
  double trace_norm;
  double spectral_norm;
};
Norms norms(const HermitianOperator& x);

constexpr double kRankTolerance = 1e-9;

/// Projector onto eigenvectors with eigenvalue > 1e-9 * max eigenvalue.
HermitianOperator support_projector(const HermitianOperator& rho);
int numerical_rank(const HermitianOperator& rho);

/// Fidelity || sqrt(rho) sqrt(sigma) ||_1 (not squared).
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

/// Hilbert-Schmidt random state: G G^dag / tr(G G^dag) with dim x rank complex Gaussian G.
DensityOperator random_density(int dim, int rank, std::uint64_t seed, std::vector<int> subsystems = {});
/// Haar random unitary.
CMatrix random_unitary(int dim, std::uint64_t seed);
/// Random Hermitian matrix with Gaussian entries (GUE-like, unnormalized).
HermitianOperator random_hermitian(int dim, std::uint64_t seed, std::vector<int> subsystems = {});

/// Unnormalized maximally entangled vector sum_i |ii>.
CVector max_entangled_vector(int d);
/// Normalized maximally entangled projector on C^d (x) C^d.
DensityOperator max_entangled_state(int d);

double log2_safe(double x);
/// Binary entropy in bits.
double binary_entropy(double p);

}  // namespace regent
