#pragma once

#include "regent/coords.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace regent {

/// Convex set {Pi(x) : x in PSD(lift), F(x) = g} in coordinates.
///
/// Every lift component is a PSD block (1x1 components are nonnegative scalars).
/// The constraint space holds Hermitian-valued or scalar equations.
struct SetRepresentation {
  std::string name;
  Space lift;
  Space constraint;
  Space ambient;
  SparseMatrix projection;      ///< ambient.size() x lift.size()
  SparseMatrix constraint_map;  ///< constraint.size() x lift.size()
  RVector rhs;                  ///< constraint.size()

  bool symmetry_certified = false;     ///< copy-permutation covariance declared by the builder
  bool assumptions_certified = false;  ///< the family satisfies the tensor-stability assumptions
  bool trace_normalized = false;       ///< every element has unit trace
  bool reduced = false;                ///< lift and ambient are block coordinates of a commutant
  std::optional<RVector> point;        ///< ambient coordinates when the set is a single point

  int copies = 1;
  std::vector<int> site_dims;  ///< subsystem dimensions of a single copy

  int ambient_dim() const;  ///< matrix dimension for single-component ambients
  int lift_size() const { return lift.size(); }
  void validate() const;
};

/// Data imposing h_C(w) <= t: exists lambda with <lambda, g> <= t and
/// F^T lambda - Pi^T w >= 0 blockwise on the lift.
struct EpigraphRepresentation {
  Space lift;
  Space constraint;
  SparseMatrix constraint_adjoint;  ///< F^T, lift x constraint
  SparseMatrix projection_adjoint;  ///< Pi^T, lift x ambient
  RVector rhs;
};

EpigraphRepresentation epigraph(const SetRepresentation& c);

struct SupportResult {
  double value = 0.0;       ///< primal optimum sup <w, Pi(Y)>
  double dual_value = 0.0;  ///< dual optimum of the same solve
  double accuracy = 0.0;
  bool unbounded = false;
};

/// Support function in ambient coordinates. Throws DomainError if the set is empty;
/// returns +infinity for unbounded values.
SupportResult support_function_coords(const SetRepresentation& c, const RVector& w, double tol = 1e-9);
double support_function(const SetRepresentation& c, const HermitianOperator& w, double tol = 1e-9);
/// min t subject to the epigraph constraint, solved as its own program.
double support_function_epigraph(const SetRepresentation& c, const RVector& w, double tol = 1e-9);

/// True iff support_function <= 1 + 1e-8.
bool polar_membership(const SetRepresentation& c, const HermitianOperator& w);

/// Spectral-norm distance from sigma to the set: min s with -sI <= Pi(x) - sigma <= sI.
double membership_distance(const SetRepresentation& c, const HermitianOperator& sigma, double tol = 1e-9);
bool contains(const SetRepresentation& c, const HermitianOperator& sigma, double threshold = 1e-6);

struct SubmultiplicativityReport {
  double max_violation = 0.0;
  std::vector<double> violations;  ///< h12(w1 (x) w2) - h1(w1) h2(w2) per trial
};

/// Random PSD witnesses drawn from the seed.
SubmultiplicativityReport submultiplicativity_probe(const SetRepresentation& c1, const SetRepresentation& c2,
                                                    const SetRepresentation& c12, int trials, std::uint64_t seed);
/// Fixed witnesses.
double submultiplicativity_gap(const SetRepresentation& c1, const SetRepresentation& c2,
                               const SetRepresentation& c12, const HermitianOperator& w1,
                               const HermitianOperator& w2);

// Builders. Bipartite sets act on (AB)^{(x) m} ordered A1 B1 A2 B2 ...
SetRepresentation build_rains(int dA, int dB, int copies = 1);
SetRepresentation build_pptk(int dA, int dB, int k, int copies = 1);
SetRepresentation build_ppt(int dA, int dB, int copies = 1);
/// Hermitian sigma with -Y <= sigma^T_B <= Y and ||Y^T_B||_1 <= 1. Unlike PPT_2, sigma
/// need not be positive semidefinite, so PPT_2 is a proper subset.
SetRepresentation build_wd(int dA, int dB, int copies = 1);
/// PPT operators on (C^d (x) C^d)^{(x) m} that are invariant under U (x) U on every copy,
/// written as a linear program over the products of symmetric and antisymmetric
/// projectors. Its support function equals that of build_ppt on invariant witnesses.
SetRepresentation build_ppt_twirled(int d, int copies = 1);
SetRepresentation build_wigner_set(int d, int copies = 1);
SetRepresentation build_channel_image(const QuantumChannel& n, int copies = 1);
SetRepresentation build_singleton(const HermitianOperator& rho, int copies = 1);
SetRepresentation build_density_set(int d);

/// Phase-point operators A_u, u = a*d + b, for odd prime d.
std::vector<CMatrix> phase_point_operators(int d);
/// Wigner function tr[A_u rho]/d^m for rho on (C^d)^{(x) m}.
RVector wigner_function(const HermitianOperator& rho, int d);
/// sum_u |W(u)|.
double wigner_norm(const HermitianOperator& rho, int d);
bool is_odd_prime(int d);

/// Full list of subsystem dimensions of m copies of the given site.
std::vector<int> copy_dims(const std::vector<int>& site, int copies);

/// Checks the copy-permutation covariance conditions on random probes. Returns the
/// largest deviation found.
double symmetry_defect(const SetRepresentation& c, int probes, std::uint64_t seed);

}  // namespace regent
