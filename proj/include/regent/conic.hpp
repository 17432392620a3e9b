#pragma once

#include "regent/coords.hpp"
#include "regent/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regent {
struct SetRepresentation;
}

namespace regent::conic {

enum class ConeKind {
  Psd,     ///< X >= 0, hvec coordinates
  Qre,     ///< (X, Y, t) with t >= D(X||Y) in nats
  Ore,     ///< (X, Y, T) with T >= D_op(X||Y) = -X^{1/2} ln(X^{-1/2} Y X^{-1/2}) X^{1/2}
  Nonneg,  ///< n nonnegative reals
  Free     ///< n unconstrained reals
};

std::string to_string(ConeKind k);
ConeKind cone_kind_from_string(const std::string& s);

/// One variable block. For Qre/Ore a fixed first argument may be given, in which
/// case the block holds only (Y, t) or (Y, T).
struct ConeSpec {
  ConeKind kind = ConeKind::Free;
  int n = 1;
  std::optional<CMatrix> fixed_first;

  int size() const;
  /// Offset of the Y part inside the block.
  int y_offset() const;
  /// Offset of t (Qre) or T (Ore) inside the block.
  int t_offset() const;
};

/// minimize c^T x + offset subject to E x = b, x in K_1 x ... x K_p.
struct ConicProgram {
  std::vector<ConeSpec> blocks;
  SparseMatrix E;
  RVector b;
  RVector c;
  double offset = 0.0;

  int num_vars() const;
  std::vector<int> offsets() const;
  void validate() const;
};

/// Incremental construction of a ConicProgram.
class ProgramBuilder {
 public:
  /// Returns the block index.
  int add_block(ConeSpec spec);
  int add_psd(int n) { return add_block({ConeKind::Psd, n, std::nullopt}); }
  int add_free(int n) { return add_block({ConeKind::Free, n, std::nullopt}); }
  int add_nonneg(int n) { return add_block({ConeKind::Nonneg, n, std::nullopt}); }
  /// Adds one PSD block per component (1x1 components become nonnegative scalars).
  /// Returns the column offset of the first coordinate; coordinates follow the Space layout.
  int add_space(const Space& s);
  int offset(int block) const { return offsets_.at(block); }
  int num_vars() const { return nvars_; }

  /// Appends rows with the given right-hand side and returns the first row index.
  int add_rows(const RVector& rhs);
  int add_row(double rhs);
  /// Adds scale * M into rows [row, row + M.rows()) and columns [col, col + M.cols()).
  void add_term(int row, int col, const SparseMatrix& M, double scale = 1.0);
  void add_entry(int row, int col, double v);
  /// Adds scale * v to the objective on columns [col, col + v.size()).
  void add_objective(int col, const RVector& v, double scale = 1.0);
  void add_objective_entry(int col, double v);
  void add_offset(double v) { offset_ += v; }

  ConicProgram build() const;

 private:
  std::vector<ConeSpec> blocks_;
  std::vector<int> offsets_;
  int nvars_ = 0;
  std::vector<Triplet> trips_;
  std::vector<double> rhs_;
  std::vector<std::pair<int, double>> obj_;
  double offset_ = 0.0;
};

/// Quadrature-based approximation order: `quad` Gauss-Legendre nodes and `sqrt_steps`
/// repeated square roots.
struct ApproxOrder {
  int quad = 3;
  int sqrt_steps = 3;
};

struct SolveOptions {
  double tol = 1e-7;
  ApproxOrder start{3, 3};
  bool escalate = true;
  int max_order = 7;
  bool verbose = false;
  sdp::Form form = sdp::Form::Automatic;
  /// Engine runs that stall at or below this accuracy are returned as optimal,
  /// with the achieved accuracy recorded in the solution.
  double stall_accept = 1e-4;
};

enum class SolutionStatus { Optimal, Infeasible, Unbounded, MaxIterations };
std::string to_string(SolutionStatus s);

struct Solution {
  SolutionStatus status = SolutionStatus::MaxIterations;
  RVector x;                    ///< all program coordinates
  std::vector<RVector> blocks;  ///< per-block coordinates
  double objective = 0.0;       ///< primal objective
  double dual_objective = 0.0;  ///< dual objective of the lowered program
  double accuracy = 0.0;        ///< residual / gap estimate of the final solve
  double order_change = 0.0;    ///< objective change between the last two approximation orders
  ApproxOrder order;
  int iterations = 0;
  bool has_entropy_cones = false;
};

/// Solves the program. Programs with Qre/Ore blocks are lowered to semidefinite
/// constraints and re-solved at increasing approximation order until the
/// objective changes by less than tol/10.
Solution solve(const ConicProgram& p, const SolveOptions& opt);
Solution solve(const ConicProgram& p, double tol = 1e-7);

/// Lowered semidefinite program for a fixed approximation order (program coordinates
/// are the leading columns).
sdp::Problem lower(const ConicProgram& p, ApproxOrder order);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre01(int m, RVector& nodes, RVector& weights);
/// Scalar approximation 2^k sum_j w_j f_{t_j}(x^{1/2^k}) of ln x.
double log_approx(double x, ApproxOrder order);

/// inf { t : rho = Pi_A(X), sigma = Pi_B(X'), F_A X = g_A, F_B X' = g_B, (rho, sigma, t) in QRE }.
/// The objective is in nats. When A is a single point, the first QRE argument is fixed.
ConicProgram build_umegaki_program(const SetRepresentation& A, const SetRepresentation& B);

/// sup { t' - t : t >= 1e-9, (W, 1) in epi h_B, (V + t' I, t) in epi h_A, (I, W, V) in ORE, V <= kVCap I },
/// written as a minimization of t - t'. Requires A to contain only unit-trace operators.
/// The cap lowers the optimum by at most -ln(1 - exp(-kVCap)) nats.
ConicProgram build_measured_program(const SetRepresentation& A, const SetRepresentation& B);

constexpr double kTFloor = 1e-9;
constexpr double kVCap = 30.0;

}  // namespace regent::conic
