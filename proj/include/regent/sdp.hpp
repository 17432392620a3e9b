#pragma once

#include "regent/coords.hpp"

#include <string>
#include <vector>

namespace regent::sdp {

enum class BlockKind {
  Nonneg,     ///< n nonnegative reals
  Free,       ///< n unconstrained reals
  Hermitian,  ///< complex Hermitian PSD matrix, hvec coordinates (n^2 reals)
  Symmetric   ///< real symmetric PSD matrix, svec coordinates (n(n+1)/2 reals)
};

struct Block {
  BlockKind kind = BlockKind::Free;
  int n = 0;
  int size() const;
  bool conic() const { return kind != BlockKind::Free; }
};

/// Standard form: minimize c^T x subject to A x = b, x in K_1 x ... x K_p.
/// Dual: maximize b^T y subject to c - A^T y = z in K^*, z = 0 on free blocks.
struct Problem {
  std::vector<Block> blocks;
  SparseMatrix A;
  RVector b;
  RVector c;
  double objective_offset = 0.0;

  int num_vars() const;
  std::vector<int> offsets() const;
  void validate() const;
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalError };
std::string to_string(Status s);

enum class Form { Automatic, Primal, Dual };

struct Options {
  double tol = 1e-8;
  int max_iterations = 120;
  Form form = Form::Automatic;
  bool real_restriction = true;
  bool verbose = false;
};

struct Result {
  Status status = Status::NumericalError;
  RVector x, y, z;
  double primal_objective = 0.0;  ///< c^T x + offset
  double dual_objective = 0.0;    ///< b^T y + offset
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  bool used_dual_form = false;
  bool used_real_restriction = false;
  /// max of relative gap and infeasibilities at the returned iterate
  double accuracy() const;
};

/// Solves the problem, choosing internally between the stated form and its
/// dual reformulation (slack blocks substituted out), and restricting to real
/// symmetric matrices when the data is invariant under complex conjugation.
Result solve(const Problem& p, const Options& opt = {});

/// Plain interior-point iteration on the problem as stated.
Result solve_direct(const Problem& p, const Options& opt = {});

}  // namespace regent::sdp
