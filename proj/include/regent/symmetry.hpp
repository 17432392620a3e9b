#pragma once

#include "regent/sets.hpp"

#include <cstdint>
#include <vector>

namespace regent::symmetry {

/// Weakly decreasing positive parts.
using Partition = std::vector<int>;

/// Partitions of m with at most d parts, in decreasing lexicographic order.
std::vector<Partition> enumerate_partitions(int d, int m);

/// Semistandard tableaux of shape lambda with entries in [d] (hook-content formula).
long long ssyt_count(const Partition& lambda, int d);
/// Same count by explicit enumeration of fillings.
long long ssyt_count_bruteforce(const Partition& lambda, int d);
/// Standard tableaux of shape lambda (hook length formula).
long long syt_count(const Partition& lambda);

/// Cycle type of a permutation, as a partition.
Partition cycle_type(const std::vector<int>& perm);
/// Irreducible character chi_lambda at cycle type mu (Murnaghan-Nakayama rule).
long long character(const Partition& lambda, const Partition& mu);
/// All permutations of {0, ..., m-1} in lexicographic order.
std::vector<std::vector<int>> all_permutations(int m);

/// Average of P_pi X P_pi^dag over all permutations of the m factors (m <= 6).
CMatrix twirl(const CMatrix& x, int d, int m);
HermitianOperator twirl(const HermitianOperator& x, int d, int m);

/// Orbits of pairs of words (i, j) in [d]^m x [d]^m under simultaneous permutation,
/// counted by canonicalizing every pair.
long long orbit_count(int d, int m);

struct Block {
  Partition lambda;
  int size = 0;          ///< dimension of the block (ssyt count)
  int multiplicity = 0;  ///< number of identical copies (standard tableaux count)
  /// One isometry (d^m x size) per copy, aligned so that every invariant X acts
  /// as bases[k]^T X bases[k] = X_lambda for all k.
  std::vector<RMatrix> bases;
};

/// Block diagonalization of the commutant of the permutation action on (C^d)^{(x) m}.
class BlockDecomposition {
 public:
  BlockDecomposition() = default;
  BlockDecomposition(int d, int m, std::vector<Block> blocks);

  int d() const { return d_; }
  int m() const { return m_; }
  int dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  /// Concatenated copy bases (a real orthogonal matrix).
  RMatrix unitary() const;
  /// Sum of squared block sizes.
  long long certificate() const;

  std::vector<CMatrix> phi(const CMatrix& x) const;
  CMatrix phi_inverse(const std::vector<CMatrix>& blocks) const;

  /// Blocks as a weighted space (weights are multiplicities).
  Space space() const;
  /// Coordinates of the full hvec space in terms of space() coordinates (isometric).
  SparseMatrix embedding() const;

 private:
  int d_ = 0, m_ = 0, dim_ = 0;
  std::vector<Block> blocks_;
};

/// Throws SolverError if no resolvable sample is found in five attempts.
BlockDecomposition block_decompose(int d, int m, std::uint64_t seed = 0);

/// Reduced coordinates of a space with symmetry groups. embedding maps reduced
/// coordinates to the invariant subspace of the full coordinates, isometrically.
struct ReducedSpace {
  Space space;
  SparseMatrix embedding;
};
ReducedSpace reduce_space(const Space& s, std::uint64_t seed = 0);

struct ReducedSet {
  SetRepresentation rep;
  SparseMatrix lift_embedding;
  SparseMatrix ambient_embedding;
  SparseMatrix constraint_embedding;
};

/// Restricts a symmetry-certified set to invariant lift elements in block coordinates.
ReducedSet reduce(const SetRepresentation& c, std::uint64_t seed = 0);
SetRepresentation reduce_setrep(const SetRepresentation& c, std::uint64_t seed = 0);

}  // namespace regent::symmetry
