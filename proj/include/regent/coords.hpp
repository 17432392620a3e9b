#pragma once

#include "regent/linalg.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace regent {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Real coordinates of Hermitian matrices.
///
/// An n x n Hermitian matrix X is stored as n^2 reals, column by column over the
/// upper triangle: for column j the pairs (sqrt2 Re X_ij, sqrt2 Im X_ij), i < j,
/// followed by X_jj. The map is an isometry: <hvec(A), hvec(B)> = Re tr(A B).
namespace hvec {

inline int size(int n) { return n * n; }
/// Coordinate of the diagonal entry (j, j).
inline int diag(int j) { return j * j + 2 * j; }
/// Coordinate of sqrt2 Re X_ij for i < j; the imaginary part follows at +1.
inline int re(int i, int j) { return j * j + 2 * i; }
inline int im(int i, int j) { return j * j + 2 * i + 1; }

RVector pack(const CMatrix& x);
CMatrix unpack(const Eigen::Ref<const RVector>& v, int n);
/// Column-vector style: hvec coordinates of a Hermitian matrix added into out.
void pack_into(const CMatrix& x, double scale, Eigen::Ref<RVector> out);
/// Hermitian matrix basis element E_k with hvec(E_k) = e_k.
CMatrix basis(int n, int k);
/// True if coordinate k holds an imaginary part.
bool is_imag(int n, int k);

}  // namespace hvec

/// Real coordinates of real symmetric matrices: the subsequence of hvec without
/// imaginary parts (n(n+1)/2 entries).
namespace svec {
inline int size(int n) { return n * (n + 1) / 2; }
inline int diag(int j) { return j * (j + 1) / 2 + j; }
inline int off(int i, int j) { return j * (j + 1) / 2 + i; }
RVector pack(const RMatrix& x);
RMatrix unpack(const Eigen::Ref<const RVector>& v, int n);
}  // namespace svec

/// Sparse matrix (hvec(n_out) x hvec(n_in)) of a real-linear map on Hermitian matrices,
/// obtained by evaluating the map on the hvec basis.
SparseMatrix linear_map_matrix(int n_in, int n_out, const std::function<CMatrix(const CMatrix&)>& f,
                               double drop = 1e-14);

/// One Hermitian block of a Space.
struct Component {
  int dim = 1;
  double weight = 1.0;
};

enum class SymmetryKind {
  Invariant,      ///< not moved by copy permutations
  TensorPower,    ///< one component of dimension q^m, acted on by permuting tensor factors
  DiagonalTensor  ///< q^m scalar components indexed by words of length m, permuted as words
};

struct SymmetryGroup {
  SymmetryKind kind = SymmetryKind::Invariant;
  int first = 0;  ///< first component index
  int count = 1;  ///< number of components in the group
  int q = 1;
  int m = 1;
};

/// Ordered direct sum of weighted Hermitian blocks. Coordinates of a component are
/// sqrt(weight) * hvec(X_c), so the Euclidean product of coordinate vectors equals
/// sum_c weight_c tr(X_c Y_c).
class Space {
 public:
  Space() = default;
  explicit Space(std::vector<Component> comps, std::vector<SymmetryGroup> groups = {});

  static Space hermitian(int n) { return Space({Component{n, 1.0}}); }

  const std::vector<Component>& components() const { return comps_; }
  const std::vector<SymmetryGroup>& groups() const { return groups_; }
  int num_components() const { return static_cast<int>(comps_.size()); }
  int size() const { return size_; }
  int offset(int c) const { return offsets_[c]; }
  int comp_size(int c) const { return hvec::size(comps_[c].dim); }

  RVector pack(const std::vector<CMatrix>& blocks) const;
  std::vector<CMatrix> unpack(const Eigen::Ref<const RVector>& v) const;
  /// Coordinates of the identity element.
  RVector identity() const;
  /// Coordinates of the functional x -> sum_c weight_c tr(X_c).
  RVector trace_functional() const { return identity(); }
  /// Appends components (and shifted groups) of another space.
  void append(const Space& other);
  void add_group(const SymmetryGroup& g) { groups_.push_back(g); }
  /// Action of a permutation of the m copies on coordinates; groups with a
  /// different number of copies and ungrouped components are left fixed.
  RVector permute_copies(const Eigen::Ref<const RVector>& v, const std::vector<int>& perm) const;

 private:
  std::vector<Component> comps_;
  std::vector<SymmetryGroup> groups_;
  std::vector<int> offsets_;
  int size_ = 0;
};

}  // namespace regent
