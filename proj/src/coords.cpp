#include "regent/coords.hpp"

#include <cmath>

namespace regent {

namespace hvec {

RVector pack(const CMatrix& x) {
  RVector v(size(static_cast<int>(x.rows())));
  v.setZero();
  pack_into(x, 1.0, v);
  return v;
}

void pack_into(const CMatrix& x, double scale, Eigen::Ref<RVector> out) {
  const int n = static_cast<int>(x.rows());
  const double s2 = std::sqrt(2.0) * scale;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      cd z = 0.5 * (x(i, j) + std::conj(x(j, i)));
      out(re(i, j)) += s2 * z.real();
      out(im(i, j)) += s2 * z.imag();
    }
    out(diag(j)) += scale * x(j, j).real();
  }
}

CMatrix unpack(const Eigen::Ref<const RVector>& v, int n) {
  CMatrix x(n, n);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      cd z(v(re(i, j)) * r2, v(im(i, j)) * r2);
      x(i, j) = z;
      x(j, i) = std::conj(z);
    }
    x(j, j) = v(diag(j));
  }
  return x;
}

CMatrix basis(int n, int k) {
  RVector e = RVector::Zero(size(n));
  e(k) = 1.0;
  return unpack(e, n);
}

bool is_imag(int n, int k) {
  (void)n;
  int j = static_cast<int>(std::sqrt(static_cast<double>(k)));
  while (j * j > k) --j;
  while ((j + 1) * (j + 1) <= k) ++j;
  int r = k - j * j;
  if (r == 2 * j) return false;
  return (r % 2) == 1;
}

}  // namespace hvec

namespace svec {

RVector pack(const RMatrix& x) {
  const int n = static_cast<int>(x.rows());
  RVector v(size(n));
  const double s2 = std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) v(off(i, j)) = s2 * 0.5 * (x(i, j) + x(j, i));
    v(diag(j)) = x(j, j);
  }
  return v;
}

RMatrix unpack(const Eigen::Ref<const RVector>& v, int n) {
  RMatrix x(n, n);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) x(i, j) = x(j, i) = v(off(i, j)) * r2;
    x(j, j) = v(diag(j));
  }
  return x;
}

}  // namespace svec

SparseMatrix linear_map_matrix(int n_in, int n_out, const std::function<CMatrix(const CMatrix&)>& f,
                               double drop) {
  const int ni = hvec::size(n_in);
  const int no = hvec::size(n_out);
  std::vector<Triplet> trips;
  RVector col(no);
  for (int k = 0; k < ni; ++k) {
    CMatrix y = f(hvec::basis(n_in, k));
    if (y.rows() != n_out || y.cols() != n_out) throw DomainError("linear map output has wrong dimension");
    col.setZero();
    hvec::pack_into(y, 1.0, col);
    for (int r = 0; r < no; ++r)
      if (std::abs(col(r)) > drop) trips.emplace_back(r, k, col(r));
  }
  SparseMatrix m(no, ni);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Space::Space(std::vector<Component> comps, std::vector<SymmetryGroup> groups)
    : comps_(std::move(comps)), groups_(std::move(groups)) {
  offsets_.resize(comps_.size());
  size_ = 0;
  for (size_t c = 0; c < comps_.size(); ++c) {
    if (comps_[c].dim < 1 || comps_[c].weight <= 0) throw DomainError("invalid space component");
    offsets_[c] = size_;
    size_ += hvec::size(comps_[c].dim);
  }
}

void Space::append(const Space& other) {
  const int shift = num_components();
  std::vector<Component> comps = comps_;
  comps.insert(comps.end(), other.comps_.begin(), other.comps_.end());
  std::vector<SymmetryGroup> groups = groups_;
  for (auto g : other.groups_) {
    g.first += shift;
    groups.push_back(g);
  }
  *this = Space(std::move(comps), std::move(groups));
}

RVector Space::pack(const std::vector<CMatrix>& blocks) const {
  if (blocks.size() != comps_.size()) throw DomainError("block count does not match the space");
  RVector v = RVector::Zero(size_);
  for (size_t c = 0; c < comps_.size(); ++c) {
    if (blocks[c].rows() != comps_[c].dim) throw DomainError("block dimension does not match the space");
    hvec::pack_into(blocks[c], std::sqrt(comps_[c].weight), v.segment(offsets_[c], comp_size(static_cast<int>(c))));
  }
  return v;
}

std::vector<CMatrix> Space::unpack(const Eigen::Ref<const RVector>& v) const {
  if (v.size() != size_) throw DomainError("coordinate vector does not match the space");
  std::vector<CMatrix> out;
  out.reserve(comps_.size());
  for (size_t c = 0; c < comps_.size(); ++c) {
    RVector seg = v.segment(offsets_[c], comp_size(static_cast<int>(c))) / std::sqrt(comps_[c].weight);
    out.push_back(hvec::unpack(seg, comps_[c].dim));
  }
  return out;
}

RVector Space::identity() const {
  RVector v = RVector::Zero(size_);
  for (size_t c = 0; c < comps_.size(); ++c) {
    double s = std::sqrt(comps_[c].weight);
    for (int j = 0; j < comps_[c].dim; ++j) v(offsets_[c] + hvec::diag(j)) = s;
  }
  return v;
}

RVector Space::permute_copies(const Eigen::Ref<const RVector>& v, const std::vector<int>& perm) const {
  if (v.size() != size_) throw DomainError("coordinate vector does not match the space");
  RVector out = v;
  const int m = static_cast<int>(perm.size());
  for (const auto& g : groups_) {
    if (g.m != m || g.kind == SymmetryKind::Invariant) continue;
    if (g.kind == SymmetryKind::TensorPower) {
      const int c = g.first;
      const int n = comps_[c].dim;
      CMatrix x = hvec::unpack(v.segment(offsets_[c], comp_size(c)), n);
      out.segment(offsets_[c], comp_size(c)) = hvec::pack(regent::permute_copies(x, g.q, perm));
    } else {
      std::vector<int> idx = copy_permutation_indices(g.q, perm);
      if (static_cast<int>(idx.size()) != g.count) throw DomainError("group size does not match its copy structure");
      for (int w = 0; w < g.count; ++w) {
        const int src = g.first + w;
        const int dst = g.first + idx[w];
        out.segment(offsets_[dst], comp_size(dst)) = v.segment(offsets_[src], comp_size(src));
      }
    }
  }
  return out;
}

}  // namespace regent
