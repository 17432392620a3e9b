#include "regent/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <memory>

namespace regent::sdp {

int Block::size() const {
  switch (kind) {
    case BlockKind::Nonneg:
    case BlockKind::Free: return n;
    case BlockKind::Hermitian: return n * n;
    case BlockKind::Symmetric: return n * (n + 1) / 2;
  }
  return 0;
}

int Problem::num_vars() const {
  int s = 0;
  for (const auto& b : blocks) s += b.size();
  return s;
}

std::vector<int> Problem::offsets() const {
  std::vector<int> off(blocks.size() + 1, 0);
  for (size_t i = 0; i < blocks.size(); ++i) off[i + 1] = off[i] + blocks[i].size();
  return off;
}

void Problem::validate() const {
  const int n = num_vars();
  if (A.cols() != n) throw DomainError("constraint matrix column count does not match the blocks");
  if (A.rows() != b.size()) throw DomainError("constraint matrix row count does not match b");
  if (c.size() != n) throw DomainError("objective length does not match the blocks");
  for (const auto& bl : blocks)
    if (bl.n < 1) throw DomainError("block dimensions must be positive");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::PrimalInfeasible: return "infeasible";
    case Status::DualInfeasible: return "unbounded";
    case Status::MaxIterations: return "max_iterations";
    case Status::NumericalError: return "numerical_error";
  }
  return "unknown";
}

double Result::accuracy() const { return std::max({relative_gap, primal_infeasibility, dual_infeasibility}); }

namespace {

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct CoordInfo {
  int i, j;
  int part;  // 0 diagonal, 1 real part, 2 imaginary part
};

std::vector<CoordInfo> coord_table(BlockKind kind, int n) {
  std::vector<CoordInfo> t;
  if (kind == BlockKind::Hermitian) {
    t.resize(n * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        t[hvec::re(i, j)] = {i, j, 1};
        t[hvec::im(i, j)] = {i, j, 2};
      }
      t[hvec::diag(j)] = {j, j, 0};
    }
  } else {
    t.resize(n * (n + 1) / 2);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < j; ++i) t[svec::off(i, j)] = {i, j, 1};
      t[svec::diag(j)] = {j, j, 0};
    }
  }
  return t;
}

void unpack_mat(const double* v, int n, RMatrix& out) {
  out.resize(n, n);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    const double* col = v + j * (j + 1) / 2;
    for (int i = 0; i < j; ++i) out(i, j) = out(j, i) = col[i] * r2;
    out(j, j) = col[j];
  }
}

void unpack_mat(const double* v, int n, CMatrix& out) {
  out.resize(n, n);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    const double* col = v + j * j;
    for (int i = 0; i < j; ++i) {
      cd z(col[2 * i] * r2, col[2 * i + 1] * r2);
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
    out(j, j) = col[2 * j];
  }
}

// Packs the Hermitian part (G + G^H)/2 of G.
void pack_sym(const RMatrix& g, int n, double* v) {
  const double s = std::sqrt(2.0) * 0.5;
  for (int j = 0; j < n; ++j) {
    double* col = v + j * (j + 1) / 2;
    for (int i = 0; i < j; ++i) col[i] = s * (g(i, j) + g(j, i));
    col[j] = g(j, j);
  }
}

void pack_sym(const CMatrix& g, int n, double* v) {
  const double s = std::sqrt(2.0) * 0.5;
  for (int j = 0; j < n; ++j) {
    double* col = v + j * j;
    for (int i = 0; i < j; ++i) {
      cd z = g(i, j) + std::conj(g(j, i));
      col[2 * i] = s * z.real();
      col[2 * i + 1] = s * z.imag();
    }
    col[2 * j] = g(j, j).real();
  }
}

inline double conj_if(double a) { return a; }
inline cd conj_if(cd a) { return std::conj(a); }

// Interface shared by PSD and nonnegative-orthant blocks.
class ConeBlock {
 public:
  ConeBlock(int off, int size) : off_(off), size_(size) {}
  virtual ~ConeBlock() = default;
  int offset() const { return off_; }
  int size() const { return size_; }
  virtual double degree() const = 0;
  virtual void initial_point(double xi, double eta, Eigen::Ref<RVector> x, Eigen::Ref<RVector> z) const = 0;
  // Loads the current iterate; returns false if X or Z is not numerically PD.
  virtual bool load(const RVector& x, const RVector& z) = 0;
  virtual void add_schur(RMatrix& M) = 0;
  // out = H(w) = sym(X W Z^{-1}) on this block.
  virtual void apply_h(const RVector& w, RVector& out) const = 0;
  // out = sigma_mu Z^{-1} - X - sym(dX dZ Z^{-1}) when dx/dz supplied.
  virtual void rhs_p(double sigma_mu, const RVector* dx, const RVector* dz, RVector& out) const = 0;
  virtual double max_step_x(const RVector& dx) const = 0;
  virtual double max_step_z(const RVector& dz) const = 0;

  // Rows of A touching the block and the restricted matrix.
  std::vector<int> rows;
  SparseMatrix Ab;   // |rows| x size
  RowSparse AbRow;   // same, row-major

 protected:
  int off_, size_;
};

class NonnegBlock : public ConeBlock {
 public:
  NonnegBlock(int off, int size) : ConeBlock(off, size) {}
  double degree() const override { return size_; }
  void initial_point(double xi, double eta, Eigen::Ref<RVector> x, Eigen::Ref<RVector> z) const override {
    x.segment(off_, size_).setConstant(xi);
    z.segment(off_, size_).setConstant(eta);
  }
  bool load(const RVector& x, const RVector& z) override {
    xv_ = x.segment(off_, size_);
    zv_ = z.segment(off_, size_);
    return (xv_.array() > 0).all() && (zv_.array() > 0).all();
  }
  void add_schur(RMatrix& M) override {
    if (rows.empty()) return;
    RVector d = xv_.array() / zv_.array();
    SparseMatrix t = Ab * d.asDiagonal() * SparseMatrix(Ab.transpose());
    for (int k = 0; k < t.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(t, k); it; ++it) M(rows[it.row()], rows[it.col()]) += it.value();
  }
  void apply_h(const RVector& w, RVector& out) const override {
    out.segment(off_, size_) = xv_.array() * w.segment(off_, size_).array() / zv_.array();
  }
  void rhs_p(double sigma_mu, const RVector* dx, const RVector* dz, RVector& out) const override {
    RVector p = sigma_mu / zv_.array() - xv_.array();
    if (dx && dz) p.array() -= dx->segment(off_, size_).array() * dz->segment(off_, size_).array() / zv_.array();
    out.segment(off_, size_) = p;
  }
  double max_step_x(const RVector& dx) const override { return ratio(xv_, dx.segment(off_, size_)); }
  double max_step_z(const RVector& dz) const override { return ratio(zv_, dz.segment(off_, size_)); }

 private:
  static double ratio(const RVector& v, const RVector& d) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (d(i) < 0) a = std::min(a, -v(i) / d(i));
    return a;
  }
  RVector xv_, zv_;
};

template <class MatT>
class PsdBlock : public ConeBlock {
  using Scalar = typename MatT::Scalar;

 public:
  PsdBlock(BlockKind kind, int off, int n, int size)
      : ConeBlock(off, size), n_(n), coords_(coord_table(kind, n)) {}

  double degree() const override { return n_; }

  void initial_point(double xi, double eta, Eigen::Ref<RVector> x, Eigen::Ref<RVector> z) const override {
    for (int k = 0; k < size_; ++k) {
      bool d = coords_[k].part == 0;
      x(off_ + k) = d ? xi : 0.0;
      z(off_ + k) = d ? eta : 0.0;
    }
  }

  bool load(const RVector& x, const RVector& z) override {
    unpack_mat(x.data() + off_, n_, X_);
    unpack_mat(z.data() + off_, n_, Z_);
    cholX_.compute(X_);
    if (cholX_.info() != Eigen::Success) return false;
    cholZ_.compute(Z_);
    if (cholZ_.info() != Eigen::Success) return false;
    Zinv_ = cholZ_.solve(MatT::Identity(n_, n_));
    Zinv_ = (0.5 * (Zinv_ + Zinv_.adjoint())).eval();
    return true;
  }

  void build_row_structure() {
    // Rows whose restriction to this block has many entries use dense products.
    dense_.assign(rows.size(), 0);
    for (int r = 0; r < AbRow.outerSize(); ++r) {
      int cnt = static_cast<int>(AbRow.outerIndexPtr()[r + 1] - AbRow.outerIndexPtr()[r]);
      dense_[r] = cnt > n_ / 2 + 2;
    }
  }

  void add_schur(RMatrix& M) override {
    const int mb = static_cast<int>(rows.size());
    if (mb == 0) return;
    if (dense_.size() != rows.size()) build_row_structure();
    RMatrix H(size_, mb);
    MatT G(n_, n_), Ar(n_, n_);
    const double r2 = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < mb; ++r) {
      if (dense_[r]) {
        Ar.setZero();
        for (RowSparse::InnerIterator it(AbRow, r); it; ++it) add_entry(Ar, coords_[it.col()], it.value(), r2);
        G.noalias() = X_ * (Ar.template selfadjointView<Eigen::Upper>() * Zinv_);
      } else {
        G.setZero();
        // Combine real and imaginary coordinates of the same entry.
        for (RowSparse::InnerIterator it(AbRow, r); it; ++it) {
          const CoordInfo& ci = coords_[it.col()];
          Scalar a = entry_value(ci, it.value(), r2);
          G.noalias() += a * X_.col(ci.i) * Zinv_.row(ci.j);
          if (ci.i != ci.j) G.noalias() += conj_if(a) * X_.col(ci.j) * Zinv_.row(ci.i);
        }
      }
      pack_sym(G, n_, H.col(r).data());
    }
    RMatrix Mb = Ab * H;
    for (int q = 0; q < mb; ++q)
      for (int p = 0; p < mb; ++p) M(rows[p], rows[q]) += Mb(p, q);
  }

  void apply_h(const RVector& w, RVector& out) const override {
    MatT W;
    unpack_mat(w.data() + off_, n_, W);
    MatT G = X_ * W * Zinv_;
    pack_sym(G, n_, out.data() + off_);
  }

  void rhs_p(double sigma_mu, const RVector* dx, const RVector* dz, RVector& out) const override {
    MatT P = sigma_mu * Zinv_ - X_;
    if (dx && dz) {
      MatT DX, DZ;
      unpack_mat(dx->data() + off_, n_, DX);
      unpack_mat(dz->data() + off_, n_, DZ);
      P -= DX * DZ * Zinv_;
    }
    pack_sym(P, n_, out.data() + off_);
  }

  double max_step_x(const RVector& dx) const override { return max_step(cholX_, dx); }
  double max_step_z(const RVector& dz) const override { return max_step(cholZ_, dz); }

 private:
  static Scalar entry_value(const CoordInfo& ci, double v, double r2) {
    if constexpr (std::is_same_v<Scalar, cd>) {
      if (ci.part == 0) return cd(v, 0);
      if (ci.part == 1) return cd(v * r2, 0);
      return cd(0, v * r2);
    } else {
      return ci.part == 0 ? v : v * r2;
    }
  }

  static void add_entry(MatT& A, const CoordInfo& ci, double v, double r2) {
    // Fills the upper triangle only.
    A(ci.i, ci.j) += entry_value(ci, v, r2);
  }

  double max_step(const Eigen::LLT<MatT>& ch, const RVector& d) const {
    MatT D;
    unpack_mat(d.data() + off_, n_, D);
    MatT T = ch.matrixL().solve(D);
    MatT W = ch.matrixL().solve(MatT(T.adjoint()));
    W = (0.5 * (W + W.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<MatT> es(W, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues()(0);
    if (lmin >= 0) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
  }

  int n_;
  std::vector<CoordInfo> coords_;
  std::vector<char> dense_;
  MatT X_, Z_, Zinv_;
  Eigen::LLT<MatT> cholX_, cholZ_;
};

// Factorization of [[M, Af], [Af^T, 0]].
class KktSolver {
 public:
  bool factor(RMatrix M, const RMatrix& Af) {
    m_ = static_cast<int>(M.rows());
    nf_ = static_cast<int>(Af.cols());
    if (nf_ == 0) {
      M_ = std::move(M);
      double dmax = std::max(1e-300, M_.diagonal().cwiseAbs().maxCoeff());
      llt_.compute(M_);
      if (llt_.info() == Eigen::Success) {
        use_llt_ = true;
        return true;
      }
      for (double delta = 1e-13; delta < 1e-5; delta *= 100) {
        RMatrix Mr = M_;
        Mr.diagonal().array() += delta * dmax;
        llt_.compute(Mr);
        if (llt_.info() == Eigen::Success) {
          use_llt_ = true;
          return true;
        }
      }
      use_llt_ = false;
      K_ = M_;
      lu_.compute(K_);
      return true;
    }
    use_llt_ = false;
    K_.setZero(m_ + nf_, m_ + nf_);
    K_.topLeftCorner(m_, m_) = M;
    K_.topRightCorner(m_, nf_) = Af;
    K_.bottomLeftCorner(nf_, m_) = Af.transpose();
    lu_.compute(K_);
    return true;
  }

  void solve(const RVector& r1, const RVector& r2, RVector& dy, RVector& dxf) const {
    RVector rhs(m_ + nf_);
    rhs << r1, r2;
    RVector sol = raw_solve(rhs);
    for (int it = 0; it < 2; ++it) {
      RVector res = rhs - apply(sol);
      RVector corr = raw_solve(res);
      sol += corr;
    }
    dy = sol.head(m_);
    dxf = sol.tail(nf_);
  }

 private:
  RVector raw_solve(const RVector& rhs) const {
    if (use_llt_) return llt_.solve(rhs);
    return lu_.solve(rhs);
  }
  RVector apply(const RVector& v) const {
    if (nf_ == 0 && use_llt_) return M_ * v;
    return K_ * v;
  }

  int m_ = 0, nf_ = 0;
  bool use_llt_ = true;
  RMatrix M_, K_;
  Eigen::LLT<RMatrix> llt_;
  Eigen::PartialPivLU<RMatrix> lu_;
};

struct Metrics {
  double pobj, dobj, pinf, dinf, gap, relgap;
  double accuracy() const { return std::max({relgap, pinf, dinf}); }
};

}  // namespace

Result solve_direct(const Problem& prob, const Options& opt) {
  prob.validate();
  const int N = prob.num_vars();
  const std::vector<int> offs = prob.offsets();

  // Row presolve: drop empty rows, scale the rest to unit norm.
  SparseMatrix A0 = prob.A;
  A0.makeCompressed();
  const int m0 = static_cast<int>(A0.rows());
  RVector rownorm = RVector::Zero(m0);
  for (int k = 0; k < A0.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A0, k); it; ++it) rownorm(it.row()) += it.value() * it.value();
  rownorm = rownorm.cwiseSqrt();
  std::vector<int> keep;
  for (int i = 0; i < m0; ++i) {
    if (rownorm(i) > 0) {
      keep.push_back(i);
    } else if (std::abs(prob.b(i)) > 1e-12 * (1 + prob.b.cwiseAbs().maxCoeff())) {
      Result r;
      r.status = Status::PrimalInfeasible;
      r.x = RVector::Zero(N);
      r.y = RVector::Zero(m0);
      r.z = RVector::Zero(N);
      return r;
    }
  }
  const int m = static_cast<int>(keep.size());
  std::vector<int> newrow(m0, -1);
  for (int i = 0; i < m; ++i) newrow[keep[i]] = i;
  SparseMatrix A(m, N);
  RVector b(m);
  {
    std::vector<Triplet> trips;
    trips.reserve(A0.nonZeros());
    for (int k = 0; k < A0.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(A0, k); it; ++it)
        if (newrow[it.row()] >= 0) trips.emplace_back(newrow[it.row()], k, it.value() / rownorm(it.row()));
    A.setFromTriplets(trips.begin(), trips.end());
    for (int i = 0; i < m; ++i) b(i) = prob.b(keep[i]) / rownorm(keep[i]);
  }
  const double bscale = std::max(1.0, b.norm());
  const double cscale = std::max(1.0, prob.c.norm());
  b /= bscale;
  RVector c = prob.c / cscale;

  // Blocks.
  std::vector<std::unique_ptr<ConeBlock>> cones;
  std::vector<int> free_cols;
  for (size_t k = 0; k < prob.blocks.size(); ++k) {
    const Block& bl = prob.blocks[k];
    switch (bl.kind) {
      case BlockKind::Free:
        for (int i = 0; i < bl.size(); ++i) free_cols.push_back(offs[k] + i);
        break;
      case BlockKind::Nonneg: cones.push_back(std::make_unique<NonnegBlock>(offs[k], bl.size())); break;
      case BlockKind::Hermitian:
        cones.push_back(std::make_unique<PsdBlock<CMatrix>>(bl.kind, offs[k], bl.n, bl.size()));
        break;
      case BlockKind::Symmetric:
        cones.push_back(std::make_unique<PsdBlock<RMatrix>>(bl.kind, offs[k], bl.n, bl.size()));
        break;
    }
  }
  const int nf = static_cast<int>(free_cols.size());
  std::vector<char> is_free(N, 0);
  for (int cidx : free_cols) is_free[cidx] = 1;

  for (auto& cb : cones) {
    SparseMatrix cols = A.middleCols(cb->offset(), cb->size());
    std::vector<char> touched(m, 0);
    for (int k = 0; k < cols.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(cols, k); it; ++it) touched[it.row()] = 1;
    std::vector<int> local(m, -1);
    for (int i = 0; i < m; ++i)
      if (touched[i]) {
        local[i] = static_cast<int>(cb->rows.size());
        cb->rows.push_back(i);
      }
    std::vector<Triplet> trips;
    for (int k = 0; k < cols.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(cols, k); it; ++it) trips.emplace_back(local[it.row()], k, it.value());
    cb->Ab.resize(static_cast<int>(cb->rows.size()), cb->size());
    cb->Ab.setFromTriplets(trips.begin(), trips.end());
    cb->AbRow = cb->Ab;
  }
  RMatrix Af(m, nf);
  Af.setZero();
  for (int j = 0; j < nf; ++j)
    for (SparseMatrix::InnerIterator it(A, free_cols[j]); it; ++it) Af(it.row(), j) = it.value();

  const SparseMatrix At = A.transpose();

  // Initial point.
  RVector x = RVector::Zero(N), z = RVector::Zero(N), y = RVector::Zero(m);
  for (auto& cb : cones) {
    const int nb = static_cast<int>(cb->degree());
    SparseMatrix cols = A.middleCols(cb->offset(), cb->size());
    RVector rn = RVector::Zero(m);
    for (int k = 0; k < cols.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(cols, k); it; ++it) rn(it.row()) += it.value() * it.value();
    rn = rn.cwiseSqrt();
    double constX = 1.0, constZ = 0.0;
    for (int i = 0; i < m; ++i) {
      if (rn(i) == 0) continue;
      constX = std::max(constX, (1.0 + std::abs(b(i))) / (1.0 + rn(i)));
      constZ = std::max(constZ, rn(i));
    }
    constZ = std::max(constZ, c.segment(cb->offset(), cb->size()).norm());
    double xi = std::max(10.0, std::max(std::sqrt(double(nb)), nb * constX));
    double eta = std::max(10.0, std::max(std::sqrt(double(nb)), constZ));
    if (dynamic_cast<NonnegBlock*>(cb.get())) {
      xi = std::max(10.0, constX * std::sqrt(double(nb)));
      eta = std::max(10.0, constZ);
    }
    cb->initial_point(xi, eta, x, z);
  }

  double nu = 0;
  for (auto& cb : cones) nu += cb->degree();
  nu = std::max(nu, 1.0);

  auto metrics = [&](const RVector& xx, const RVector& yy, const RVector& zz) {
    Metrics mt;
    mt.pobj = c.dot(xx);
    mt.dobj = b.dot(yy);
    RVector rp = b - A * xx;
    RVector rd = c - At * yy - zz;
    mt.pinf = rp.norm() / (1.0 + b.norm());
    mt.dinf = rd.norm() / (1.0 + c.norm());
    double cz = 0;
    for (auto& cb : cones) cz += xx.segment(cb->offset(), cb->size()).dot(zz.segment(cb->offset(), cb->size()));
    mt.gap = cz;
    double denom = 1.0 + std::abs(mt.pobj) + std::abs(mt.dobj);
    mt.relgap = std::max(std::abs(cz), std::abs(mt.pobj - mt.dobj)) / denom;
    return mt;
  };

  Result res;
  RVector bestx = x, besty = y, bestz = z;
  double best_acc = std::numeric_limits<double>::infinity();
  Status status = Status::MaxIterations;
  double prev_step = 0.0;
  int tiny_steps = 0;
  int iter = 0;

  RVector rhs_free(nf), dy, dxf, P(N), hr(N), dx(N), dz(N);
  for (iter = 0; iter < opt.max_iterations; ++iter) {
    Metrics mt = metrics(x, y, z);
    if (mt.accuracy() < best_acc) {
      best_acc = mt.accuracy();
      bestx = x;
      besty = y;
      bestz = z;
    }
    if (opt.verbose)
      std::fprintf(stderr, "it %3d pobj % .10e dobj % .10e pinf %.2e dinf %.2e gap %.2e\n", iter, mt.pobj * cscale * bscale,
                   mt.dobj * cscale * bscale, mt.pinf, mt.dinf, mt.relgap);
    if (mt.relgap <= opt.tol && mt.pinf <= opt.tol && mt.dinf <= opt.tol) {
      status = Status::Optimal;
      break;
    }
    // Infeasibility certificates.
    {
      RVector aty = At * y;
      RVector atyz = aty + z;
      double by = b.dot(y);
      if (by > 0 && atyz.norm() / by < 1e-8 && y.norm() > 1e4) {
        status = Status::PrimalInfeasible;
        break;
      }
      double cx = c.dot(x);
      if (cx < 0 && (A * x).norm() / (-cx) < 1e-8 && x.norm() > 1e4) {
        status = Status::DualInfeasible;
        break;
      }
    }

    bool ok = true;
    for (auto& cb : cones) ok = ok && cb->load(x, z);
    if (!ok) {
      status = Status::NumericalError;
      break;
    }
    const double mu = mt.gap / nu;

    RMatrix M = RMatrix::Zero(m, m);
    for (auto& cb : cones) cb->add_schur(M);
    M = (0.5 * (M + M.transpose())).eval();
    KktSolver kkt;
    kkt.factor(std::move(M), Af);

    RVector rp = b - A * x;
    RVector rd = c - At * y - z;
    for (int j = 0; j < nf; ++j) rhs_free(j) = rd(free_cols[j]);
    RVector rdk = rd;
    for (int j : free_cols) rdk(j) = 0.0;
    RVector Hrd = RVector::Zero(N);
    for (auto& cb : cones) cb->apply_h(rdk, Hrd);

    auto direction = [&](double sigma_mu, const RVector* dxa, const RVector* dza, RVector& ddx, RVector& ddy,
                         RVector& ddz) {
      P.setZero();
      for (auto& cb : cones) cb->rhs_p(sigma_mu, dxa, dza, P);
      RVector h = rp - A * P + A * Hrd;
      RVector dyy, dff;
      kkt.solve(h, rhs_free, dyy, dff);
      ddy = dyy;
      ddz = rdk - At * dyy;
      for (int j : free_cols) ddz(j) = 0.0;
      RVector Hdz = RVector::Zero(N);
      for (auto& cb : cones) cb->apply_h(ddz, Hdz);
      ddx = P - Hdz;
      for (int j = 0; j < nf; ++j) ddx(free_cols[j]) = dff(j);
      // Refine against the primal equation A dx = rp; M is only an approximation of A H A^T.
      const RVector zero_free = RVector::Zero(nf);
      double rnorm = (rp - A * ddx).norm();
      for (int it = 0; it < 4 && rnorm > 0; ++it) {
        RVector r = rp - A * ddx;
        RVector ey, ef;
        kkt.solve(r, zero_free, ey, ef);
        RVector ez = -(At * ey);
        for (int j : free_cols) ez(j) = 0.0;
        RVector Hez = RVector::Zero(N);
        for (auto& cb : cones) cb->apply_h(ez, Hez);
        RVector tx = ddx - Hez;
        for (int j = 0; j < nf; ++j) tx(free_cols[j]) += ef(j);
        const double tnorm = (rp - A * tx).norm();
        if (!(tnorm < 0.5 * rnorm)) break;
        ddx = tx;
        ddy += ey;
        ddz += ez;
        rnorm = tnorm;
      }
    };

    auto steps = [&](const RVector& ddx, const RVector& ddz, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = std::numeric_limits<double>::infinity();
      for (auto& cb : cones) {
        ap = std::min(ap, cb->max_step_x(ddx));
        ad = std::min(ad, cb->max_step_z(ddz));
      }
    };

    // Predictor.
    RVector dxa, dya, dza;
    direction(0.0, nullptr, nullptr, dxa, dya, dza);
    double apa, ada;
    steps(dxa, dza, apa, ada);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double mu_aff = 0;
    for (auto& cb : cones) {
      RVector xs = x.segment(cb->offset(), cb->size()) + apa * dxa.segment(cb->offset(), cb->size());
      RVector zs = z.segment(cb->offset(), cb->size()) + ada * dza.segment(cb->offset(), cb->size());
      mu_aff += xs.dot(zs);
    }
    mu_aff /= nu;
    double expon = std::max(1.0, 3.0 * std::pow(std::min(apa, ada), 2));
    double sigma = mu > 0 ? std::min(1.0, std::pow(std::max(0.0, mu_aff / mu), expon)) : 0.0;

    direction(sigma * mu, &dxa, &dza, dx, dy, dz);
    double ap, ad;
    steps(dx, dz, ap, ad);
    const double gamma = 0.9 + 0.09 * prev_step;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad) || !dx.allFinite() || !dz.allFinite() || !dy.allFinite()) {
      status = Status::NumericalError;
      break;
    }
    x += ap * dx;
    y += ad * dy;
    z += ad * dz;
    prev_step = std::min(ap, ad);
    if (prev_step < 1e-7) {
      if (++tiny_steps >= 3) {
        status = Status::NumericalError;
        break;
      }
    } else {
      tiny_steps = 0;
    }
  }
  if (iter >= opt.max_iterations) status = Status::MaxIterations;

  if (status == Status::MaxIterations || status == Status::NumericalError) {
    x = bestx;
    y = besty;
    z = bestz;
  }
  Metrics fm = metrics(x, y, z);
  if (status != Status::Optimal && status != Status::PrimalInfeasible && status != Status::DualInfeasible &&
      fm.accuracy() <= opt.tol)
    status = Status::Optimal;

  // Undo scaling.
  res.status = status;
  res.iterations = iter;
  res.x = x * bscale;
  res.z = z * cscale;
  res.y = RVector::Zero(m0);
  for (int i = 0; i < m; ++i) res.y(keep[i]) = y(i) * cscale / rownorm(keep[i]);
  res.primal_objective = prob.c.dot(res.x) + prob.objective_offset;
  res.dual_objective = prob.b.dot(res.y) + prob.objective_offset;
  res.relative_gap = fm.relgap;
  res.primal_infeasibility = fm.pinf;
  res.dual_infeasibility = fm.dinf;
  return res;
}

namespace {

// Restriction to real symmetric matrices when the data is conjugation invariant.
struct RealRestriction {
  bool applicable = false;
  Problem reduced;
  std::vector<int> col_map;  // reduced column -> original column
  std::vector<int> row_map;  // reduced row -> original row
};

RealRestriction try_real_restriction(const Problem& p) {
  RealRestriction rr;
  const std::vector<int> offs = p.offsets();
  const int N = p.num_vars();
  std::vector<char> imag(N, 0);
  bool any_herm = false;
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind != BlockKind::Hermitian) continue;
    any_herm = true;
    const int n = p.blocks[k].n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < j; ++i) imag[offs[k] + hvec::im(i, j)] = 1;
  }
  if (!any_herm) return rr;
  const double cmax = std::max(1.0, p.c.cwiseAbs().maxCoeff());
  for (int k = 0; k < N; ++k)
    if (imag[k] && std::abs(p.c(k)) > 1e-14 * cmax) return rr;
  const int m = static_cast<int>(p.A.rows());
  std::vector<char> has_re(m, 0), has_im(m, 0);
  for (int k = 0; k < p.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(p.A, k); it; ++it) {
      if (it.value() == 0.0) continue;
      (imag[k] ? has_im : has_re)[it.row()] = 1;
    }
  const double bmax = std::max(1.0, p.b.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i) {
    if (has_re[i] && has_im[i]) return rr;
    if (has_im[i] && std::abs(p.b(i)) > 1e-14 * bmax) return rr;
  }
  std::vector<int> newcol(N, -1);
  for (int k = 0; k < N; ++k)
    if (!imag[k]) {
      newcol[k] = static_cast<int>(rr.col_map.size());
      rr.col_map.push_back(k);
    }
  std::vector<int> newrow(m, -1);
  for (int i = 0; i < m; ++i)
    if (!has_im[i]) {
      newrow[i] = static_cast<int>(rr.row_map.size());
      rr.row_map.push_back(i);
    }
  Problem& q = rr.reduced;
  q.blocks = p.blocks;
  for (auto& bl : q.blocks)
    if (bl.kind == BlockKind::Hermitian) bl.kind = BlockKind::Symmetric;
  std::vector<Triplet> trips;
  for (int k = 0; k < p.A.outerSize(); ++k) {
    if (newcol[k] < 0) continue;
    for (SparseMatrix::InnerIterator it(p.A, k); it; ++it)
      if (newrow[it.row()] >= 0) trips.emplace_back(newrow[it.row()], newcol[k], it.value());
  }
  q.A.resize(static_cast<int>(rr.row_map.size()), static_cast<int>(rr.col_map.size()));
  q.A.setFromTriplets(trips.begin(), trips.end());
  q.b.resize(static_cast<int>(rr.row_map.size()));
  for (size_t i = 0; i < rr.row_map.size(); ++i) q.b(i) = p.b(rr.row_map[i]);
  q.c.resize(static_cast<int>(rr.col_map.size()));
  for (size_t k = 0; k < rr.col_map.size(); ++k) q.c(k) = p.c(rr.col_map[k]);
  q.objective_offset = p.objective_offset;
  rr.applicable = true;
  return rr;
}

// Reformulation in which slack blocks defined by equality rows are eliminated
// and the problem is solved through its dual.
struct DualForm {
  bool applicable = false;
  Problem problem;
  std::vector<int> u_cols;          // original columns kept as dual variables
  std::vector<int> slack_cols;      // original slack columns, in new primal block order
  std::vector<int> slack_def_row;   // defining row for each slack column
  std::vector<int> other_rows;      // remaining original rows
  RVector s0;                       // slack = s0 - G u
  SparseMatrix G;                   // |slack| x |u|
  std::vector<int> cone_u_blocks;   // original block index of each cone block among u
  int primal_size = 0, dual_size = 0;
};

DualForm build_dual_form(const Problem& p) {
  DualForm df;
  const std::vector<int> offs = p.offsets();
  const int N = p.num_vars();
  const int m = static_cast<int>(p.A.rows());
  RowSparse Ar = p.A;
  std::vector<int> order(p.blocks.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return p.blocks[a].size() > p.blocks[b].size(); });
  std::vector<int> block_of(N);
  for (size_t k = 0; k < p.blocks.size(); ++k)
    for (int i = offs[k]; i < offs[k + 1]; ++i) block_of[i] = static_cast<int>(k);
  std::vector<char> slack_block(p.blocks.size(), 0);
  std::vector<int> def_row(N, -1);
  std::vector<char> row_used(m, 0);
  for (int k : order) {
    const Block& bl = p.blocks[k];
    if (!bl.conic()) continue;
    std::vector<int> chosen(bl.size(), -1);
    bool okb = true;
    std::vector<int> claimed;
    for (int col = offs[k]; col < offs[k + 1] && okb; ++col) {
      int pick = -1;
      for (SparseMatrix::InnerIterator it(p.A, col); it; ++it) {
        if (row_used[it.row()]) {
          // The column appears in a row defining an earlier slack.
          okb = false;
          break;
        }
      }
      if (!okb) break;
      for (SparseMatrix::InnerIterator it(p.A, col); it && pick < 0; ++it) {
        const int r = static_cast<int>(it.row());
        if (std::find(claimed.begin(), claimed.end(), r) != claimed.end()) continue;
        bool single = true;
        for (RowSparse::InnerIterator jt(Ar, r); jt; ++jt) {
          const int cc = static_cast<int>(jt.col());
          if (cc == col) continue;
          if (block_of[cc] == k || slack_block[block_of[cc]]) {
            single = false;
            break;
          }
        }
        if (single && std::abs(it.value()) > 1e-12) pick = r;
      }
      if (pick < 0) {
        okb = false;
        break;
      }
      chosen[col - offs[k]] = pick;
      claimed.push_back(pick);
    }
    if (!okb) continue;
    slack_block[k] = 1;
    for (int col = offs[k]; col < offs[k + 1]; ++col) {
      def_row[col] = chosen[col - offs[k]];
      row_used[def_row[col]] = 1;
    }
  }
  int nslack = 0;
  for (size_t k = 0; k < p.blocks.size(); ++k)
    if (slack_block[k]) nslack += p.blocks[k].size();
  if (nslack == 0) return df;

  std::vector<int> ucol(N, -1);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (slack_block[k]) {
      for (int i = offs[k]; i < offs[k + 1]; ++i) df.slack_cols.push_back(i);
    } else {
      for (int i = offs[k]; i < offs[k + 1]; ++i) {
        ucol[i] = static_cast<int>(df.u_cols.size());
        df.u_cols.push_back(i);
      }
    }
  }
  for (int i = 0; i < m; ++i)
    if (!row_used[i]) df.other_rows.push_back(i);
  const int nu = static_cast<int>(df.u_cols.size());
  const int ns = static_cast<int>(df.slack_cols.size());
  const int no = static_cast<int>(df.other_rows.size());
  int nfree_u = 0;
  for (size_t k = 0; k < p.blocks.size(); ++k)
    if (!slack_block[k] && !p.blocks[k].conic()) nfree_u += p.blocks[k].size();
  int nfree_orig = 0;
  for (const auto& bl : p.blocks)
    if (!bl.conic()) nfree_orig += bl.size();
  df.primal_size = m + nfree_orig;
  df.dual_size = nu + no;
  (void)nfree_u;

  // slack_k = (b_r - sum_j a_rj u_j) / a_rk.
  std::vector<int> slack_index(N, -1);
  for (int s = 0; s < ns; ++s) slack_index[df.slack_cols[s]] = s;
  df.s0.resize(ns);
  std::vector<Triplet> gt;
  for (int s = 0; s < ns; ++s) {
    const int col = df.slack_cols[s];
    const int r = def_row[col];
    df.slack_def_row.push_back(r);
    double ark = p.A.coeff(r, col);
    df.s0(s) = p.b(r) / ark;
    for (RowSparse::InnerIterator jt(Ar, r); jt; ++jt) {
      if (jt.col() == col) continue;
      gt.emplace_back(s, ucol[jt.col()], jt.value() / ark);
    }
  }
  df.G.resize(ns, nu);
  df.G.setFromTriplets(gt.begin(), gt.end());

  // Remaining rows: E u = f with E = A_ou - A_os G, f = b_o - A_os s0.
  std::vector<Triplet> aou, aos;
  for (int oi = 0; oi < no; ++oi) {
    const int r = df.other_rows[oi];
    for (RowSparse::InnerIterator jt(Ar, r); jt; ++jt) {
      if (ucol[jt.col()] >= 0)
        aou.emplace_back(oi, ucol[jt.col()], jt.value());
      else
        aos.emplace_back(oi, slack_index[jt.col()], jt.value());
    }
  }
  SparseMatrix Aou(no, nu), Aos(no, ns);
  Aou.setFromTriplets(aou.begin(), aou.end());
  Aos.setFromTriplets(aos.begin(), aos.end());
  SparseMatrix E = Aou - SparseMatrix(Aos * df.G);
  E.prune(1e-15, 1.0);
  RVector bo(no);
  for (int oi = 0; oi < no; ++oi) bo(oi) = p.b(df.other_rows[oi]);
  RVector f = bo - Aos * df.s0;

  RVector cu(nu), cs(ns);
  for (int j = 0; j < nu; ++j) cu(j) = p.c(df.u_cols[j]);
  for (int s = 0; s < ns; ++s) cs(s) = p.c(df.slack_cols[s]);
  RVector q = cu - df.G.transpose() * cs;

  // New primal: blocks = slack blocks, cone u blocks, one free block for E.
  Problem& np = df.problem;
  std::vector<Triplet> at;  // rows: u (nu), columns: new primal variables
  int col = 0;
  RVector cnew(ns + nu + no);
  cnew.setZero();
  SparseMatrix Gt = df.G.transpose();
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (!slack_block[k]) continue;
    np.blocks.push_back(p.blocks[k]);
    for (int i = offs[k]; i < offs[k + 1]; ++i, ++col) {
      int s = slack_index[i];
      cnew(col) = df.s0(s);
      for (SparseMatrix::InnerIterator it(Gt, s); it; ++it) at.emplace_back(it.row(), col, it.value());
    }
  }
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (slack_block[k] || !p.blocks[k].conic()) continue;
    np.blocks.push_back(p.blocks[k]);
    df.cone_u_blocks.push_back(static_cast<int>(k));
    for (int i = offs[k]; i < offs[k + 1]; ++i, ++col) at.emplace_back(ucol[i], col, -1.0);
  }
  if (no > 0) {
    np.blocks.push_back(Block{BlockKind::Free, no});
    SparseMatrix Et = E.transpose();
    for (int oi = 0; oi < no; ++oi, ++col) {
      cnew(col) = f(oi);
      for (SparseMatrix::InnerIterator it(Et, oi); it; ++it) at.emplace_back(it.row(), col, it.value());
    }
  }
  cnew.conservativeResize(col);
  np.A.resize(nu, col);
  np.A.setFromTriplets(at.begin(), at.end());
  np.b = -q;
  np.c = cnew;
  np.objective_offset = 0.0;
  df.applicable = true;
  return df;
}

void finalize_metrics(const Problem& p, Result& r) {
  RVector rp = p.b - p.A * r.x;
  RVector rd = p.c - p.A.transpose() * r.y - r.z;
  r.primal_infeasibility = rp.norm() / (1.0 + p.b.norm());
  r.dual_infeasibility = rd.norm() / (1.0 + p.c.norm());
  r.primal_objective = p.c.dot(r.x) + p.objective_offset;
  r.dual_objective = p.b.dot(r.y) + p.objective_offset;
  double denom = 1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective);
  r.relative_gap = std::abs(r.primal_objective - r.dual_objective) / denom;
}

Result solve_form(const Problem& p, const Options& opt) {
  if (opt.form != Form::Primal) {
    DualForm df = build_dual_form(p);
    bool use = df.applicable &&
               (opt.form == Form::Dual || static_cast<double>(df.dual_size) < 0.8 * df.primal_size);
    if (use) {
      Result inner = solve_direct(df.problem, opt);
      Result r;
      r.used_dual_form = true;
      r.iterations = inner.iterations;
      switch (inner.status) {
        case Status::PrimalInfeasible: r.status = Status::DualInfeasible; break;
        case Status::DualInfeasible: r.status = Status::PrimalInfeasible; break;
        default: r.status = inner.status;
      }
      const int N = p.num_vars();
      const int nu = static_cast<int>(df.u_cols.size());
      const int ns = static_cast<int>(df.slack_cols.size());
      r.x = RVector::Zero(N);
      RVector u = inner.y;
      for (int j = 0; j < nu; ++j) r.x(df.u_cols[j]) = u(j);
      RVector s = df.s0 - df.G * u;
      for (int k = 0; k < ns; ++k) r.x(df.slack_cols[k]) = s(k);
      // Multipliers: remaining rows carry -lambda; defining rows are fixed by z_s = w.
      const int m = static_cast<int>(p.A.rows());
      r.y = RVector::Zero(m);
      const int no = static_cast<int>(df.other_rows.size());
      const RVector& xin = inner.x;
      const int lam_off = static_cast<int>(xin.size()) - no;
      for (int oi = 0; oi < no; ++oi) r.y(df.other_rows[oi]) = -xin(lam_off + oi);
      RVector aty_other = p.A.transpose() * r.y;
      for (int k = 0; k < ns; ++k) {
        const int col = df.slack_cols[k];
        const int row = df.slack_def_row[k];
        double w = xin(k);
        r.y(row) = (p.c(col) - w - aty_other(col)) / p.A.coeff(row, col);
      }
      r.z = p.c - p.A.transpose() * r.y;
      std::vector<char> conic(N, 0);
      const std::vector<int> offs = p.offsets();
      for (size_t k = 0; k < p.blocks.size(); ++k)
        if (p.blocks[k].conic())
          for (int i = offs[k]; i < offs[k + 1]; ++i) conic[i] = 1;
      // z on slack coordinates equals w exactly; on cone u blocks use the inner dual block values.
      for (int k = 0; k < ns; ++k) r.z(df.slack_cols[k]) = xin(k);
      {
        int pos = ns;
        for (int bk : df.cone_u_blocks)
          for (int i = offs[bk]; i < offs[bk + 1]; ++i, ++pos) r.z(i) = xin(pos);
      }
      for (int i = 0; i < N; ++i)
        if (!conic[i]) r.z(i) = 0.0;
      finalize_metrics(p, r);
      return r;
    }
  }
  Result r = solve_direct(p, opt);
  finalize_metrics(p, r);
  return r;
}

}  // namespace

Result solve(const Problem& p, const Options& opt) {
  p.validate();
  if (opt.real_restriction) {
    RealRestriction rr = try_real_restriction(p);
    if (rr.applicable) {
      Result inner = solve_form(rr.reduced, opt);
      Result r = inner;
      r.used_real_restriction = true;
      r.x = RVector::Zero(p.num_vars());
      r.z = RVector::Zero(p.num_vars());
      r.y = RVector::Zero(p.A.rows());
      for (size_t k = 0; k < rr.col_map.size(); ++k) {
        r.x(rr.col_map[k]) = inner.x(k);
        r.z(rr.col_map[k]) = inner.z(k);
      }
      for (size_t i = 0; i < rr.row_map.size(); ++i) r.y(rr.row_map[i]) = inner.y(i);
      finalize_metrics(p, r);
      return r;
    }
  }
  return solve_form(p, opt);
}

}  // namespace regent::sdp
