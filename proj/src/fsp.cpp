#include "regent/conic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>

namespace regent::conic {

void gauss_legendre01(int m, RVector& nodes, RVector& weights) {
  if (m < 1) throw DomainError("quadrature needs at least one node");
  RMatrix J = RMatrix::Zero(m, m);
  for (int i = 1; i < m; ++i) {
    double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(J);
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    nodes(i) = 0.5 * (es.eigenvalues()(i) + 1.0);
    double v = es.eigenvectors()(0, i);
    weights(i) = v * v;  // weights on [-1,1] are 2 v^2; halved for [0,1]
  }
}

double log_approx(double x, ApproxOrder order) {
  RVector t, w;
  gauss_legendre01(order.quad, t, w);
  double z = x;
  for (int i = 0; i < order.sqrt_steps; ++i) z = std::sqrt(z);
  double s = 0;
  for (int j = 0; j < order.quad; ++j) s += w(j) * (z - 1.0) / (1.0 + t(j) * (z - 1.0));
  return std::ldexp(s, order.sqrt_steps);
}

namespace {

// Affine Hermitian expression of dimension n: constant + sum scale * map * x[col : col + map.cols()).
struct HExpr {
  int n = 0;
  RVector constant;
  struct Term {
    int col;
    SparseMatrix map;
    double scale;
  };
  std::vector<Term> terms;

  static HExpr zero(int n) {
    HExpr e;
    e.n = n;
    e.constant = RVector::Zero(hvec::size(n));
    return e;
  }
  static HExpr constant_of(const CMatrix& m) {
    HExpr e = zero(static_cast<int>(m.rows()));
    e.constant = hvec::pack(m);
    return e;
  }
  static HExpr variable(int n, int col) {
    HExpr e = zero(n);
    SparseMatrix id(hvec::size(n), hvec::size(n));
    id.setIdentity();
    e.terms.push_back({col, id, 1.0});
    return e;
  }
  HExpr& add(const HExpr& o, double s = 1.0) {
    constant += s * o.constant;
    for (const auto& t : o.terms) terms.push_back({t.col, t.map, t.scale * s});
    return *this;
  }
};

HExpr operator+(HExpr a, const HExpr& b) { return a.add(b, 1.0); }
HExpr operator-(HExpr a, const HExpr& b) { return a.add(b, -1.0); }
HExpr operator*(double s, const HExpr& a) { return HExpr::zero(a.n).add(a, s); }

class Lowerer {
 public:
  explicit Lowerer(int ncols_hint = 0) { trips_.reserve(ncols_hint); }

  int add_block(sdp::BlockKind kind, int n) {
    blocks_.push_back({kind, n});
    int off = ncols_;
    ncols_ += blocks_.back().size();
    return off;
  }
  int add_rows(int count, const RVector& rhs) {
    int r = nrows_;
    nrows_ += count;
    rhs_.insert(rhs_.end(), rhs.data(), rhs.data() + count);
    return r;
  }
  void entry(int row, int col, double v) {
    if (v != 0.0) trips_.emplace_back(row, col, v);
  }
  void add(int row, int col, const SparseMatrix& M, double scale) {
    for (int k = 0; k < M.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(M, k); it; ++it) entry(row + it.row(), col + k, scale * it.value());
  }

  // Emits rows hvec(S) = sum_i emb_i(expr_i) for a new PSD block S of dimension 2n.
  void lmi2(const HExpr& a, const HExpr& b, const HExpr& c) {
    const int n = a.n;
    const Emb& E = embeddings(n);
    const int S = add_block(sdp::BlockKind::Hermitian, 2 * n);
    const int rows = hvec::size(2 * n);
    RVector rhs = E.a * a.constant + E.b * b.constant + E.c * c.constant;
    const int r0 = add_rows(rows, rhs);
    for (int k = 0; k < rows; ++k) entry(r0 + k, S + k, 1.0);
    auto emit = [&](const SparseMatrix& emb, const HExpr& e) {
      for (const auto& t : e.terms) {
        SparseMatrix M = emb * t.map;
        add(r0, t.col, M, -t.scale);
      }
    };
    emit(E.a, a);
    emit(E.b, b);
    emit(E.c, c);
  }

  // Emits rows hvec(S) = expr for a new PSD block S.
  void lmi1(const HExpr& a) {
    const int n = a.n;
    const int S = add_block(n == 1 ? sdp::BlockKind::Nonneg : sdp::BlockKind::Hermitian, n);
    const int rows = hvec::size(n);
    const int r0 = add_rows(rows, a.constant);
    for (int k = 0; k < rows; ++k) entry(r0 + k, S + k, 1.0);
    for (const auto& t : a.terms) add(r0, t.col, t.map, -t.scale);
  }

  // L <= P_r(X, Y) with L = 2^k sum_j w_j T_j. Returns the columns of T_j.
  // With `floor`, also imposes T_j >= -X / (1 - t_j), which the largest feasible T_j always satisfies.
  // Both cone kinds only ever need the largest T_j, so the cut keeps every optimum.
  std::vector<int> hypograph(const HExpr& X, const HExpr& Y, ApproxOrder ord, RVector& weights, bool floor) {
    const int n = X.n;
    const int N = hvec::size(n);
    RVector t, w;
    gauss_legendre01(ord.quad, t, w);
    std::vector<int> zcols;
    for (int i = 0; i < ord.sqrt_steps; ++i) zcols.push_back(add_block(sdp::BlockKind::Free, N));
    std::vector<int> tcols;
    for (int j = 0; j < ord.quad; ++j) tcols.push_back(add_block(sdp::BlockKind::Free, N));
    HExpr prev = Y;
    for (int i = 0; i < ord.sqrt_steps; ++i) {
      HExpr zi = HExpr::variable(n, zcols[i]);
      lmi2(prev, zi, X);
      prev = zi;
    }
    for (int j = 0; j < ord.quad; ++j) {
      HExpr tj = HExpr::variable(n, tcols[j]);
      lmi2(prev - X - tj, -std::sqrt(t(j)) * tj, X - t(j) * tj);
      if (floor) lmi1(tj + (1.0 / (1.0 - t(j))) * X);
    }
    weights = std::ldexp(1.0, ord.sqrt_steps) * w;
    return tcols;
  }

  sdp::Problem finish(const RVector& c_prefix, double offset) {
    sdp::Problem p;
    p.blocks = blocks_;
    p.A.resize(nrows_, ncols_);
    p.A.setFromTriplets(trips_.begin(), trips_.end());
    p.b = Eigen::Map<const RVector>(rhs_.data(), nrows_);
    p.c = RVector::Zero(ncols_);
    p.c.head(c_prefix.size()) = c_prefix;
    p.objective_offset = offset;
    return p;
  }

  int num_cols() const { return ncols_; }

 private:
  struct Emb {
    SparseMatrix a, b, c;
  };
  const Emb& embeddings(int n) {
    auto it = emb_.find(n);
    if (it != emb_.end()) return it->second;
    Emb e;
    e.a = linear_map_matrix(n, 2 * n, [n](const CMatrix& x) {
      CMatrix r = CMatrix::Zero(2 * n, 2 * n);
      r.topLeftCorner(n, n) = x;
      return r;
    });
    e.b = linear_map_matrix(n, 2 * n, [n](const CMatrix& x) {
      CMatrix r = CMatrix::Zero(2 * n, 2 * n);
      r.topRightCorner(n, n) = x;
      r.bottomLeftCorner(n, n) = x.adjoint();
      return r;
    });
    e.c = linear_map_matrix(n, 2 * n, [n](const CMatrix& x) {
      CMatrix r = CMatrix::Zero(2 * n, 2 * n);
      r.bottomRightCorner(n, n) = x;
      return r;
    });
    return emb_.emplace(n, std::move(e)).first->second;
  }

  std::vector<sdp::Block> blocks_;
  int ncols_ = 0;
  int nrows_ = 0;
  std::vector<Triplet> trips_;
  std::vector<double> rhs_;
  std::map<int, Emb> emb_;
};

double entropy_term(const CMatrix& rho) {
  // tr rho ln rho
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double v = es.eigenvalues()(i);
    if (v > 0) s += v * std::log(v);
  }
  return s;
}

}  // namespace

sdp::Problem lower(const ConicProgram& p, ApproxOrder order) {
  p.validate();
  Lowerer L;
  const std::vector<int> offs = p.offsets();
  // Program coordinates first, in order.
  for (const auto& b : p.blocks) {
    switch (b.kind) {
      case ConeKind::Psd:
        L.add_block(b.n == 1 ? sdp::BlockKind::Nonneg : sdp::BlockKind::Hermitian, b.n);
        break;
      case ConeKind::Nonneg: L.add_block(sdp::BlockKind::Nonneg, b.n); break;
      case ConeKind::Free: L.add_block(sdp::BlockKind::Free, b.n); break;
      case ConeKind::Qre:
      case ConeKind::Ore: L.add_block(sdp::BlockKind::Free, b.size()); break;
    }
  }
  // Program equalities.
  if (p.E.rows() > 0) {
    L.add_rows(static_cast<int>(p.E.rows()), p.b);
    L.add(0, 0, p.E, 1.0);
  }
  // Entropy cones.
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    const ConeSpec& b = p.blocks[k];
    if (b.kind != ConeKind::Qre && b.kind != ConeKind::Ore) continue;
    const int n = b.n;
    const int base = offs[k];
    const int ycol = base + b.y_offset();
    const int tcol = base + b.t_offset();
    RVector w;
    if (b.kind == ConeKind::Qre) {
      if (b.fixed_first) {
        const CMatrix& rho = *b.fixed_first;
        HExpr X = HExpr::constant_of(CMatrix::Identity(n, n));
        HExpr Y = HExpr::variable(n, ycol);
        std::vector<int> tc = L.hypograph(X, Y, order, w, true);
        // t + sum_j w_j tr(rho T_j) - s = tr rho ln rho
        int s = L.add_block(sdp::BlockKind::Nonneg, 1);
        RVector rhs(1);
        rhs(0) = entropy_term(rho);
        int r = L.add_rows(1, rhs);
        L.entry(r, tcol, 1.0);
        L.entry(r, s, -1.0);
        RVector hr = hvec::pack(rho);
        for (size_t j = 0; j < tc.size(); ++j)
          for (int q = 0; q < hr.size(); ++q) L.entry(r, tc[j] + q, w(j) * hr(q));
      } else {
        const int N = n * n;
        SparseMatrix kx = linear_map_matrix(n, N, [n](const CMatrix& x) {
          return kron(x, CMatrix(CMatrix::Identity(n, n)));
        });
        SparseMatrix ky = linear_map_matrix(n, N, [n](const CMatrix& y) {
          return kron(CMatrix(CMatrix::Identity(n, n)), CMatrix(y.conjugate()));
        });
        HExpr X = HExpr::zero(N);
        X.terms.push_back({base, kx, 1.0});
        HExpr Y = HExpr::zero(N);
        Y.terms.push_back({ycol, ky, 1.0});
        std::vector<int> tc = L.hypograph(X, Y, order, w, true);
        CVector e = max_entangled_vector(n);
        RVector he = hvec::pack(e * e.adjoint());
        int s = L.add_block(sdp::BlockKind::Nonneg, 1);
        RVector rhs = RVector::Zero(1);
        int r = L.add_rows(1, rhs);
        L.entry(r, tcol, 1.0);
        L.entry(r, s, -1.0);
        for (size_t j = 0; j < tc.size(); ++j)
          for (int q = 0; q < he.size(); ++q) L.entry(r, tc[j] + q, w(j) * he(q));
      }
    } else {
      HExpr X = b.fixed_first ? HExpr::constant_of(*b.fixed_first) : HExpr::variable(n, base);
      HExpr Y = HExpr::variable(n, ycol);
      std::vector<int> tc = L.hypograph(X, Y, order, w, true);
      // T + L >= 0
      HExpr S = HExpr::variable(n, tcol);
      for (size_t j = 0; j < tc.size(); ++j) S.add(HExpr::variable(n, tc[j]), w(j));
      L.lmi1(S);
    }
  }
  return L.finish(p.c, p.offset);
}

}  // namespace regent::conic
