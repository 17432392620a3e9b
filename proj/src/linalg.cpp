#include "regent/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace regent {

namespace {

void check_subsystems(int dim, const std::vector<int>& subsystems) {
  if (subsystems.empty()) return;
  long prod = 1;
  for (int s : subsystems) {
    if (s < 1) throw DomainError("subsystem dimensions must be positive");
    prod *= s;
  }
  if (prod != dim) throw DomainError("subsystem dimensions do not multiply to the matrix dimension");
}

CMatrix symmetrize(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("Hermitian operator must be square");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) throw DomainError("matrix is not Hermitian");
  return 0.5 * (m + m.adjoint());
}

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> st(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) st[i] = st[i + 1] * dims[i + 1];
  return st;
}

}  // namespace

HermitianOperator::HermitianOperator(const CMatrix& m, std::vector<int> subsystems)
    : m_(symmetrize(m)), subsystems_(std::move(subsystems)) {
  check_subsystems(dim(), subsystems_);
}

HermitianOperator::HermitianOperator(const RMatrix& m, std::vector<int> subsystems)
    : HermitianOperator(CMatrix(m.cast<cd>()), std::move(subsystems)) {}

HermitianOperator HermitianOperator::identity(int dim, std::vector<int> subsystems) {
  return HermitianOperator(CMatrix(CMatrix::Identity(dim, dim)), std::move(subsystems));
}

HermitianOperator HermitianOperator::zero(int dim, std::vector<int> subsystems) {
  return HermitianOperator(CMatrix(CMatrix::Zero(dim, dim)), std::move(subsystems));
}

HermitianOperator HermitianOperator::projector(const CVector& v, std::vector<int> subsystems) {
  return HermitianOperator(CMatrix(v * v.adjoint()), std::move(subsystems));
}

HermitianOperator HermitianOperator::diagonal(const RVector& d, std::vector<int> subsystems) {
  return HermitianOperator(CMatrix(d.cast<cd>().asDiagonal()), std::move(subsystems));
}

std::vector<int> HermitianOperator::factors() const {
  if (subsystems_.empty()) return {dim()};
  return subsystems_;
}

HermitianOperator HermitianOperator::with_subsystems(std::vector<int> subsystems) const {
  HermitianOperator r = *this;
  check_subsystems(dim(), subsystems);
  r.subsystems_ = std::move(subsystems);
  return r;
}

double HermitianOperator::trace() const { return m_.trace().real(); }

RVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianOperator::min_eigenvalue() const { return eigenvalues().minCoeff(); }
double HermitianOperator::max_eigenvalue() const { return eigenvalues().maxCoeff(); }

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw DomainError("dimension mismatch in addition");
  HermitianOperator r = *this;
  r.m_ += o.m_;
  return r;
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw DomainError("dimension mismatch in subtraction");
  HermitianOperator r = *this;
  r.m_ -= o.m_;
  return r;
}

HermitianOperator HermitianOperator::operator*(double s) const {
  HermitianOperator r = *this;
  r.m_ *= s;
  return r;
}

double HermitianOperator::inner(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw DomainError("dimension mismatch in inner product");
  return (m_.conjugate().cwiseProduct(o.m_)).sum().real();
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  if (op_.dim() < 1) throw DomainError("density operator must have positive dimension");
  if (op_.min_eigenvalue() < -1e-10) throw DomainError("density operator is not positive semidefinite");
  if (std::abs(op_.trace() - 1.0) > 1e-10) throw DomainError("density operator does not have unit trace");
}

DensityOperator DensityOperator::pure(const CVector& psi, std::vector<int> subsystems) {
  double n = psi.norm();
  if (n == 0.0) throw DomainError("zero state vector");
  return DensityOperator(HermitianOperator::projector(psi / n, std::move(subsystems)));
}

DensityOperator DensityOperator::maximally_mixed(int dim, std::vector<int> subsystems) {
  return DensityOperator(HermitianOperator::identity(dim, std::move(subsystems)) * (1.0 / dim));
}

QuantumChannel::QuantumChannel(std::vector<CMatrix> kraus, bool trace_preserving)
    : kraus_(std::move(kraus)), trace_preserving_(trace_preserving) {
  if (kraus_.empty()) throw DomainError("channel needs at least one Kraus operator");
  dim_out_ = static_cast<int>(kraus_[0].rows());
  dim_in_ = static_cast<int>(kraus_[0].cols());
  CMatrix sum = CMatrix::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_) throw DomainError("inconsistent Kraus operator shapes");
    sum += k.adjoint() * k;
  }
  if (trace_preserving_ && (sum - CMatrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("Kraus operators are not trace preserving");
}

CMatrix QuantumChannel::apply(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(dim_out_, dim_out_);
  for (const auto& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

CMatrix QuantumChannel::apply_adjoint(const CMatrix& y) const {
  CMatrix out = CMatrix::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) out.noalias() += k.adjoint() * y * k;
  return out;
}

HermitianOperator QuantumChannel::apply(const HermitianOperator& x) const {
  if (x.dim() != dim_in_) throw DomainError("channel input dimension mismatch");
  return HermitianOperator(apply(x.matrix()));
}

QuantumChannel QuantumChannel::tensor_power(int n) const {
  if (n < 1) throw DomainError("tensor power requires n >= 1");
  std::vector<CMatrix> ks = kraus_;
  for (int i = 1; i < n; ++i) {
    std::vector<CMatrix> next;
    next.reserve(ks.size() * kraus_.size());
    for (const auto& a : ks)
      for (const auto& b : kraus_) next.push_back(regent::kron(a, b));
    ks = std::move(next);
  }
  QuantumChannel c;
  c.kraus_ = std::move(ks);
  c.trace_preserving_ = trace_preserving_;
  c.dim_in_ = static_cast<int>(std::pow(dim_in_, n));
  c.dim_out_ = static_cast<int>(std::pow(dim_out_, n));
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

CMatrix tensor_power(const CMatrix& a, int n) {
  if (n < 1) throw DomainError("tensor power requires n >= 1");
  CMatrix r = a;
  for (int i = 1; i < n; ++i) r = kron(r, a);
  return r;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  std::vector<int> dims = a.factors();
  for (int d : b.factors()) dims.push_back(d);
  return HermitianOperator(kron(a.matrix(), b.matrix()), dims);
}

HermitianOperator tensor_power(const HermitianOperator& a, int n) {
  if (n < 1) throw DomainError("tensor power requires n >= 1");
  HermitianOperator r = a.with_subsystems(a.factors());
  for (int i = 1; i < n; ++i) r = kron(r, a);
  return r;
}

CMatrix partial_transpose(const CMatrix& x, const std::vector<int>& dims, const std::vector<int>& which) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> st = strides_of(dims);
  // For each index pair (i, j) swap the digits of the chosen factors between row and column.
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int ri = i, rj = j;
      for (int w : which) {
        int a = (i / st[w]) % dims[w];
        int b = (j / st[w]) % dims[w];
        ri += (b - a) * st[w];
        rj += (a - b) * st[w];
      }
      r(ri, rj) = x(i, j);
    }
  }
  return r;
}

HermitianOperator partial_transpose(const HermitianOperator& x, const std::vector<int>& subsystems) {
  if (x.subsystems().size() < 2) throw DomainError("partial transpose needs at least two subsystems");
  for (int s : subsystems)
    if (s < 0 || s >= static_cast<int>(x.subsystems().size())) throw DomainError("invalid subsystem index");
  return HermitianOperator(partial_transpose(x.matrix(), x.subsystems(), subsystems), x.subsystems());
}

HermitianOperator partial_transpose(const HermitianOperator& x, int subsystem) {
  return partial_transpose(x, std::vector<int>{subsystem});
}

CMatrix partial_trace(const CMatrix& x, const std::vector<int>& dims, int which) {
  std::vector<int> st = strides_of(dims);
  const int dw = dims[which];
  const int n = static_cast<int>(x.rows());
  const int nr = n / dw;
  // Map a reduced index to a full index with the traced digit set to zero.
  std::vector<int> base(nr);
  {
    std::vector<int> rdims;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k)
      if (k != which) rdims.push_back(dims[k]);
    std::vector<int> rst = strides_of(rdims);
    for (int r = 0; r < nr; ++r) {
      int full = 0, pos = 0;
      for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
        if (k == which) continue;
        int digit = (r / rst[pos]) % rdims[pos];
        full += digit * st[k];
        ++pos;
      }
      base[r] = full;
    }
  }
  CMatrix out = CMatrix::Zero(nr, nr);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nr; ++j) {
      cd s = 0;
      for (int k = 0; k < dw; ++k) s += x(base[i] + k * st[which], base[j] + k * st[which]);
      out(i, j) = s;
    }
  return out;
}

std::vector<int> copy_permutation_indices(int q, const std::vector<int>& perm) {
  const int m = static_cast<int>(perm.size());
  std::vector<int> seen(m, 0);
  for (int p : perm) {
    if (p < 0 || p >= m || seen[p]) throw DomainError("invalid copy permutation");
    seen[p] = 1;
  }
  int n = 1;
  for (int k = 0; k < m; ++k) n *= q;
  std::vector<int> st = strides_of(std::vector<int>(m, q));
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    int j = 0;
    for (int k = 0; k < m; ++k) j += ((i / st[perm[k]]) % q) * st[k];
    out[i] = j;
  }
  return out;
}

CMatrix permute_copies(const CMatrix& x, int q, const std::vector<int>& perm) {
  std::vector<int> idx = copy_permutation_indices(q, perm);
  const int n = static_cast<int>(idx.size());
  if (x.rows() != n || x.cols() != n) throw DomainError("matrix does not match the copy structure");
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(idx[i], idx[j]) = x(i, j);
  return r;
}

HermitianOperator partial_trace(const HermitianOperator& x, int subsystem) {
  const auto& dims = x.subsystems();
  if (dims.size() < 2) throw DomainError("partial trace needs at least two subsystems");
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size())) throw DomainError("invalid subsystem index");
  std::vector<int> rdims;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (k != subsystem) rdims.push_back(dims[k]);
  if (rdims.size() == 1) rdims.clear();
  return HermitianOperator(partial_trace(x.matrix(), dims, subsystem), rdims);
}

HermitianOperator matrix_function(const HermitianOperator& a, MatrixFunction f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  RVector ev = es.eigenvalues();
  const double maxev = ev.cwiseAbs().maxCoeff();
  const double cut = kRankTolerance * maxev;
  RVector fv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double x = ev(i);
    switch (f) {
      case MatrixFunction::Log: fv(i) = x > cut ? std::log2(x) : 0.0; break;
      case MatrixFunction::Ln: fv(i) = x > cut ? std::log(x) : 0.0; break;
      case MatrixFunction::Exp: fv(i) = std::exp2(x); break;
      case MatrixFunction::NaturalExp: fv(i) = std::exp(x); break;
      case MatrixFunction::Sqrt: fv(i) = x > 0 ? std::sqrt(x) : 0.0; break;
      case MatrixFunction::InverseOnSupport: fv(i) = x > cut ? 1.0 / x : 0.0; break;
    }
  }
  const CMatrix& v = es.eigenvectors();
  return HermitianOperator(CMatrix(v * fv.cast<cd>().asDiagonal() * v.adjoint()), a.subsystems());
}

Norms norms(const HermitianOperator& x) {
  RVector ev = x.eigenvalues();
  return {ev.cwiseAbs().sum(), ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0};
}

HermitianOperator support_projector(const HermitianOperator& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const RVector& ev = es.eigenvalues();
  const double cut = kRankTolerance * std::max(0.0, ev.maxCoeff());
  CMatrix p = CMatrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return HermitianOperator(p, rho.subsystems());
}

int numerical_rank(const HermitianOperator& rho) {
  RVector ev = rho.eigenvalues();
  const double cut = kRankTolerance * std::max(0.0, ev.maxCoeff());
  return static_cast<int>((ev.array() > cut).count());
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("dimension mismatch in fidelity");
  CMatrix a = matrix_function(rho, MatrixFunction::Sqrt).matrix();
  CMatrix b = matrix_function(sigma, MatrixFunction::Sqrt).matrix();
  Eigen::JacobiSVD<CMatrix> svd(a * b);
  return svd.singularValues().sum();
}

DensityOperator random_density(int dim, int rank, std::uint64_t seed, std::vector<int> subsystems) {
  if (dim < 1 || rank < 1 || rank > dim) throw DomainError("random_density requires 1 <= rank <= dim");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix g(dim, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < dim; ++i) {
      double re = nd(gen);
      double im = nd(gen);
      g(i, j) = cd(re, im);
    }
  CMatrix r = g * g.adjoint();
  r /= r.trace().real();
  return DensityOperator(HermitianOperator(r, std::move(subsystems)));
}

CMatrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      double re = nd(gen);
      double im = nd(gen);
      g(i, j) = cd(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cd d = rr(i, i);
    double ad = std::abs(d);
    if (ad > 0) q.col(i) *= d / ad;
  }
  return q;
}

HermitianOperator random_hermitian(int dim, std::uint64_t seed, std::vector<int> subsystems) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      double re = nd(gen);
      double im = nd(gen);
      g(i, j) = cd(re, im);
    }
  return HermitianOperator(CMatrix(0.5 * (g + g.adjoint())), std::move(subsystems));
}

CVector max_entangled_vector(int d) {
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v;
}

DensityOperator max_entangled_state(int d) {
  return DensityOperator::pure(max_entangled_vector(d), {d, d});
}

double log2_safe(double x) { return x > 0 ? std::log2(x) : -std::numeric_limits<double>::infinity(); }

double binary_entropy(double p) {
  auto term = [](double x) { return x > 0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

}  // namespace regent
