#include "regent/divergences.hpp"

#include "regent/conic.hpp"
#include "regent/sets.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace regent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportTolerance = 1e-8;

void check_psd(const HermitianOperator& sigma, int dim) {
  if (sigma.dim() != dim) throw DomainError("states have different dimensions");
  const RVector ev = sigma.eigenvalues();
  if (ev.minCoeff() < -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()))
    throw DomainError("second argument must be positive semidefinite");
}

DivergenceValue make(double v, DivergenceKind k) { return {v, k}; }

// Isometry onto the eigenvectors of a with eigenvalue above the rank tolerance.
CMatrix support_basis(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  const RVector& ev = es.eigenvalues();
  const double cut = kRankTolerance * std::max(0.0, ev.maxCoeff());
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) keep.push_back(static_cast<int>(i));
  CMatrix v(a.dim(), static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  return v;
}

bool commute(const HermitianOperator& a, const HermitianOperator& b) {
  const CMatrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  const double scale = std::max(1.0, a.matrix().norm() * b.matrix().norm());
  return c.norm() <= 1e-12 * scale;
}

}  // namespace

std::string to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::Umegaki: return "umegaki";
    case DivergenceKind::Min: return "min";
    case DivergenceKind::Max: return "max";
    case DivergenceKind::Measured: return "measured";
    case DivergenceKind::MeasuredHalf: return "measured-half";
  }
  return "unknown";
}

DivergenceKind divergence_kind_from_string(const std::string& s) {
  if (s == "umegaki") return DivergenceKind::Umegaki;
  if (s == "min") return DivergenceKind::Min;
  if (s == "max") return DivergenceKind::Max;
  if (s == "measured") return DivergenceKind::Measured;
  if (s == "measured-half" || s == "measured_half") return DivergenceKind::MeasuredHalf;
  throw DomainError("unknown divergence kind: " + s);
}

bool DivergenceValue::is_infinite() const { return std::isinf(value); }

bool support_contained(const HermitianOperator& rho, const HermitianOperator& sigma) {
  const CMatrix pr = support_projector(rho).matrix();
  const CMatrix ps = support_projector(sigma).matrix();
  const CMatrix m = (CMatrix::Identity(rho.dim(), rho.dim()) - ps) * pr;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().size() == 0 || svd.singularValues()(0) <= kSupportTolerance;
}

double classical_kl(const RVector& p, const RVector& q) {
  if (p.size() != q.size()) throw DomainError("distributions have different lengths");
  double s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0) continue;
    if (q(i) <= 0) return kInf;
    s += p(i) * std::log2(p(i) / q(i));
  }
  return s;
}

DivergenceValue umegaki(const DensityOperator& rho, const HermitianOperator& sigma) {
  check_psd(sigma, rho.dim());
  if (!support_contained(rho, sigma)) return make(kInf, DivergenceKind::Umegaki);
  const CMatrix lr = matrix_function(rho, MatrixFunction::Log).matrix();
  const CMatrix ls = matrix_function(sigma, MatrixFunction::Log).matrix();
  const double v = (rho.matrix() * (lr - ls)).trace().real();
  return make(v, DivergenceKind::Umegaki);
}

DivergenceValue d_min(const DensityOperator& rho, const HermitianOperator& sigma) {
  check_psd(sigma, rho.dim());
  const double o = (support_projector(rho).matrix() * sigma.matrix()).trace().real();
  if (o <= 1e-14) return make(kInf, DivergenceKind::Min);
  return make(-std::log2(o), DivergenceKind::Min);
}

DivergenceValue d_max(const DensityOperator& rho, const HermitianOperator& sigma) {
  check_psd(sigma, rho.dim());
  if (!support_contained(rho, sigma)) return make(kInf, DivergenceKind::Max);
  const CMatrix v = support_basis(sigma);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(v.adjoint() * sigma.matrix() * v));
  const RVector ev = es.eigenvalues();
  const CMatrix isq = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  const CMatrix m = isq * v.adjoint() * rho.matrix() * v * isq;
  const double lmax = HermitianOperator(CMatrix(0.5 * (m + m.adjoint()))).max_eigenvalue();
  return make(std::log2(lmax), DivergenceKind::Max);
}

DivergenceValue measured(const DensityOperator& rho, const HermitianOperator& sigma, double tol) {
  check_psd(sigma, rho.dim());
  if (!support_contained(rho, sigma)) return make(kInf, DivergenceKind::Measured);
  if (commute(rho, sigma)) return make(umegaki(rho, sigma).value, DivergenceKind::Measured);
  // Both operators live on the support of sigma.
  const CMatrix v = support_basis(sigma);
  CMatrix r = v.adjoint() * rho.matrix() * v;
  r /= r.trace().real();
  const CMatrix s = v.adjoint() * sigma.matrix() * v;
  const conic::ConicProgram p =
      conic::build_measured_program(build_singleton(HermitianOperator(r)), build_singleton(HermitianOperator(s)));
  const conic::Solution sol = conic::solve(p, std::max(tol, 1e-9));
  if (sol.status != conic::SolutionStatus::Optimal) throw SolverError("measured divergence solve failed");
  return make(-sol.objective / std::log(2.0), DivergenceKind::Measured);
}

DivergenceValue measured_half(const DensityOperator& rho, const HermitianOperator& sigma) {
  check_psd(sigma, rho.dim());
  const double f = fidelity(rho, sigma);
  if (f * f <= 1e-15) return make(kInf, DivergenceKind::MeasuredHalf);
  return make(-2.0 * std::log2(f), DivergenceKind::MeasuredHalf);
}

DivergenceValue divergence(DivergenceKind kind, const DensityOperator& rho, const HermitianOperator& sigma) {
  switch (kind) {
    case DivergenceKind::Umegaki: return umegaki(rho, sigma);
    case DivergenceKind::Min: return d_min(rho, sigma);
    case DivergenceKind::Max: return d_max(rho, sigma);
    case DivergenceKind::Measured: return measured(rho, sigma);
    case DivergenceKind::MeasuredHalf: return measured_half(rho, sigma);
  }
  throw DomainError("unknown divergence kind");
}

}  // namespace regent
