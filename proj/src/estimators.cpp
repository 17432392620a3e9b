#include "regent/estimators.hpp"

#include "regent/divergences.hpp"
#include "regent/symmetry.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace regent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScaleBound = 1e4;  // caps the scaling variable for sets that may contain 0
constexpr double kScaleFloor = 1e-7;

}  // namespace

double gap_bound(int d, int m) {
  if (d < 1 || m < 1) throw DomainError("gap bound needs d, m >= 1");
  return 2.0 * (static_cast<double>(d) * d + d) * std::log2(static_cast<double>(m + d)) / m;
}

long long required_level(double delta, int d) {
  if (!(delta > 0)) throw DomainError("delta must be positive");
  if (d < 1) throw DomainError("dimension must be positive");
  const double d2 = static_cast<double>(d) * d;
  return static_cast<long long>(std::ceil(8.0 * d2 / delta * std::log2(d2 / delta)));
}

double dmax_precheck(const SetRepresentation& a, const SetRepresentation& b, double tol) {
  a.validate();
  b.validate();
  if (a.ambient.size() != b.ambient.size()) throw DomainError("sets live in different ambient spaces");
  const Space& amb = a.ambient;
  if (a.point && b.point) {
    const std::vector<CMatrix> ra = amb.unpack(*a.point);
    const std::vector<CMatrix> rb = b.ambient.unpack(*b.point);
    double best = -kInf;
    for (size_t c = 0; c < ra.size(); ++c) {
      HermitianOperator x(ra[c]), y(rb[c]);
      if (x.max_eigenvalue() <= kRankTolerance) continue;
      const double tr = x.trace();
      const DivergenceValue v = d_max(DensityOperator(x * (1.0 / tr)), y * (1.0 / tr));
      best = std::max(best, v.value);
    }
    return best;
  }
  // maximize u with Pi_A(Xh) <= Pi_B(Y), F_A Xh = u g_A, F_B Y = g_B, u <= bound.
  conic::ProgramBuilder pb;
  const int u = pb.offset(pb.add_nonneg(1));
  if (!a.trace_normalized) {
    const int su = pb.offset(pb.add_nonneg(1));
    const int rb = pb.add_row(kScaleBound);
    pb.add_entry(rb, u, 1.0);
    pb.add_entry(rb, su, 1.0);
  }
  int xa = -1;
  if (!a.point) {
    xa = pb.add_space(a.lift);
    if (a.constraint.size() > 0) {
      const int r = pb.add_rows(RVector::Zero(a.constraint.size()));
      pb.add_term(r, xa, a.constraint_map);
      for (int i = 0; i < a.rhs.size(); ++i) pb.add_entry(r + i, u, -a.rhs(i));
    }
  }
  const int yb = pb.add_space(b.lift);
  if (b.constraint.size() > 0) pb.add_term(pb.add_rows(b.rhs), yb, b.constraint_map);
  const int s = pb.add_space(amb);
  const int r = pb.add_rows(RVector::Zero(amb.size()));
  pb.add_term(r, yb, b.projection);
  if (a.point) {
    for (int i = 0; i < amb.size(); ++i) pb.add_entry(r + i, u, -(*a.point)(i));
  } else {
    pb.add_term(r, xa, a.projection, -1.0);
  }
  for (int i = 0; i < amb.size(); ++i) pb.add_entry(r + i, s + i, -1.0);
  pb.add_objective_entry(u, -1.0);
  const conic::Solution sol = conic::solve(pb.build(), std::max(tol, 1e-9));
  if (sol.status == conic::SolutionStatus::Infeasible) throw DomainError("precheck program is infeasible");
  if (sol.status != conic::SolutionStatus::Optimal) throw SolverError("precheck solve did not converge");
  const double ustar = sol.x(u);
  if (ustar <= kScaleFloor) return kInf;
  return -std::log2(ustar);
}

double umegaki_between(const SetRepresentation& a, const SetRepresentation& b, double tol, double* accuracy,
                       double* order_change) {
  const conic::Solution s = conic::solve(conic::build_umegaki_program(a, b), tol);
  if (s.status == conic::SolutionStatus::Infeasible) return kInf;
  if (s.status != conic::SolutionStatus::Optimal) throw SolverError("relative entropy program did not converge");
  if (accuracy) *accuracy = s.accuracy;
  if (order_change) *order_change = s.order_change;
  return s.objective / std::log(2.0);
}

double measured_between(const SetRepresentation& a, const SetRepresentation& b, double tol, double* accuracy,
                        double* order_change) {
  const conic::Solution s = conic::solve(conic::build_measured_program(a, b), tol);
  if (s.status == conic::SolutionStatus::Unbounded) return kInf;
  if (s.status != conic::SolutionStatus::Optimal) throw SolverError("measured program did not converge");
  if (accuracy) *accuracy = s.accuracy;
  if (order_change) *order_change = s.order_change;
  return -s.objective / std::log(2.0);
}

SandwichReport sandwich(const SetFactory& fa, const SetFactory& fb, int m, const SandwichOptions& opt) {
  if (m < 1) throw DomainError("level must be positive");
  SetRepresentation a = fa(m);
  SetRepresentation b = fb(m);
  SandwichReport rep;
  rep.m = m;
  rep.use_symmetry = opt.use_symmetry;
  rep.assumptions_certified = a.assumptions_certified && b.assumptions_certified;
  const std::vector<int>& site = a.site_dims.empty() ? std::vector<int>{a.ambient_dim()} : a.site_dims;
  rep.d = std::accumulate(site.begin(), site.end(), 1, std::multiplies<int>());
  rep.gap_bound = gap_bound(rep.d, m);
  if (opt.use_symmetry && m > 1) {
    a = symmetry::reduce_setrep(a, opt.seed);
    b = symmetry::reduce_setrep(b, opt.seed);
  }
  rep.dmax = dmax_precheck(a, b);
  if (std::isinf(rep.dmax)) {
    rep.infinite = true;
    rep.lower = rep.upper = kInf;
    return rep;
  }
  double oc1 = 0, oc2 = 0;
  rep.upper = umegaki_between(a, b, opt.tol, &rep.upper_accuracy, &oc1) / m;
  rep.lower = measured_between(a, b, opt.tol, &rep.lower_accuracy, &oc2) / m;
  rep.order_change = std::max(oc1, oc2);
  return rep;
}

}  // namespace regent
