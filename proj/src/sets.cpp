#include "regent/sets.hpp"

#include "regent/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace regent {

int SetRepresentation::ambient_dim() const {
  if (ambient.num_components() != 1) throw DomainError("set has a block-structured ambient space");
  return ambient.components()[0].dim;
}

void SetRepresentation::validate() const {
  if (projection.rows() != ambient.size() || projection.cols() != lift.size())
    throw DomainError("projection does not match the lift and ambient spaces");
  if (constraint_map.rows() != constraint.size() || constraint_map.cols() != lift.size())
    throw DomainError("constraint map does not match the lift and constraint spaces");
  if (rhs.size() != constraint.size()) throw DomainError("right-hand side does not match the constraint space");
  if (point && point->size() != ambient.size()) throw DomainError("point does not match the ambient space");
}

EpigraphRepresentation epigraph(const SetRepresentation& c) {
  c.validate();
  EpigraphRepresentation e;
  e.lift = c.lift;
  e.constraint = c.constraint;
  e.constraint_adjoint = c.constraint_map.transpose();
  e.projection_adjoint = c.projection.transpose();
  e.rhs = c.rhs;
  return e;
}

namespace {

conic::SolveOptions options_for(double tol) {
  conic::SolveOptions o;
  o.tol = std::max(tol, 1e-9);
  return o;
}

RVector ambient_coords(const SetRepresentation& c, const HermitianOperator& w) {
  if (c.ambient.num_components() != 1 || c.ambient.components()[0].dim != w.dim())
    throw DomainError("witness dimension does not match the set");
  return c.ambient.pack({w.matrix()});
}

}  // namespace

SupportResult support_function_coords(const SetRepresentation& c, const RVector& w, double tol) {
  c.validate();
  if (w.size() != c.ambient.size()) throw DomainError("witness does not match the ambient space");
  SupportResult res;
  if (c.point) {
    res.value = res.dual_value = w.dot(*c.point);
    return res;
  }
  conic::ProgramBuilder pb;
  const int col = pb.add_space(c.lift);
  if (c.constraint.size() > 0) pb.add_term(pb.add_rows(c.rhs), col, c.constraint_map);
  pb.add_objective(col, RVector(c.projection.transpose() * w), -1.0);
  conic::Solution s = conic::solve(pb.build(), options_for(tol));
  if (s.status == conic::SolutionStatus::Infeasible) throw DomainError("set " + c.name + " is empty");
  if (s.status == conic::SolutionStatus::Unbounded) {
    res.value = res.dual_value = std::numeric_limits<double>::infinity();
    res.unbounded = true;
    return res;
  }
  if (s.status != conic::SolutionStatus::Optimal) throw SolverError("support function solve did not converge");
  res.value = -s.objective;
  res.dual_value = -s.dual_objective;
  res.accuracy = s.accuracy;
  return res;
}

double support_function(const SetRepresentation& c, const HermitianOperator& w, double tol) {
  return support_function_coords(c, ambient_coords(c, w), tol).value;
}

double support_function_epigraph(const SetRepresentation& c, const RVector& w, double tol) {
  const EpigraphRepresentation e = epigraph(c);
  if (w.size() != c.ambient.size()) throw DomainError("witness does not match the ambient space");
  conic::ProgramBuilder pb;
  const int nl = e.constraint.size();
  int lambda = 0;
  if (nl > 0) lambda = pb.offset(pb.add_free(nl));
  const int z = pb.add_space(e.lift);
  const int r = pb.add_rows(RVector(e.projection_adjoint * w));
  if (nl > 0) pb.add_term(r, lambda, e.constraint_adjoint);
  for (int i = 0; i < e.lift.size(); ++i) pb.add_entry(r + i, z + i, -1.0);
  if (nl > 0) pb.add_objective(lambda, e.rhs);
  conic::Solution s = conic::solve(pb.build(), options_for(tol));
  if (s.status == conic::SolutionStatus::Unbounded) throw DomainError("set " + c.name + " is empty");
  if (s.status == conic::SolutionStatus::Infeasible) return std::numeric_limits<double>::infinity();
  if (s.status != conic::SolutionStatus::Optimal) throw SolverError("epigraph solve did not converge");
  return s.objective;
}

bool polar_membership(const SetRepresentation& c, const HermitianOperator& w) {
  return support_function(c, w) <= 1.0 + 1e-8;
}

double membership_distance(const SetRepresentation& c, const HermitianOperator& sigma, double tol) {
  c.validate();
  const RVector sv = ambient_coords(c, sigma);
  const Space& amb = c.ambient;
  const RVector id = amb.identity();
  if (c.point) {
    CMatrix diff = amb.unpack(*c.point)[0] - sigma.matrix();
    return HermitianOperator(diff).eigenvalues().cwiseAbs().maxCoeff();
  }
  conic::ProgramBuilder pb;
  const int col = pb.add_space(c.lift);
  if (c.constraint.size() > 0) pb.add_term(pb.add_rows(c.rhs), col, c.constraint_map);
  const int s = pb.offset(pb.add_nonneg(1));
  // P = s I + Pi x - sigma >= 0, N = s I - Pi x + sigma >= 0.
  for (int sign : {1, -1}) {
    const int p = pb.add_space(amb);
    const int r = pb.add_rows(-sign * sv);
    for (int i = 0; i < amb.size(); ++i) {
      pb.add_entry(r + i, p + i, 1.0);
      pb.add_entry(r + i, s, -id(i));
    }
    pb.add_term(r, col, c.projection, -sign);
  }
  pb.add_objective_entry(s, 1.0);
  conic::Solution sol = conic::solve(pb.build(), options_for(tol));
  if (sol.status == conic::SolutionStatus::Infeasible) throw DomainError("set " + c.name + " is empty");
  if (sol.status != conic::SolutionStatus::Optimal) throw SolverError("membership solve did not converge");
  return std::max(0.0, sol.objective);
}

bool contains(const SetRepresentation& c, const HermitianOperator& sigma, double threshold) {
  return membership_distance(c, sigma) <= threshold;
}

double submultiplicativity_gap(const SetRepresentation& c1, const SetRepresentation& c2,
                               const SetRepresentation& c12, const HermitianOperator& w1,
                               const HermitianOperator& w2) {
  if (c12.ambient_dim() != c1.ambient_dim() * c2.ambient_dim())
    throw DomainError("joint set dimension must be the product of the factor dimensions");
  const double h1 = support_function(c1, w1);
  const double h2 = support_function(c2, w2);
  const double h12 = support_function(c12, kron(w1, w2));
  return h12 - h1 * h2;
}

SubmultiplicativityReport submultiplicativity_probe(const SetRepresentation& c1, const SetRepresentation& c2,
                                                    const SetRepresentation& c12, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("need at least one trial");
  SubmultiplicativityReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  const int d1 = c1.ambient_dim();
  const int d2 = c2.ambient_dim();
  for (int t = 0; t < trials; ++t) {
    HermitianOperator w1 = random_density(d1, d1, seed + 2 * t);
    HermitianOperator w2 = random_density(d2, d2, seed + 2 * t + 1);
    const double v = submultiplicativity_gap(c1, c2, c12, w1, w2);
    rep.violations.push_back(v);
    rep.max_violation = std::max(rep.max_violation, v);
  }
  return rep;
}

std::vector<int> copy_dims(const std::vector<int>& site, int copies) {
  if (copies < 1) throw DomainError("number of copies must be positive");
  std::vector<int> out;
  for (int k = 0; k < copies; ++k) out.insert(out.end(), site.begin(), site.end());
  return out;
}

namespace {

// Assembles a SetRepresentation block by block.
class RepBuilder {
 public:
  // Adds a lift component and returns its coordinate offset.
  int lift(int dim, std::optional<SymmetryGroup> g = std::nullopt) { return add(lift_, dim, g); }
  int constraint(int dim, std::optional<SymmetryGroup> g = std::nullopt) {
    const int off = add(cons_, dim, g);
    rhs_.resize(off + hvec::size(dim), 0.0);
    return off;
  }
  void set_rhs(int row, double v) { rhs_.at(row) = v; }
  void cons(int row, int col, const SparseMatrix& M, double scale = 1.0) { put(ctrip_, row, col, M, scale); }
  void cons_entry(int row, int col, double v) {
    if (v != 0.0) ctrip_.emplace_back(row, col, v);
  }
  void proj(int row, int col, const SparseMatrix& M, double scale = 1.0) { put(ptrip_, row, col, M, scale); }
  void proj_entry(int row, int col, double v) {
    if (v != 0.0) ptrip_.emplace_back(row, col, v);
  }
  // Adds tr(X) for the lift block at `col` of dimension n into `row`.
  void cons_trace(int row, int col, int n, double scale = 1.0) {
    for (int j = 0; j < n; ++j) cons_entry(row, col + hvec::diag(j), scale);
  }
  void cons_identity(int row, int col, int size, double scale) {
    for (int i = 0; i < size; ++i) cons_entry(row + i, col + i, scale);
  }

  SetRepresentation finish(std::string name, Space ambient) {
    SetRepresentation s;
    s.name = std::move(name);
    s.lift = Space(lift_comps_, lift_groups_);
    s.constraint = Space(cons_comps_, cons_groups_);
    s.ambient = std::move(ambient);
    s.projection.resize(s.ambient.size(), s.lift.size());
    s.projection.setFromTriplets(ptrip_.begin(), ptrip_.end());
    s.constraint_map.resize(s.constraint.size(), s.lift.size());
    s.constraint_map.setFromTriplets(ctrip_.begin(), ctrip_.end());
    s.rhs = Eigen::Map<const RVector>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
    s.validate();
    return s;
  }

 private:
  struct Part {
    int size = 0;
  };
  int add(Part& p, int dim, const std::optional<SymmetryGroup>& g) {
    auto& comps = (&p == &lift_) ? lift_comps_ : cons_comps_;
    auto& groups = (&p == &lift_) ? lift_groups_ : cons_groups_;
    const int off = p.size;
    if (g) {
      SymmetryGroup gg = *g;
      gg.first = static_cast<int>(comps.size());
      groups.push_back(gg);
    }
    comps.push_back({dim, 1.0});
    p.size += hvec::size(dim);
    return off;
  }
  static void put(std::vector<Triplet>& t, int row, int col, const SparseMatrix& M, double scale) {
    for (int k = 0; k < M.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(M, k); it; ++it)
        t.emplace_back(row + static_cast<int>(it.row()), col + k, scale * it.value());
  }

  Part lift_, cons_;
  std::vector<Component> lift_comps_, cons_comps_;
  std::vector<SymmetryGroup> lift_groups_, cons_groups_;
  std::vector<Triplet> ptrip_, ctrip_;
  std::vector<double> rhs_;
};

SymmetryGroup tensor_group(int q, int m) { return {SymmetryKind::TensorPower, 0, 1, q, m}; }

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

struct Bipartite {
  int dim;
  std::vector<int> dims;
  SparseMatrix pt;
  Space ambient;
};

Bipartite bipartite(int dA, int dB, int copies) {
  if (dA < 1 || dB < 1) throw DomainError("local dimensions must be positive");
  if (copies < 1) throw DomainError("number of copies must be positive");
  Bipartite b;
  b.dims = copy_dims({dA, dB}, copies);
  b.dim = ipow(dA * dB, copies);
  std::vector<int> which;
  for (int k = 0; k < copies; ++k) which.push_back(2 * k + 1);
  const std::vector<int> dims = b.dims;
  b.pt = linear_map_matrix(b.dim, b.dim, [&](const CMatrix& x) { return partial_transpose(x, dims, which); });
  b.ambient = Space({Component{b.dim, 1.0}}, {SymmetryGroup{SymmetryKind::TensorPower, 0, 1, dA * dB, copies}});
  return b;
}

void set_copies(SetRepresentation& s, const std::vector<int>& site, int copies) {
  s.copies = copies;
  s.site_dims = site;
}

void project_identity(RepBuilder& rb, int col, int dim) {
  for (int k = 0; k < hvec::size(dim); ++k) rb.proj_entry(k, col + k, 1.0);
}

}  // namespace

SetRepresentation build_rains(int dA, int dB, int copies) {
  Bipartite bp = bipartite(dA, dB, copies);
  const int D = bp.dim;
  const int N = hvec::size(D);
  const SymmetryGroup g = tensor_group(dA * dB, copies);
  RepBuilder rb;
  const int sig = rb.lift(D, g);
  const int P = rb.lift(D, g);
  const int Nn = rb.lift(D, g);
  const int s = rb.lift(1);
  const int c1 = rb.constraint(D, g);
  const int c2 = rb.constraint(1);
  rb.cons(c1, sig, bp.pt);
  rb.cons_identity(c1, P, N, -1.0);
  rb.cons_identity(c1, Nn, N, 1.0);
  rb.cons_trace(c2, P, D);
  rb.cons_trace(c2, Nn, D);
  rb.cons_entry(c2, s, 1.0);
  rb.set_rhs(c2, 1.0);
  project_identity(rb, sig, D);
  SetRepresentation r = rb.finish("rains", bp.ambient);
  r.symmetry_certified = true;
  r.assumptions_certified = true;
  set_copies(r, {dA, dB}, copies);
  return r;
}

SetRepresentation build_pptk(int dA, int dB, int k, int copies) {
  if (k < 2) throw DomainError("PPT_k needs k >= 2");
  Bipartite bp = bipartite(dA, dB, copies);
  const int D = bp.dim;
  const int N = hvec::size(D);
  const SymmetryGroup g = tensor_group(dA * dB, copies);
  RepBuilder rb;
  const int w1 = rb.lift(D, g);
  std::vector<int> P(k), Nn(k);
  for (int i = 0; i < k; ++i) {
    P[i] = rb.lift(D, g);
    Nn[i] = rb.lift(D, g);
  }
  const int s = rb.lift(1);
  for (int i = 0; i < k; ++i) {
    const int c = rb.constraint(D, g);
    if (i == 0) {
      rb.cons(c, w1, bp.pt);
    } else {
      rb.cons(c, P[i - 1], bp.pt);
      rb.cons(c, Nn[i - 1], bp.pt);
    }
    rb.cons_identity(c, P[i], N, -1.0);
    rb.cons_identity(c, Nn[i], N, 1.0);
  }
  const int ct = rb.constraint(1);
  rb.cons_trace(ct, P[k - 1], D);
  rb.cons_trace(ct, Nn[k - 1], D);
  rb.cons_entry(ct, s, 1.0);
  rb.set_rhs(ct, 1.0);
  project_identity(rb, w1, D);
  SetRepresentation r = rb.finish("ppt" + std::to_string(k), bp.ambient);
  r.symmetry_certified = true;
  r.assumptions_certified = true;
  set_copies(r, {dA, dB}, copies);
  return r;
}

SetRepresentation build_wd(int dA, int dB, int copies) {
  Bipartite bp = bipartite(dA, dB, copies);
  const int D = bp.dim;
  const int N = hvec::size(D);
  const SymmetryGroup g = tensor_group(dA * dB, copies);
  RepBuilder rb;
  // sigma^T = P - N with Y = P + N, and Y^T = P2 - N2 with tr(P2 + N2) <= 1.
  const int p = rb.lift(D, g);
  const int n = rb.lift(D, g);
  const int p2 = rb.lift(D, g);
  const int n2 = rb.lift(D, g);
  const int s = rb.lift(1);
  const int c = rb.constraint(D, g);
  rb.cons(c, p, bp.pt);
  rb.cons(c, n, bp.pt);
  rb.cons_identity(c, p2, N, -1.0);
  rb.cons_identity(c, n2, N, 1.0);
  const int ct = rb.constraint(1);
  rb.cons_trace(ct, p2, D);
  rb.cons_trace(ct, n2, D);
  rb.cons_entry(ct, s, 1.0);
  rb.set_rhs(ct, 1.0);
  rb.proj(0, p, bp.pt);
  rb.proj(0, n, bp.pt, -1.0);
  SetRepresentation r = rb.finish("wd", bp.ambient);
  r.symmetry_certified = true;
  r.assumptions_certified = false;
  set_copies(r, {dA, dB}, copies);
  return r;
}

SetRepresentation build_ppt(int dA, int dB, int copies) {
  Bipartite bp = bipartite(dA, dB, copies);
  const int D = bp.dim;
  const int N = hvec::size(D);
  const SymmetryGroup g = tensor_group(dA * dB, copies);
  RepBuilder rb;
  const int sig = rb.lift(D, g);
  const int Q = rb.lift(D, g);
  const int s = rb.lift(1);
  const int c1 = rb.constraint(D, g);
  const int c2 = rb.constraint(1);
  rb.cons(c1, sig, bp.pt);
  rb.cons_identity(c1, Q, N, -1.0);
  rb.cons_trace(c2, sig, D);
  rb.cons_entry(c2, s, 1.0);
  rb.set_rhs(c2, 1.0);
  project_identity(rb, sig, D);
  SetRepresentation r = rb.finish("ppt", bp.ambient);
  r.symmetry_certified = true;
  r.assumptions_certified = false;
  set_copies(r, {dA, dB}, copies);
  return r;
}

SetRepresentation build_ppt_twirled(int d, int copies) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
  if (copies < 1) throw DomainError("number of copies must be positive");
  const int D = ipow(d * d, copies);
  const int words = ipow(2, copies);
  // Per copy: P_s, P_a (coefficient index 0, 1) and Phi, I - Phi after the partial transpose.
  CMatrix swap = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  const CMatrix id = CMatrix::Identity(d * d, d * d);
  const CMatrix proj[2] = {0.5 * (id + swap), 0.5 * (id - swap)};
  const double pdim[2] = {d * (d + 1) / 2.0, d * (d - 1) / 2.0};
  const double coef[2][2] = {{(1.0 + d) / 2.0, 0.5}, {(1.0 - d) / 2.0, 0.5}};
  auto digit = [copies](int w, int k) { return (w >> (copies - 1 - k)) & 1; };

  RepBuilder rb;
  const SymmetryGroup g{SymmetryKind::DiagonalTensor, 0, words, 2, copies};
  std::vector<int> c(words), q(words);
  for (int w = 0; w < words; ++w) c[w] = rb.lift(1, w == 0 ? std::optional<SymmetryGroup>(g) : std::nullopt);
  for (int w = 0; w < words; ++w) q[w] = rb.lift(1, w == 0 ? std::optional<SymmetryGroup>(g) : std::nullopt);
  const int s = rb.lift(1);
  std::vector<int> rows(words);
  for (int u = 0; u < words; ++u) rows[u] = rb.constraint(1, u == 0 ? std::optional<SymmetryGroup>(g) : std::nullopt);
  const int ct = rb.constraint(1);
  for (int u = 0; u < words; ++u) {
    rb.cons_entry(rows[u], q[u], -1.0);
    for (int w = 0; w < words; ++w) {
      double f = 1.0;
      for (int k = 0; k < copies; ++k) f *= coef[digit(w, k)][digit(u, k)];
      rb.cons_entry(rows[u], c[w], f);
    }
  }
  for (int w = 0; w < words; ++w) {
    double t = 1.0;
    CMatrix op = CMatrix::Ones(1, 1);
    for (int k = 0; k < copies; ++k) {
      t *= pdim[digit(w, k)];
      op = kron(op, proj[digit(w, k)]);
    }
    rb.cons_entry(ct, c[w], t);
    const RVector v = hvec::pack(op);
    for (int i = 0; i < v.size(); ++i) rb.proj_entry(i, c[w], v(i));
  }
  rb.cons_entry(ct, s, 1.0);
  rb.set_rhs(ct, 1.0);
  Space amb({Component{D, 1.0}}, {tensor_group(d * d, copies)});
  SetRepresentation r = rb.finish("ppt_twirled", amb);
  r.symmetry_certified = true;
  r.assumptions_certified = false;
  set_copies(r, {d, d}, copies);
  return r;
}

bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int f = 3; f * f <= d; f += 2)
    if (d % f == 0) return false;
  return true;
}

std::vector<CMatrix> phase_point_operators(int d) {
  if (!is_odd_prime(d)) throw DomainError("phase-point operators need an odd prime dimension");
  const double pi = std::acos(-1.0);
  CMatrix X = CMatrix::Zero(d, d), Z = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    X((j + 1) % d, j) = 1.0;
    Z(j, j) = std::polar(1.0, 2 * pi * j / d);
  }
  auto displacement = [&](int a, int b) {
    CMatrix Xa = CMatrix::Identity(d, d), Zb = CMatrix::Identity(d, d);
    for (int i = 0; i < a; ++i) Xa = X * Xa;
    for (int i = 0; i < b; ++i) Zb = Z * Zb;
    const double phase = pi * (d + 1) * static_cast<double>(a * b) / d;
    return CMatrix(std::polar(1.0, phase) * Xa * Zb);
  };
  CMatrix A0 = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) A0 += displacement(a, b);
  A0 /= static_cast<double>(d);
  std::vector<CMatrix> out;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      CMatrix T = displacement(a, b);
      CMatrix A = T * A0 * T.adjoint();
      out.push_back(0.5 * (A + A.adjoint()));
    }
  return out;
}

namespace {

int copies_of(int dim, int d) {
  int m = 0, n = 1;
  while (n < dim) {
    n *= d;
    ++m;
  }
  if (n != dim || m < 1) throw DomainError("dimension is not a power of the site dimension");
  return m;
}

// Phase-point operator of the word u (first copy most significant).
CMatrix phase_point_word(const std::vector<CMatrix>& A, int d, int m, int u) {
  CMatrix r = CMatrix::Ones(1, 1);
  std::vector<int> digits(m);
  for (int k = m - 1; k >= 0; --k) {
    digits[k] = u % (d * d);
    u /= d * d;
  }
  for (int k = 0; k < m; ++k) r = kron(r, A[digits[k]]);
  return r;
}

}  // namespace

RVector wigner_function(const HermitianOperator& rho, int d) {
  const std::vector<CMatrix> A = phase_point_operators(d);
  const int m = copies_of(rho.dim(), d);
  const int n = ipow(d * d, m);
  const double scale = 1.0 / ipow(d, m);
  RVector w(n);
  for (int u = 0; u < n; ++u) w(u) = (phase_point_word(A, d, m, u) * rho.matrix()).trace().real() * scale;
  return w;
}

double wigner_norm(const HermitianOperator& rho, int d) { return wigner_function(rho, d).cwiseAbs().sum(); }

SetRepresentation build_wigner_set(int d, int copies) {
  if (!is_odd_prime(d)) throw DomainError("the Wigner set needs an odd prime dimension");
  if (copies < 1) throw DomainError("number of copies must be positive");
  const std::vector<CMatrix> A = phase_point_operators(d);
  const int D = ipow(d, copies);
  const int nu = ipow(d * d, copies);
  const double scale = 1.0 / ipow(d, copies);
  RepBuilder rb;
  const int sig = rb.lift(D, tensor_group(d, copies));
  const SymmetryGroup words{SymmetryKind::DiagonalTensor, 0, nu, d * d, copies};
  std::vector<int> p(nu), n(nu);
  for (int u = 0; u < nu; ++u) p[u] = rb.lift(1, u == 0 ? std::optional<SymmetryGroup>(words) : std::nullopt);
  for (int u = 0; u < nu; ++u) n[u] = rb.lift(1, u == 0 ? std::optional<SymmetryGroup>(words) : std::nullopt);
  const int s = rb.lift(1);
  std::vector<int> rows(nu);
  for (int u = 0; u < nu; ++u) rows[u] = rb.constraint(1, u == 0 ? std::optional<SymmetryGroup>(words) : std::nullopt);
  const int ct = rb.constraint(1);
  for (int u = 0; u < nu; ++u) {
    RVector a = hvec::pack(phase_point_word(A, d, copies, u)) * scale;
    for (int i = 0; i < a.size(); ++i) rb.cons_entry(rows[u], sig + i, a(i));
    rb.cons_entry(rows[u], p[u], -1.0);
    rb.cons_entry(rows[u], n[u], 1.0);
    rb.cons_entry(ct, p[u], 1.0);
    rb.cons_entry(ct, n[u], 1.0);
  }
  rb.cons_entry(ct, s, 1.0);
  rb.set_rhs(ct, 1.0);
  project_identity(rb, sig, D);
  Space amb({Component{D, 1.0}}, {tensor_group(d, copies)});
  SetRepresentation r = rb.finish("wigner", amb);
  r.symmetry_certified = true;
  r.assumptions_certified = true;
  set_copies(r, {d}, copies);
  return r;
}

SetRepresentation build_channel_image(const QuantumChannel& ch, int copies) {
  if (copies < 1) throw DomainError("number of copies must be positive");
  const QuantumChannel nm = ch.tensor_power(copies);
  const int din = nm.dim_in();
  const int dout = nm.dim_out();
  RepBuilder rb;
  const int x = rb.lift(din, tensor_group(ch.dim_in(), copies));
  const int ct = rb.constraint(1);
  rb.cons_trace(ct, x, din);
  rb.set_rhs(ct, 1.0);
  SparseMatrix pm = linear_map_matrix(din, dout, [&](const CMatrix& m) { return nm.apply(m); });
  rb.proj(0, x, pm);
  Space amb({Component{dout, 1.0}}, {tensor_group(ch.dim_out(), copies)});
  SetRepresentation r = rb.finish("channel_image", amb);
  r.symmetry_certified = true;
  r.assumptions_certified = true;
  r.trace_normalized = ch.trace_preserving();
  set_copies(r, {ch.dim_out()}, copies);
  // The image is a single point when Pi = v tr(.) on the lift.
  const RVector tr = hvec::pack(CMatrix::Identity(din, din));
  const RVector v = pm * tr / din;
  SparseMatrix outer = (v * tr.transpose()).sparseView();
  const double dev = SparseMatrix(pm - outer).coeffs().cwiseAbs().maxCoeff();
  if (dev <= 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff())) r.point = v;
  return r;
}

SetRepresentation build_singleton(const HermitianOperator& rho, int copies) {
  if (copies < 1) throw DomainError("number of copies must be positive");
  const HermitianOperator rm = tensor_power(rho, copies);
  const int D = rm.dim();
  RepBuilder rb;
  const int x = rb.lift(1);
  const int ct = rb.constraint(1);
  rb.cons_entry(ct, x, 1.0);
  rb.set_rhs(ct, 1.0);
  const RVector v = hvec::pack(rm.matrix());
  for (int i = 0; i < v.size(); ++i) rb.proj_entry(i, x, v(i));
  Space amb({Component{D, 1.0}}, {tensor_group(rho.dim(), copies)});
  SetRepresentation r = rb.finish("singleton", amb);
  r.symmetry_certified = true;
  r.assumptions_certified = true;
  r.trace_normalized = std::abs(rho.trace() - 1.0) <= 1e-10;
  r.point = v;
  set_copies(r, rho.subsystems().empty() ? std::vector<int>{rho.dim()} : rho.subsystems(), copies);
  return r;
}

SetRepresentation build_density_set(int d) {
  if (d < 1) throw DomainError("dimension must be positive");
  RepBuilder rb;
  const int x = rb.lift(d);
  const int ct = rb.constraint(1);
  rb.cons_trace(ct, x, d);
  rb.set_rhs(ct, 1.0);
  project_identity(rb, x, d);
  SetRepresentation r = rb.finish("density", Space::hermitian(d));
  r.symmetry_certified = true;
  r.assumptions_certified = true;
  r.trace_normalized = true;
  set_copies(r, {d}, 1);
  return r;
}

double symmetry_defect(const SetRepresentation& c, int probes, std::uint64_t seed) {
  c.validate();
  if (c.copies < 2) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  std::vector<int> perm(c.copies);
  for (int t = 0; t < probes; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RVector x(c.lift.size());
    for (int i = 0; i < x.size(); ++i) x(i) = nd(rng);
    const RVector px = c.lift.permute_copies(x, perm);
    const RVector a = c.projection * px - c.ambient.permute_copies(c.projection * x, perm);
    const RVector f = c.constraint_map * px - c.constraint.permute_copies(c.constraint_map * x, perm);
    const RVector g = c.constraint.permute_copies(c.rhs, perm) - c.rhs;
    worst = std::max({worst, a.cwiseAbs().maxCoeff(), f.size() ? f.cwiseAbs().maxCoeff() : 0.0,
                      g.size() ? g.cwiseAbs().maxCoeff() : 0.0});
  }
  return worst;
}

}  // namespace regent
