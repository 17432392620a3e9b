#include "regent/apps.hpp"

#include "regent/conic.hpp"
#include "regent/parallel.hpp"
#include "regent/sets.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace regent::apps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

std::pair<int, int> bipartite_dims(const DensityOperator& rho) {
  const std::vector<int>& s = rho.op().subsystems();
  if (s.size() != 2) throw DomainError("state must declare exactly two subsystems");
  return {s[0], s[1]};
}

conic::SolveOptions solve_options(double tol) {
  conic::SolveOptions o;
  o.tol = tol;
  return o;
}

// Positions of hvec coordinates of an n x n block placed at (r0, c0) inside a larger
// Hermitian matrix, for r0 == c0 (diagonal block).
std::vector<int> diagonal_block_coords(int n, int shift) {
  std::vector<int> out(hvec::size(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      out[hvec::re(i, j)] = hvec::re(i + shift, j + shift);
      out[hvec::im(i, j)] = hvec::im(i + shift, j + shift);
    }
    out[hvec::diag(j)] = hvec::diag(j + shift);
  }
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

int smallest_prime_base(int dim) {
  for (int d = 3; d <= dim; d += 2) {
    if (!is_odd_prime(d)) continue;
    long long n = d;
    while (n < dim) n *= d;
    if (n == dim) return d;
  }
  throw DomainError("dimension is not a power of an odd prime");
}

int copies_of(int dim, int d) {
  int m = 0;
  long long n = 1;
  while (n < dim) {
    n *= d;
    ++m;
  }
  if (n != dim || m < 1) throw DomainError("dimension is not a power of the qudit dimension");
  return m;
}

}  // namespace

QuantumChannel replacer_channel(const CVector& psi, int dim_in) {
  if (dim_in < 1) throw DomainError("input dimension must be positive");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("replacer state must be normalized");
  std::vector<CMatrix> kraus;
  for (int i = 0; i < dim_in; ++i) {
    CMatrix k = CMatrix::Zero(psi.size(), dim_in);
    k.col(i) = psi;
    kraus.push_back(k);
  }
  return QuantumChannel(kraus, true);
}

CVector replacer_vector() {
  CVector v(3);
  v << 2.0, 1.0, 2.0;
  return v / 3.0;
}

QuantumChannel platypus_channel(double p) {
  check_unit_interval(p, "p");
  CMatrix m0 = CMatrix::Zero(3, 3), m1 = CMatrix::Zero(3, 3);
  m0(0, 0) = std::sqrt(p);
  m0(2, 1) = 1.0;
  m1(1, 0) = std::sqrt(1.0 - p);
  m1(2, 2) = 1.0;
  return QuantumChannel({m0, m1}, true);
}

QuantumChannel ad_channel(double gamma) {
  check_unit_interval(gamma, "gamma");
  CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - gamma);
  e1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({e0, e1}, true);
}

DensityOperator choi_state(const QuantumChannel& n) {
  const int din = n.dim_in();
  const CVector e = max_entangled_vector(din);
  const CMatrix phi = e * e.adjoint() / static_cast<double>(din);
  CMatrix out = CMatrix::Zero(din * n.dim_out(), din * n.dim_out());
  const CMatrix id = CMatrix::Identity(din, din);
  for (const CMatrix& k : n.kraus()) {
    const CMatrix big = kron(id, k);
    out += big * phi * big.adjoint();
  }
  return DensityOperator(HermitianOperator(out, {din, n.dim_out()}));
}

DensityOperator isotropic(int d, double p) {
  if (d < 2) throw DomainError("dimension must be at least 2");
  check_unit_interval(p, "p");
  const int D = d * d;
  const CMatrix phi = max_entangled_state(d).matrix();
  const CMatrix rest = CMatrix::Identity(D, D) - phi;
  return DensityOperator(HermitianOperator(CMatrix(p * phi + (1.0 - p) / (D - 1.0) * rest), {d, d}));
}

HermitianOperator antisymmetric_projector(int d) {
  if (d < 2) throw DomainError("dimension must be at least 2");
  const int D = d * d;
  CMatrix swap = CMatrix::Zero(D, D);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  return HermitianOperator(CMatrix(0.5 * (CMatrix::Identity(D, D) - swap)), {d, d});
}

DensityOperator werner(int d, double p) {
  check_unit_interval(p, "p");
  const int D = d * d;
  const CMatrix pa = antisymmetric_projector(d).matrix();
  const CMatrix ps = CMatrix::Identity(D, D) - pa;
  const CMatrix rs = ps * (2.0 / (d * (d + 1.0)));
  const CMatrix ra = pa * (2.0 / (d * (d - 1.0)));
  return DensityOperator(HermitianOperator(CMatrix((1.0 - p) * rs + p * ra), {d, d}));
}

double analytic_iso(int d, double p) {
  if (d < 2) throw DomainError("dimension must be at least 2");
  check_unit_interval(p, "p");
  if (p <= 1.0 / d) return 0.0;
  const double tail = p < 1.0 ? (1.0 - p) * std::log2((1.0 - p) / (d - 1.0)) : 0.0;
  return std::log2(static_cast<double>(d)) + p * std::log2(p) + tail;
}

double analytic_werner(int d, double p) {
  if (d < 2) throw DomainError("dimension must be at least 2");
  check_unit_interval(p, "p");
  if (p <= 0.5) return 0.0;
  if (p <= (d + 2.0) / (2.0 * d)) return 1.0 - binary_entropy(p);
  return std::log2((d + 2.0) / d) + (1.0 - p) * std::log2((d - 2.0) / (d + 2.0));
}

double e_wd1(const DensityOperator& rho, double tol) {
  const auto [da, db] = bipartite_dims(rho);
  const double h = support_function(build_rains(da, db), support_projector(rho.op()), tol);
  return -std::log2(h);
}

double e_wd2(const DensityOperator& rho, double tol) {
  const auto [da, db] = bipartite_dims(rho);
  const double h = support_function(build_wd(da, db), support_projector(rho.op()), tol);
  return -std::log2(h);
}

double e_wd2_direct(const DensityOperator& rho, double tol) {
  const auto [da, db] = bipartite_dims(rho);
  const int D = da * db;
  const std::vector<int> dims{da, db};
  const SparseMatrix pt =
      linear_map_matrix(D, D, [&](const CMatrix& x) { return partial_transpose(x, dims, {1}); });
  const RVector ptp = hvec::pack(partial_transpose(support_projector(rho.op()).matrix(), dims, {1}));
  const RVector id = hvec::pack(CMatrix::Identity(D, D));
  const int n = hvec::size(D);
  SparseMatrix eye(n, n);
  eye.setIdentity();

  conic::ProgramBuilder pb;
  const int y = pb.offset(pb.add_free(n));
  const int s = pb.offset(pb.add_nonneg(1));
  const int p1 = pb.offset(pb.add_psd(D));
  const int p2 = pb.offset(pb.add_psd(D));
  const int q1 = pb.offset(pb.add_psd(D));
  const int q2 = pb.offset(pb.add_psd(D));
  // P1 = Y - P^T, P2 = Y + P^T, Q1 = sI - Y^T, Q2 = sI + Y^T.
  int r = pb.add_rows(-ptp);
  pb.add_term(r, p1, eye);
  pb.add_term(r, y, eye, -1.0);
  r = pb.add_rows(ptp);
  pb.add_term(r, p2, eye);
  pb.add_term(r, y, eye, -1.0);
  r = pb.add_rows(RVector::Zero(n));
  pb.add_term(r, q1, eye);
  pb.add_term(r, y, pt);
  for (int i = 0; i < n; ++i) pb.add_entry(r + i, s, -id(i));
  r = pb.add_rows(RVector::Zero(n));
  pb.add_term(r, q2, eye);
  pb.add_term(r, y, pt, -1.0);
  for (int i = 0; i < n; ++i) pb.add_entry(r + i, s, -id(i));
  pb.add_objective_entry(s, 1.0);
  const conic::Solution sol = conic::solve(pb.build(), solve_options(tol));
  if (sol.status != conic::SolutionStatus::Optimal) throw SolverError("E_WD,2 program did not converge");
  return -std::log2(sol.objective);
}

double e_wjz(const DensityOperator& rho, int k, double tol) {
  const auto [da, db] = bipartite_dims(rho);
  if (k < 2) throw DomainError("k must be at least 2");
  const SetRepresentation c = build_pptk(da, db, k);
  const int D = da * db;
  // rho = V V^dag on its support; F(rho, sigma) = tr sqrt(V^dag sigma V)
  // = max Re tr Y subject to [[I, Y], [Y^dag, V^dag sigma V]] >= 0.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const double cut = kRankTolerance * std::max(1.0, es.eigenvalues().maxCoeff());
  std::vector<int> keep;
  for (int i = 0; i < D; ++i)
    if (es.eigenvalues()(i) > cut) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  CMatrix v(D, r);
  for (int i = 0; i < r; ++i) v.col(i) = es.eigenvectors().col(keep[i]) * std::sqrt(es.eigenvalues()(keep[i]));
  const SparseMatrix compress = linear_map_matrix(D, r, [&](const CMatrix& s) { return CMatrix(v.adjoint() * s * v); });
  const int n = hvec::size(r);

  conic::ProgramBuilder pb;
  const int z = pb.offset(pb.add_psd(2 * r));
  const int x = pb.add_space(c.lift);
  if (c.constraint.size() > 0) pb.add_term(pb.add_rows(c.rhs), x, c.constraint_map);
  const std::vector<int> top = diagonal_block_coords(r, 0);
  const std::vector<int> bottom = diagonal_block_coords(r, r);
  int row = pb.add_rows(hvec::pack(CMatrix::Identity(r, r)));
  for (int i = 0; i < n; ++i) pb.add_entry(row + i, z + top[i], 1.0);
  row = pb.add_rows(RVector::Zero(n));
  for (int i = 0; i < n; ++i) pb.add_entry(row + i, z + bottom[i], 1.0);
  pb.add_term(row, x, SparseMatrix(compress * c.projection), -1.0);
  for (int i = 0; i < r; ++i) pb.add_objective_entry(z + hvec::re(i, r + i), -1.0 / std::sqrt(2.0));
  const conic::Solution sol = conic::solve(pb.build(), solve_options(tol));
  if (sol.status != conic::SolutionStatus::Optimal) throw SolverError("fidelity program did not converge");
  const double f = -sol.objective;
  if (f <= 0.0) return kInf;
  return -2.0 * std::log2(std::min(f, 1.0));
}

double d_m_pptk(const DensityOperator& rho, int k, double tol) {
  const auto [da, db] = bipartite_dims(rho);
  return measured_between(build_singleton(rho.op()), build_pptk(da, db, k), tol);
}

SandwichReport pptk_sandwich(const DensityOperator& rho, int k, int m, const SandwichOptions& opt) {
  const auto [da, db] = bipartite_dims(rho);
  const HermitianOperator r = rho.op();
  return sandwich([r](int l) { return build_singleton(r, l); },
                  [da = da, db = db, k](int l) { return build_pptk(da, db, k, l); }, m, opt);
}

double rains_bound(const DensityOperator& rho, double tol) {
  const auto [da, db] = bipartite_dims(rho);
  return umegaki_between(build_singleton(rho.op()), build_rains(da, db), tol);
}

SandwichReport rains_sandwich(const DensityOperator& rho, int m, const SandwichOptions& opt) {
  const auto [da, db] = bipartite_dims(rho);
  const HermitianOperator r = rho.op();
  return sandwich([r](int l) { return build_singleton(r, l); },
                  [da = da, db = db](int l) { return build_rains(da, db, l); }, m, opt);
}

std::optional<double> e_lr(const DensityOperator& rho) {
  if (numerical_rank(rho.op()) == rho.dim()) return 0.0;
  return std::nullopt;
}

double thauma(const DensityOperator& rho, int d, double tol) {
  if (d == 0) d = smallest_prime_base(rho.dim());
  if (!is_odd_prime(d)) throw DomainError("thauma needs an odd prime qudit dimension");
  const int n = copies_of(rho.dim(), d);
  return umegaki_between(build_singleton(rho.op()), build_wigner_set(d, n), tol);
}

SandwichReport thauma_sandwich(const DensityOperator& rho, int d, int m, const SandwichOptions& opt) {
  if (d == 0) d = smallest_prime_base(rho.dim());
  if (!is_odd_prime(d)) throw DomainError("thauma needs an odd prime qudit dimension");
  const int n = copies_of(rho.dim(), d);
  const HermitianOperator r = rho.op();
  return sandwich([r](int l) { return build_singleton(r, l); },
                  [d, n](int l) { return build_wigner_set(d, n * l); }, m, opt);
}

DensityOperator strange_state() {
  CVector v = CVector::Zero(3);
  v(1) = 1.0;
  v(2) = -1.0;
  return DensityOperator::pure(v);
}

std::vector<DensityOperator> stabilizer_states(int d) {
  if (!is_odd_prime(d)) throw DomainError("stabilizer states need an odd prime dimension");
  const cd omega = std::polar(1.0, 2.0 * M_PI / d);
  CMatrix x = CMatrix::Zero(d, d), zm = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    x((j + 1) % d, j) = 1.0;
    zm(j, j) = std::pow(omega, j);
  }
  std::vector<DensityOperator> out;
  for (int j = 0; j < d; ++j) out.push_back(DensityOperator::pure(CVector::Unit(d, j)));
  CMatrix za = CMatrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Eigen::ComplexEigenSolver<CMatrix> es(x * za);
    for (int j = 0; j < d; ++j) out.push_back(DensityOperator::pure(es.eigenvectors().col(j)));
    za = za * zm;
  }
  return out;
}

SandwichReport adc_bounds(const QuantumChannel& n, const QuantumChannel& m, int level, const SandwichOptions& opt) {
  if (!n.trace_preserving()) throw DomainError("the first channel must be trace preserving");
  return sandwich([n](int l) { return build_channel_image(n, l); },
                  [m](int l) { return build_channel_image(m, l); }, level, opt);
}

double q_ad(double gamma) {
  check_unit_interval(gamma, "gamma");
  auto f = [gamma](double p) { return binary_entropy((1.0 - gamma) * p) - binary_entropy(gamma * p); };
  constexpr int kGrid = 2000;
  int best = 0;
  double fbest = f(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = f(static_cast<double>(i) / kGrid);
    if (v > fbest) {
      fbest = v;
      best = i;
    }
  }
  double a = std::max(0, best - 1) / static_cast<double>(kGrid);
  double b = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), e = a + g * (b - a);
  double fc = f(c), fe = f(e);
  while (b - a > 1e-8) {
    if (fc < fe) {
      a = c;
      c = e;
      fc = fe;
      e = a + g * (b - a);
      fe = f(e);
    } else {
      b = e;
      e = c;
      fe = fc;
      c = b - g * (b - a);
      fc = f(c);
    }
  }
  return std::max({fbest, fc, fe, f(0.5 * (a + b))});
}

double ec_ad_bound(double gamma, double tol) { return d_m_pptk(choi_state(ad_channel(gamma)), 2, tol); }

BoundReport entanglement_report(const DensityOperator& rho, int k, double tol) {
  BoundReport r;
  r.descriptor = "state";
  r.k = k;
  r.e_wd1 = e_wd1(rho);
  r.e_wd2 = e_wd2(rho);
  r.e_wjz = e_wjz(rho, k);
  r.d_m_pptk = d_m_pptk(rho, k, tol);
  r.rains_upper = rains_bound(rho, tol);
  return r;
}

Table figure1(const FigureOptions& opt) {
  const int n = opt.samples > 0 ? opt.samples : 10;
  const int levels = std::max(1, opt.max_level);
  Table t;
  t.columns.push_back("p");
  for (int m = 1; m <= levels; ++m) t.columns.push_back("upper bound m=" + std::to_string(m));
  for (int m = 1; m <= levels; ++m) t.columns.push_back("lower bound m=" + std::to_string(m));
  const std::vector<double> ps = linspace(0.01, 0.1, n);
  t.rows.assign(n, std::vector<double>(1 + 2 * levels, kNaN));
  const QuantumChannel rep = replacer_channel(replacer_vector(), 3);
  parallel_for(n * levels, [&](int idx) {
    const int i = idx / levels, m = idx % levels + 1;
    SandwichOptions so{opt.tol, opt.use_symmetry && m > 1, opt.seed};
    const SandwichReport r = adc_bounds(rep, platypus_channel(ps[i]), m, so);
    t.rows[i][0] = ps[i];
    t.rows[i][m] = r.upper;
    t.rows[i][levels + m] = r.lower;
  });
  return t;
}

namespace {

Table state_family_figure(const FigureOptions& opt, DensityOperator (*state)(int, double),
                          double (*analytic)(int, double)) {
  const int n = opt.samples > 0 ? opt.samples : 11;
  Table t;
  t.columns = {"p", "D_M(rho||PPT2)", "E_WJZ", "D^inf(rho||PPT)"};
  const std::vector<double> ps = linspace(0.0, 1.0, n);
  t.rows.assign(n, std::vector<double>(4, kNaN));
  parallel_for(n, [&](int i) {
    const DensityOperator rho = state(3, ps[i]);
    t.rows[i] = {ps[i], d_m_pptk(rho, 2, opt.tol), e_wjz(rho, 2), analytic(3, ps[i])};
  });
  return t;
}

}  // namespace

Table figure2a(const FigureOptions& opt) { return state_family_figure(opt, isotropic, analytic_iso); }

Table figure2b(const FigureOptions& opt) { return state_family_figure(opt, werner, analytic_werner); }

Table figure3(const FigureOptions& opt) {
  const int per_rank = opt.samples > 0 ? opt.samples : 100;
  constexpr int kDim = 9, kMinRank = 2;
  const int ranks = kDim - kMinRank + 1;
  struct Sample {
    double dm, wd1, wd2;
    std::optional<double> lr;
  };
  std::vector<Sample> samples(ranks * per_rank);
  parallel_for(ranks * per_rank, [&](int idx) {
    const int rank = kMinRank + idx / per_rank;
    const DensityOperator rho = random_density(kDim, rank, opt.seed + idx, {3, 3});
    samples[idx] = {d_m_pptk(rho, 2, opt.tol), e_wd1(rho), e_wd2(rho), e_lr(rho)};
  });
  Table t;
  t.columns = {"rank", "samples", "D_M(rho||PPT2)", "E_LR", "E_WD1", "E_WD2", "fraction D_M(rho||PPT2)>0"};
  for (int r = 0; r < ranks; ++r) {
    double dm = 0, wd1 = 0, wd2 = 0, lr = 0;
    int positive = 0;
    bool lr_defined = true;
    for (int s = 0; s < per_rank; ++s) {
      const Sample& x = samples[r * per_rank + s];
      dm += x.dm;
      wd1 += x.wd1;
      wd2 += x.wd2;
      if (x.lr)
        lr += *x.lr;
      else
        lr_defined = false;
      if (x.dm > 1e-6) ++positive;
    }
    const double inv = 1.0 / per_rank;
    t.rows.push_back({static_cast<double>(kMinRank + r), static_cast<double>(per_rank), dm * inv,
                      lr_defined ? lr * inv : kNaN, wd1 * inv, wd2 * inv, positive * inv});
  }
  return t;
}

Table figure4(const FigureOptions& opt) {
  const int n = opt.samples > 0 ? opt.samples : 9;
  Table t;
  t.columns = {"gamma", "D_M(N(Phi)||PPT2)", "E_WJZ", "E_LR", "Q"};
  t.rows.assign(n, std::vector<double>(5, kNaN));
  parallel_for(n, [&](int i) {
    const double g = static_cast<double>(i + 1) / (n + 1);
    const DensityOperator rho = choi_state(ad_channel(g));
    const std::optional<double> lr = e_lr(rho);
    t.rows[i] = {g, d_m_pptk(rho, 2, opt.tol), e_wjz(rho, 2), lr ? *lr : kNaN, q_ad(g)};
  });
  return t;
}

Table figure(const std::string& name, const FigureOptions& opt) {
  if (name == "1") return figure1(opt);
  if (name == "2a") return figure2a(opt);
  if (name == "2b") return figure2b(opt);
  if (name == "3") return figure3(opt);
  if (name == "4") return figure4(opt);
  throw DomainError("unknown figure: " + name);
}

}  // namespace regent::apps
