#include "regent/conic.hpp"

#include "regent/sets.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace regent::conic {

std::string to_string(ConeKind k) {
  switch (k) {
    case ConeKind::Psd: return "psd";
    case ConeKind::Qre: return "qre";
    case ConeKind::Ore: return "ore";
    case ConeKind::Nonneg: return "nonneg";
    case ConeKind::Free: return "free";
  }
  return "unknown";
}

ConeKind cone_kind_from_string(const std::string& s) {
  if (s == "psd") return ConeKind::Psd;
  if (s == "qre") return ConeKind::Qre;
  if (s == "ore") return ConeKind::Ore;
  if (s == "nonneg") return ConeKind::Nonneg;
  if (s == "free") return ConeKind::Free;
  throw DomainError("unknown cone kind: " + s);
}

std::string to_string(SolutionStatus s) {
  switch (s) {
    case SolutionStatus::Optimal: return "optimal";
    case SolutionStatus::Infeasible: return "infeasible";
    case SolutionStatus::Unbounded: return "unbounded";
    case SolutionStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

int ConeSpec::size() const {
  const int N = hvec::size(n);
  switch (kind) {
    case ConeKind::Psd: return N;
    case ConeKind::Nonneg:
    case ConeKind::Free: return n;
    case ConeKind::Qre: return (fixed_first ? N : 2 * N) + 1;
    case ConeKind::Ore: return fixed_first ? 2 * N : 3 * N;
  }
  return 0;
}

int ConeSpec::y_offset() const {
  if (kind != ConeKind::Qre && kind != ConeKind::Ore) throw DomainError("y_offset needs an entropy cone");
  return fixed_first ? 0 : hvec::size(n);
}

int ConeSpec::t_offset() const { return y_offset() + hvec::size(n); }

int ConicProgram::num_vars() const {
  int s = 0;
  for (const auto& b : blocks) s += b.size();
  return s;
}

std::vector<int> ConicProgram::offsets() const {
  std::vector<int> o;
  int s = 0;
  for (const auto& b : blocks) {
    o.push_back(s);
    s += b.size();
  }
  return o;
}

void ConicProgram::validate() const {
  for (const auto& b : blocks) {
    if (b.n < 1) throw DomainError("cone dimension must be positive");
    if (b.fixed_first) {
      if (b.kind != ConeKind::Qre && b.kind != ConeKind::Ore)
        throw DomainError("a fixed first argument is only allowed for entropy cones");
      if (b.fixed_first->rows() != b.n || b.fixed_first->cols() != b.n)
        throw DomainError("fixed first argument has the wrong dimension");
    }
  }
  const int nv = num_vars();
  if (c.size() != nv) throw DomainError("objective length does not match the variables");
  if (E.cols() != nv && !(E.rows() == 0 && E.cols() == 0))
    throw DomainError("equality map has the wrong number of columns");
  if (E.rows() != b.size()) throw DomainError("equality map and right-hand side disagree");
}

int ProgramBuilder::add_block(ConeSpec spec) {
  if (spec.n < 1) throw DomainError("cone dimension must be positive");
  blocks_.push_back(std::move(spec));
  offsets_.push_back(nvars_);
  nvars_ += blocks_.back().size();
  return static_cast<int>(blocks_.size()) - 1;
}

int ProgramBuilder::add_space(const Space& s) {
  const int first = nvars_;
  for (const auto& comp : s.components()) {
    if (comp.dim == 1)
      add_nonneg(1);
    else
      add_psd(comp.dim);
  }
  return first;
}

int ProgramBuilder::add_rows(const RVector& rhs) {
  const int r = static_cast<int>(rhs_.size());
  rhs_.insert(rhs_.end(), rhs.data(), rhs.data() + rhs.size());
  return r;
}

int ProgramBuilder::add_row(double rhs) {
  rhs_.push_back(rhs);
  return static_cast<int>(rhs_.size()) - 1;
}

void ProgramBuilder::add_term(int row, int col, const SparseMatrix& M, double scale) {
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it) add_entry(row + static_cast<int>(it.row()), col + k, scale * it.value());
}

void ProgramBuilder::add_entry(int row, int col, double v) {
  if (v != 0.0) trips_.emplace_back(row, col, v);
}

void ProgramBuilder::add_objective(int col, const RVector& v, double scale) {
  for (int i = 0; i < v.size(); ++i)
    if (v(i) != 0.0) obj_.emplace_back(col + i, scale * v(i));
}

void ProgramBuilder::add_objective_entry(int col, double v) { obj_.emplace_back(col, v); }

ConicProgram ProgramBuilder::build() const {
  ConicProgram p;
  p.blocks = blocks_;
  const int m = static_cast<int>(rhs_.size());
  p.E.resize(m, nvars_);
  for (const auto& t : trips_)
    if (t.row() >= m || t.col() >= nvars_) throw DomainError("program entry out of range");
  p.E.setFromTriplets(trips_.begin(), trips_.end());
  p.b = Eigen::Map<const RVector>(rhs_.data(), m);
  p.c = RVector::Zero(nvars_);
  for (const auto& [col, v] : obj_) p.c(col) += v;
  p.offset = offset_;
  p.validate();
  return p;
}

namespace {

bool has_entropy(const ConicProgram& p) {
  return std::any_of(p.blocks.begin(), p.blocks.end(),
                     [](const ConeSpec& b) { return b.kind == ConeKind::Qre || b.kind == ConeKind::Ore; });
}

SolutionStatus map_status(const sdp::Result& r, double tol) {
  switch (r.status) {
    case sdp::Status::Optimal: return SolutionStatus::Optimal;
    case sdp::Status::PrimalInfeasible: return SolutionStatus::Infeasible;
    case sdp::Status::DualInfeasible: return SolutionStatus::Unbounded;
    default: return r.accuracy() <= tol ? SolutionStatus::Optimal : SolutionStatus::MaxIterations;
  }
}

Solution fill(const ConicProgram& p, const sdp::Result& r, double tol) {
  Solution s;
  s.status = map_status(r, tol);
  const int nv = p.num_vars();
  s.x = r.x.size() >= nv ? RVector(r.x.head(nv)) : RVector::Zero(nv);
  const std::vector<int> offs = p.offsets();
  for (size_t k = 0; k < p.blocks.size(); ++k) s.blocks.push_back(s.x.segment(offs[k], p.blocks[k].size()));
  s.objective = r.primal_objective;
  s.dual_objective = r.dual_objective;
  s.accuracy = r.accuracy();
  s.iterations = r.iterations;
  return s;
}

sdp::Options engine_options(const SolveOptions& opt) {
  sdp::Options o;
  o.tol = std::clamp(opt.tol * 1e-2, 1e-10, 1e-8);
  o.form = opt.form;
  o.verbose = opt.verbose;
  return o;
}

}  // namespace

Solution solve(const ConicProgram& p, const SolveOptions& opt) {
  if (!(opt.tol >= 1e-9)) throw DomainError("solver tolerance must be at least 1e-9");
  p.validate();
  const sdp::Options eo = engine_options(opt);
  // Accept iterates that stalled close to optimality.
  const double strict = std::max(opt.tol, 10 * eo.tol);
  const double accept = std::max(strict, opt.stall_accept);
  if (!has_entropy(p)) {
    sdp::Result r = sdp::solve(lower(p, opt.start), eo);
    Solution s = fill(p, r, accept);
    s.order = opt.start;
    return s;
  }
  ApproxOrder ord = opt.start;
  Solution prev;
  bool have_prev = false;
  while (true) {
    if (opt.verbose) std::cerr << "conic: order (" << ord.quad << "," << ord.sqrt_steps << ")\n";
    sdp::Result r = sdp::solve(lower(p, ord), eo);
    Solution s = fill(p, r, accept);
    s.order = ord;
    s.has_entropy_cones = true;
    if (s.status == SolutionStatus::Infeasible || s.status == SolutionStatus::Unbounded) return s;
    if (have_prev) {
      s.order_change = std::abs(s.objective - prev.objective);
      s.iterations += prev.iterations;
      // A failed refinement falls back to the previous order, and so does a stalled
      // one when the previous order met the requested tolerance.
      const bool stalled = s.status != SolutionStatus::Optimal || (s.accuracy > strict && prev.accuracy <= strict);
      if (stalled && prev.status == SolutionStatus::Optimal) {
        prev.order_change = s.order_change;
        prev.iterations = s.iterations;
        return prev;
      }
      // Changes below the solve accuracy cannot be resolved by further refinement.
      const double noise = s.accuracy + prev.accuracy;
      if (s.order_change < std::max(opt.tol / 10, noise)) {
        if (prev.accuracy < s.accuracy && prev.status == SolutionStatus::Optimal) {
          prev.order_change = s.order_change;
          prev.iterations = s.iterations;
          return prev;
        }
        return s;
      }
    } else {
      s.order_change = std::numeric_limits<double>::infinity();
    }
    const int next = std::max(ord.quad, ord.sqrt_steps) + 1;
    if (!opt.escalate || next > opt.max_order) return s;
    prev = s;
    have_prev = true;
    ord = {next, next};
  }
}

Solution solve(const ConicProgram& p, double tol) {
  SolveOptions o;
  o.tol = tol;
  return solve(p, o);
}

namespace {

void check_compatible(const SetRepresentation& a, const SetRepresentation& b) {
  a.validate();
  b.validate();
  const auto& ca = a.ambient.components();
  const auto& cb = b.ambient.components();
  bool same = ca.size() == cb.size();
  for (size_t i = 0; same && i < ca.size(); ++i)
    same = ca[i].dim == cb[i].dim && std::abs(ca[i].weight - cb[i].weight) <= 1e-12 * std::max(1.0, ca[i].weight);
  if (!same) throw DomainError("sets live in different ambient spaces");
}

// Adds the lift variables and the rows F x = g. Returns the lift column offset.
int add_lift(ProgramBuilder& pb, const SetRepresentation& s) {
  const int col = pb.add_space(s.lift);
  if (s.constraint.size() > 0) {
    const int r = pb.add_rows(s.rhs);
    pb.add_term(r, col, s.constraint_map);
  }
  return col;
}

// Adds the epigraph variables of h_C(w) <= t: lambda (free) and the lift slack.
// Returns the free lambda column; the slack rows F^T lambda - Pi^T w - Z = 0 are
// started at the returned row (the caller adds -Pi^T w terms).
struct EpiHandle {
  int lambda = 0;
  int rows = 0;
};

EpiHandle add_epigraph(ProgramBuilder& pb, const EpigraphRepresentation& e) {
  EpiHandle h;
  const int nl = e.constraint.size();
  if (nl > 0) h.lambda = pb.offset(pb.add_free(nl));
  const int z = pb.add_space(e.lift);
  h.rows = pb.add_rows(RVector::Zero(e.lift.size()));
  for (int i = 0; i < e.lift.size(); ++i) pb.add_entry(h.rows + i, z + i, -1.0);
  if (nl > 0) pb.add_term(h.rows, h.lambda, e.constraint_adjoint);
  return h;
}

}  // namespace

ConicProgram build_umegaki_program(const SetRepresentation& A, const SetRepresentation& B) {
  check_compatible(A, B);
  const Space& amb = A.ambient;
  ProgramBuilder pb;
  const bool point = A.point.has_value();
  int colA = 0;
  if (!point) colA = add_lift(pb, A);
  const int colB = add_lift(pb, B);
  std::vector<CMatrix> rho;
  if (point) rho = amb.unpack(*A.point);
  std::vector<int> qre(amb.num_components());
  for (int c = 0; c < amb.num_components(); ++c) {
    const Component& comp = amb.components()[c];
    ConeSpec spec{ConeKind::Qre, comp.dim, std::nullopt};
    if (point) {
      spec.fixed_first = rho[c];
    } else if (comp.dim > 8) {
      throw DomainError("relative entropy with a non-singleton first set is limited to blocks of dimension 8");
    }
    qre[c] = pb.add_block(spec);
  }
  auto link = [&](const SparseMatrix& proj, int liftcol, bool second) {
    const int r = pb.add_rows(RVector::Zero(amb.size()));
    pb.add_term(r, liftcol, proj, -1.0);
    for (int c = 0; c < amb.num_components(); ++c) {
      const Component& comp = amb.components()[c];
      const int n = hvec::size(comp.dim);
      const int base = pb.offset(qre[c]) + (second ? (point ? 0 : n) : 0);
      const double sw = std::sqrt(comp.weight);
      for (int i = 0; i < n; ++i) pb.add_entry(r + amb.offset(c) + i, base + i, sw);
    }
  };
  if (!point) link(A.projection, colA, false);
  link(B.projection, colB, true);
  for (int c = 0; c < amb.num_components(); ++c) {
    const Component& comp = amb.components()[c];
    const int n = hvec::size(comp.dim);
    const int tcol = pb.offset(qre[c]) + (point ? n : 2 * n);
    pb.add_objective_entry(tcol, comp.weight);
  }
  return pb.build();
}

ConicProgram build_measured_program(const SetRepresentation& A, const SetRepresentation& B) {
  check_compatible(A, B);
  if (!A.trace_normalized) throw DomainError("the first set must contain only unit-trace operators");
  const Space& amb = A.ambient;
  ProgramBuilder pb;
  // t = kTFloor + u with u >= 0; t' free.
  const int u = pb.offset(pb.add_nonneg(1));
  const int tp = pb.offset(pb.add_free(1));
  std::vector<int> ore(amb.num_components());
  for (int c = 0; c < amb.num_components(); ++c) {
    const int n = amb.components()[c].dim;
    ore[c] = pb.add_block({ConeKind::Ore, n, CMatrix(CMatrix::Identity(n, n))});
  }
  // Ambient-coordinate matrices of W and V in terms of the cone coordinates.
  std::vector<Triplet> tw, tv;
  for (int c = 0; c < amb.num_components(); ++c) {
    const Component& comp = amb.components()[c];
    const int n = hvec::size(comp.dim);
    const double sw = std::sqrt(comp.weight);
    for (int i = 0; i < n; ++i) {
      tw.emplace_back(amb.offset(c) + i, pb.offset(ore[c]) + i, sw);
      tv.emplace_back(amb.offset(c) + i, pb.offset(ore[c]) + n + i, sw);
    }
  }
  // V <= kVCap I removes the unbounded direction of V off the support of A.
  for (int c = 0; c < amb.num_components(); ++c) {
    const int n = amb.components()[c].dim;
    const int slack = pb.offset(pb.add_psd(n));
    const int v = pb.offset(ore[c]) + hvec::size(n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        const int parts = i == j ? 1 : 2;
        for (int q = 0; q < parts; ++q) {
          const int k = i == j ? hvec::diag(j) : hvec::re(i, j) + q;
          const int r = pb.add_row(i == j ? kVCap : 0.0);
          pb.add_entry(r, slack + k, 1.0);
          pb.add_entry(r, v + k, 1.0);
        }
      }
  }
  const int nv_cones = pb.num_vars();
  SparseMatrix Wmap(amb.size(), nv_cones), Vmap(amb.size(), nv_cones);
  Wmap.setFromTriplets(tw.begin(), tw.end());
  Vmap.setFromTriplets(tv.begin(), tv.end());

  // (W, 1) in epi h_B.
  const EpigraphRepresentation eb = epigraph(B);
  const EpiHandle hb = add_epigraph(pb, eb);
  {
    SparseMatrix m = eb.projection_adjoint * Wmap;
    pb.add_term(hb.rows, 0, m, -1.0);
    const int s = pb.offset(pb.add_nonneg(1));
    const int r = pb.add_row(1.0);
    if (eb.constraint.size() > 0)
      for (int i = 0; i < eb.rhs.size(); ++i) pb.add_entry(r, hb.lambda + i, eb.rhs(i));
    pb.add_entry(r, s, 1.0);
  }
  // (V + t' I, t) in epi h_A.
  const EpigraphRepresentation ea = epigraph(A);
  const EpiHandle ha = add_epigraph(pb, ea);
  {
    SparseMatrix m = ea.projection_adjoint * Vmap;
    pb.add_term(ha.rows, 0, m, -1.0);
    RVector pid = ea.projection_adjoint * amb.identity();
    for (int i = 0; i < pid.size(); ++i) pb.add_entry(ha.rows + i, tp, -pid(i));
    const int s = pb.offset(pb.add_nonneg(1));
    const int r = pb.add_row(kTFloor);
    if (ea.constraint.size() > 0)
      for (int i = 0; i < ea.rhs.size(); ++i) pb.add_entry(r, ha.lambda + i, ea.rhs(i));
    pb.add_entry(r, s, 1.0);
    pb.add_entry(r, u, -1.0);
  }
  pb.add_objective_entry(u, 1.0);
  pb.add_objective_entry(tp, -1.0);
  pb.add_offset(kTFloor);
  return pb.build();
}

}  // namespace regent::conic
