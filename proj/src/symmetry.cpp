#include "regent/symmetry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

namespace regent::symmetry {

namespace {

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_partition(const Partition& p) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) throw DomainError("partition parts must be positive");
    if (i > 0 && p[i] > p[i - 1]) throw DomainError("partition parts must be weakly decreasing");
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int d, int m) {
  if (d < 1 || m < 1) throw DomainError("partitions need d, m >= 1");
  std::vector<Partition> out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int remaining, int maxpart) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == d) return;
    for (int p = std::min(remaining, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(m, m);
  return out;
}

long long ssyt_count(const Partition& lambda, int d) {
  check_partition(lambda);
  if (static_cast<int>(lambda.size()) > d) return 0;
  // prod (d + c) / h over cells, evaluated as an exact rational.
  long double num = 1, den = 1;
  for (size_t i = 0; i < lambda.size(); ++i)
    for (int j = 0; j < lambda[i]; ++j) {
      int arm = lambda[i] - j - 1;
      int leg = 0;
      for (size_t k = i + 1; k < lambda.size() && lambda[k] > j; ++k) ++leg;
      num *= d + j - static_cast<int>(i);
      den *= arm + leg + 1;
    }
  return std::llround(num / den);
}

long long ssyt_count_bruteforce(const Partition& lambda, int d) {
  check_partition(lambda);
  std::vector<std::pair<int, int>> cells;
  for (size_t i = 0; i < lambda.size(); ++i)
    for (int j = 0; j < lambda[i]; ++j) cells.emplace_back(static_cast<int>(i), j);
  std::map<std::pair<int, int>, int> fill;
  long long count = 0;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == cells.size()) {
      ++count;
      return;
    }
    auto [i, j] = cells[k];
    for (int v = 1; v <= d; ++v) {
      if (j > 0 && fill[{i, j - 1}] > v) continue;
      if (i > 0 && fill[{i - 1, j}] >= v) continue;
      fill[{i, j}] = v;
      rec(k + 1);
    }
    fill.erase({i, j});
  };
  rec(0);
  return count;
}

long long syt_count(const Partition& lambda) {
  check_partition(lambda);
  int n = std::accumulate(lambda.begin(), lambda.end(), 0);
  long double r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  for (size_t i = 0; i < lambda.size(); ++i)
    for (int j = 0; j < lambda[i]; ++j) {
      int arm = lambda[i] - j - 1;
      int leg = 0;
      for (size_t k = i + 1; k < lambda.size() && lambda[k] > j; ++k) ++leg;
      r /= arm + leg + 1;
    }
  return std::llround(r);
}

Partition cycle_type(const std::vector<int>& perm) {
  const int m = static_cast<int>(perm.size());
  std::vector<char> seen(m, 0);
  Partition t;
  for (int i = 0; i < m; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j]) {
      if (perm[j] < 0 || perm[j] >= m) throw DomainError("invalid permutation");
      seen[j] = 1;
      ++len;
    }
    t.push_back(len);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

namespace {

// Murnaghan-Nakayama on beta sets: removing a rim hook of length r moves one bead
// from position b to b - r; the sign counts the beads jumped over.
long long mn_rec(std::vector<int>& beta, const Partition& mu, size_t k) {
  if (k == mu.size()) return 1;
  const int r = mu[k];
  long long total = 0;
  std::set<int> occupied(beta.begin(), beta.end());
  for (size_t i = 0; i < beta.size(); ++i) {
    const int b = beta[i];
    if (b - r < 0 || occupied.count(b - r)) continue;
    int jumped = 0;
    for (int x : beta)
      if (x > b - r && x < b) ++jumped;
    beta[i] = b - r;
    const long long sub = mn_rec(beta, mu, k + 1);
    beta[i] = b;
    total += (jumped % 2 ? -1 : 1) * sub;
  }
  return total;
}

}  // namespace

long long character(const Partition& lambda, const Partition& mu) {
  check_partition(lambda);
  const int n = std::accumulate(lambda.begin(), lambda.end(), 0);
  const int nm = std::accumulate(mu.begin(), mu.end(), 0);
  if (n != nm) throw DomainError("character arguments have different sizes");
  const int h = static_cast<int>(lambda.size());
  std::vector<int> beta(h);
  for (int i = 0; i < h; ++i) beta[i] = lambda[i] + (h - 1 - i);
  return mn_rec(beta, mu, 0);
}

std::vector<std::vector<int>> all_permutations(int m) {
  if (m < 1) throw DomainError("permutation size must be positive");
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

CMatrix twirl(const CMatrix& x, int d, int m) {
  if (m > 6) throw DomainError("twirl enumerates all permutations; m > 6 is not supported");
  if (x.rows() != ipow(d, m) || x.cols() != x.rows()) throw DomainError("operator dimension must be d^m");
  CMatrix acc = CMatrix::Zero(x.rows(), x.cols());
  const auto perms = all_permutations(m);
  for (const auto& p : perms) acc += permute_copies(x, d, p);
  return acc / static_cast<double>(perms.size());
}

HermitianOperator twirl(const HermitianOperator& x, int d, int m) {
  return HermitianOperator(twirl(x.matrix(), d, m), x.subsystems());
}

long long orbit_count(int d, int m) {
  const int n = ipow(d, m);
  if (static_cast<long long>(n) * n > 4'000'000) throw DomainError("orbit counting limited to d^m <= 2000");
  std::set<std::vector<std::pair<int, int>>> orbits;
  std::vector<std::pair<int, int>> key(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = i, b = j;
      for (int k = m - 1; k >= 0; --k) {
        key[k] = {a % d, b % d};
        a /= d;
        b /= d;
      }
      std::vector<std::pair<int, int>> s = key;
      std::sort(s.begin(), s.end());
      orbits.insert(s);
    }
  return static_cast<long long>(orbits.size());
}

BlockDecomposition::BlockDecomposition(int d, int m, std::vector<Block> blocks)
    : d_(d), m_(m), dim_(ipow(d, m)), blocks_(std::move(blocks)) {}

RMatrix BlockDecomposition::unitary() const {
  RMatrix u(dim_, dim_);
  int col = 0;
  for (const auto& b : blocks_)
    for (const auto& B : b.bases) {
      u.middleCols(col, b.size) = B;
      col += b.size;
    }
  return u;
}

long long BlockDecomposition::certificate() const {
  long long s = 0;
  for (const auto& b : blocks_) s += static_cast<long long>(b.size) * b.size;
  return s;
}

std::vector<CMatrix> BlockDecomposition::phi(const CMatrix& x) const {
  if (x.rows() != dim_) throw DomainError("operator dimension does not match the decomposition");
  std::vector<CMatrix> out;
  for (const auto& b : blocks_) {
    const CMatrix B = b.bases[0].cast<cd>();
    out.push_back(B.adjoint() * x * B);
  }
  return out;
}

CMatrix BlockDecomposition::phi_inverse(const std::vector<CMatrix>& xs) const {
  if (xs.size() != blocks_.size()) throw DomainError("block count does not match the decomposition");
  CMatrix x = CMatrix::Zero(dim_, dim_);
  for (size_t i = 0; i < blocks_.size(); ++i)
    for (const auto& B : blocks_[i].bases) {
      const CMatrix Bc = B.cast<cd>();
      x += Bc * xs[i] * Bc.adjoint();
    }
  return x;
}

Space BlockDecomposition::space() const {
  std::vector<Component> comps;
  for (const auto& b : blocks_) comps.push_back({b.size, static_cast<double>(b.multiplicity)});
  return Space(comps);
}

SparseMatrix BlockDecomposition::embedding() const {
  const Space s = space();
  std::vector<Triplet> trips;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    const double scale = 1.0 / std::sqrt(static_cast<double>(b.multiplicity));
    SparseMatrix m = linear_map_matrix(b.size, dim_, [&](const CMatrix& y) {
      CMatrix acc = CMatrix::Zero(dim_, dim_);
      for (const auto& B : b.bases) {
        const CMatrix Bc = B.cast<cd>();
        acc += Bc * y * Bc.adjoint();
      }
      return CMatrix(acc * scale);
    }, 1e-13);
    const int off = s.offset(static_cast<int>(i));
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) trips.emplace_back(it.row(), off + k, it.value());
  }
  SparseMatrix e(hvec::size(dim_), s.size());
  e.setFromTriplets(trips.begin(), trips.end());
  return e;
}

namespace {

// Dense matrix of sum_pi coeff(pi) P_pi.
RMatrix group_element(int d, const std::vector<std::vector<int>>& perms, const std::vector<double>& coeff) {
  const int n = ipow(d, static_cast<int>(perms[0].size()));
  RMatrix g = RMatrix::Zero(n, n);
  for (size_t k = 0; k < perms.size(); ++k) {
    if (coeff[k] == 0.0) continue;
    const std::vector<int> idx = copy_permutation_indices(d, perms[k]);
    for (int i = 0; i < n; ++i) g(idx[i], i) += coeff[k];
  }
  return g;
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
  std::vector<int> q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

bool try_decompose(int d, int m, std::uint64_t seed, std::vector<Block>& out) {
  const auto perms = all_permutations(m);
  std::map<std::vector<int>, size_t> index;
  for (size_t k = 0; k < perms.size(); ++k) index[perms[k]] = k;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  // Symmetric generic element and a second generic element for aligning copies.
  std::vector<double> cs(perms.size(), 0.0), cr(perms.size());
  for (size_t k = 0; k < perms.size(); ++k) {
    const double c = nd(rng);
    cs[k] += c;
    cs[index[inverse_perm(perms[k])]] += c;
  }
  for (auto& c : cr) c = nd(rng);
  const RMatrix G = group_element(d, perms, cs);
  const RMatrix R = group_element(d, perms, cr);
  const double factorial = static_cast<double>(perms.size());
  out.clear();
  for (const Partition& lam : enumerate_partitions(d, m)) {
    const int size = static_cast<int>(ssyt_count(lam, d));
    const int mult = static_cast<int>(syt_count(lam));
    std::vector<double> chi(perms.size());
    for (size_t k = 0; k < perms.size(); ++k) chi[k] = mult * character(lam, cycle_type(perms[k])) / factorial;
    const RMatrix P = group_element(d, perms, chi);
    Eigen::SelfAdjointEigenSolver<RMatrix> ep(0.5 * (P + P.transpose()));
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < ep.eigenvalues().size(); ++i)
      if (ep.eigenvalues()(i) > 0.5) keep.push_back(static_cast<int>(i));
    if (static_cast<int>(keep.size()) != size * mult) throw SolverError("isotypic component has unexpected dimension");
    RMatrix W(P.rows(), static_cast<Eigen::Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) W.col(static_cast<Eigen::Index>(k)) = ep.eigenvectors().col(keep[k]);
    Eigen::SelfAdjointEigenSolver<RMatrix> eg(W.transpose() * G * W);
    const RVector& ev = eg.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    Block blk;
    blk.lambda = lam;
    blk.size = size;
    blk.multiplicity = mult;
    for (int c = 0; c < mult; ++c) {
      const double lo = ev(c * size), hi = ev(c * size + size - 1);
      if (hi - lo > 1e-8 * scale) return false;
      if (c + 1 < mult && ev((c + 1) * size) - hi < 1e-6 * scale) return false;
      blk.bases.push_back(W * eg.eigenvectors().middleCols(c * size, size));
    }
    const RMatrix B0 = blk.bases[0];
    for (int c = 1; c < mult; ++c) {
      const RMatrix M = blk.bases[c].transpose() * R * B0;
      const double norm = std::sqrt((M.transpose() * M).trace() / size);
      if (norm < 1e-6) return false;
      blk.bases[c] = blk.bases[c] * (M / norm);
    }
    out.push_back(std::move(blk));
  }
  return true;
}

}  // namespace

BlockDecomposition block_decompose(int d, int m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw DomainError("block decomposition needs d, m >= 1");
  if (m > 6) throw DomainError("block decomposition enumerates permutations; m > 6 is not supported");
  if (ipow(d, m) > 1024) throw DomainError("block decomposition limited to d^m <= 1024");
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::uint64_t>, BlockDecomposition> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({d, m, seed});
    if (it != cache.end()) return it->second;
  }
  std::vector<Block> blocks;
  for (int attempt = 0; attempt < 5; ++attempt) {
    if (try_decompose(d, m, seed + attempt, blocks)) {
      BlockDecomposition dec(d, m, std::move(blocks));
      std::lock_guard<std::mutex> lock(mu);
      cache.emplace(std::make_tuple(d, m, seed), dec);
      return dec;
    }
  }
  throw SolverError("could not resolve the commutant block structure");
}

ReducedSpace reduce_space(const Space& s, std::uint64_t seed) {
  std::vector<int> group_of(s.num_components(), -1);
  for (size_t g = 0; g < s.groups().size(); ++g) {
    const SymmetryGroup& gr = s.groups()[g];
    for (int c = gr.first; c < gr.first + gr.count; ++c) group_of.at(c) = static_cast<int>(g);
  }
  std::vector<Component> comps;
  std::vector<Triplet> trips;
  int roff = 0;
  auto add_identity = [&](int c) {
    comps.push_back(s.components()[c]);
    for (int i = 0; i < s.comp_size(c); ++i) trips.emplace_back(s.offset(c) + i, roff + i, 1.0);
    roff += s.comp_size(c);
  };
  for (int c = 0; c < s.num_components(); ++c) {
    const int g = group_of[c];
    if (g < 0 || s.groups()[g].kind == SymmetryKind::Invariant || s.groups()[g].m < 2) {
      add_identity(c);
      continue;
    }
    const SymmetryGroup& gr = s.groups()[g];
    if (c != gr.first) continue;
    const double w = s.components()[c].weight;
    if (gr.kind == SymmetryKind::TensorPower) {
      const BlockDecomposition dec = block_decompose(gr.q, gr.m, seed);
      if (dec.dim() != s.components()[c].dim) throw DomainError("group does not match its component dimension");
      const SparseMatrix e = dec.embedding();
      for (const auto& b : dec.blocks()) comps.push_back({b.size, w * b.multiplicity});
      for (int k = 0; k < e.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(e, k); it; ++it) trips.emplace_back(s.offset(c) + it.row(), roff + k, it.value());
      roff += static_cast<int>(e.cols());
    } else {
      // Orbits of words: one scalar per multiset of letters.
      std::map<std::vector<int>, std::vector<int>> orbits;
      for (int u = 0; u < gr.count; ++u) {
        std::vector<int> letters(gr.m);
        int v = u;
        for (int k = gr.m - 1; k >= 0; --k) {
          letters[k] = v % gr.q;
          v /= gr.q;
        }
        std::sort(letters.begin(), letters.end());
        orbits[letters].push_back(u);
      }
      for (const auto& [key, members] : orbits) {
        (void)key;
        const int cw = gr.first + members[0];
        if (s.components()[cw].dim != 1) throw DomainError("word groups must consist of scalar components");
        comps.push_back({1, w * static_cast<double>(members.size())});
        const double v = 1.0 / std::sqrt(static_cast<double>(members.size()));
        for (int u : members) trips.emplace_back(s.offset(gr.first + u), roff, v);
        roff += 1;
      }
    }
  }
  ReducedSpace r;
  r.space = Space(comps);
  r.embedding.resize(s.size(), roff);
  r.embedding.setFromTriplets(trips.begin(), trips.end());
  return r;
}

ReducedSet reduce(const SetRepresentation& c, std::uint64_t seed) {
  c.validate();
  if (!c.symmetry_certified) throw DomainError("set " + c.name + " is not certified as permutation covariant");
  const double defect = symmetry_defect(c, 3, seed);
  if (defect > 1e-9)
    throw DomainError("set " + c.name + " fails the permutation covariance probe (defect " + std::to_string(defect) + ")");
  const ReducedSpace rl = reduce_space(c.lift, seed);
  const ReducedSpace ra = reduce_space(c.ambient, seed);
  const ReducedSpace rc = reduce_space(c.constraint, seed);
  ReducedSet out;
  SetRepresentation& r = out.rep;
  r = c;
  r.lift = rl.space;
  r.ambient = ra.space;
  r.constraint = rc.space;
  r.projection = SparseMatrix(ra.embedding.transpose() * c.projection * rl.embedding).pruned(1e-13);
  r.constraint_map = SparseMatrix(rc.embedding.transpose() * c.constraint_map * rl.embedding).pruned(1e-13);
  r.rhs = rc.embedding.transpose() * c.rhs;
  if (c.point) r.point = RVector(ra.embedding.transpose() * *c.point);
  r.reduced = true;
  r.validate();
  out.lift_embedding = rl.embedding;
  out.ambient_embedding = ra.embedding;
  out.constraint_embedding = rc.embedding;
  return out;
}

SetRepresentation reduce_setrep(const SetRepresentation& c, std::uint64_t seed) { return reduce(c, seed).rep; }

}  // namespace regent::symmetry
