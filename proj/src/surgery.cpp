#include "abelcs/surgery.hpp"

#include <numeric>

namespace abelcs {

bool ObservableSpec::has_cross_links() const {
  for (Eigen::Index i = 0; i < cross_links.rows(); ++i)
    for (Eigen::Index j = 0; j < cross_links.cols(); ++j)
      if (cross_links(i, j) != 0) return true;
  return false;
}

ObservableSpec ObservableSpec::empty(long m, long n) {
  ObservableSpec o;
  o.charges = IntMat::Zero(m, n);
  o.trivial_links = IntMat(0, 0);
  o.cross_links = IntMat(0, n * m);
  return o;
}

void validate_observable(ObservableSpec& obs, long m, long n) {
  if (obs.charges.rows() != m || obs.charges.cols() != n)
    throw DimensionError("charges must be " + std::to_string(m) + " x " + std::to_string(n) +
                         ", got " + std::to_string(obs.charges.rows()) + " x " +
                         std::to_string(obs.charges.cols()));
  long t = static_cast<long>(obs.trivial.size());
  for (long a = 0; a < t; ++a)
    if (obs.trivial[a].copy < 0 || obs.trivial[a].copy >= n)
      throw DimensionError("trivial component " + std::to_string(a) + " has copy index out of range");
  if (obs.trivial_links.size() == 0 && t > 0) {
    obs.trivial_links = IntMat::Zero(t, t);
    for (long a = 0; a < t; ++a) obs.trivial_links(a, a) = obs.trivial[a].framing;
  } else if (obs.trivial_links.size() == 0) {
    obs.trivial_links = IntMat(0, 0);
  }
  if (obs.trivial_links.rows() != t || obs.trivial_links.cols() != t)
    throw DimensionError("trivial_links must be " + std::to_string(t) + " x " + std::to_string(t));
  if (!is_symmetric(obs.trivial_links)) throw InputError("trivial_links must be symmetric");
  for (long a = 0; a < t; ++a)
    if (obs.trivial_links(a, a) != obs.trivial[a].framing)
      throw InputError("trivial_links diagonal must equal the framing of trivial component " +
                       std::to_string(a));
  if (obs.cross_links.size() == 0) {
    obs.cross_links = IntMat::Zero(t, n * m);
  } else if (obs.cross_links.rows() != t || obs.cross_links.cols() != n * m) {
    throw DimensionError("cross_links must be " + std::to_string(t) + " x " + std::to_string(n * m));
  }
}

IntMat BlockDecomposition::reassemble() const {
  IntMat PLinvT = integer_inverse_unimodular(P_L).transpose();
  IntMat PKinv = integer_inverse_unimodular(P_K);
  return PLinvT * charges_normalized * PKinv;
}

namespace {

void check_hint(const IntMat& P, const IntMat& M, const char* name, IntMat& M0, long& r) {
  if (P.rows() != M.rows() || P.cols() != M.rows())
    throw DimensionError(std::string(name) + " has the wrong size");
  if (!is_unimodular(P)) throw PreconditionError(std::string(name) + " is not unimodular");
  IntMat T = P.transpose() * M * P;
  long n = static_cast<long>(M.rows());
  r = n;
  while (r > 0) {
    bool zero = true;
    for (long j = 0; j < n; ++j)
      if (T(r - 1, j) != 0) zero = false;
    if (!zero) break;
    --r;
  }
  M0 = T.topLeftCorner(r, r);
  for (long i = r; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (T(i, j) != 0 || T(j, i) != 0)
        throw PreconditionError(std::string(name) + " does not split off the zero block");
  if (determinant(M0) == 0)
    throw PreconditionError(std::string(name) + " leaves a degenerate leading block");
}

}  // namespace

BlockDecomposition decompose(const SurgeryPresentation& Lp, const IntMat& C, const ObservableSpec& obs,
                             const std::optional<FrameHint>& hint) {
  const IntMat& L = Lp.L;
  require_symmetric(L, "surgery matrix L");
  if (C.rows() != C.cols()) throw DimensionError("coupling matrix must be square");
  long m = static_cast<long>(L.rows()), n = static_cast<long>(C.rows());
  if (obs.charges.rows() != m || obs.charges.cols() != n)
    throw DimensionError("charges must be m x n");
  IntMat K = C + C.transpose();

  BlockDecomposition b;
  b.m = m;
  b.n = n;
  if (hint) {
    check_hint(hint->P_L, L, "P_L", b.L0, b.r);
    check_hint(hint->P_K, K, "P_K", b.K0, b.s);
    b.P_L = hint->P_L;
    b.P_K = hint->P_K;
  } else {
    CongruenceResult cl = congruence_block_diag(L);
    CongruenceResult ck = congruence_block_diag(K);
    b.P_L = cl.P;
    b.L0 = cl.M0;
    b.r = cl.rank;
    b.P_K = ck.P;
    b.K0 = ck.M0;
    b.s = ck.rank;
  }
  b.charges_normalized = b.P_L.transpose() * obs.charges * b.P_K;
  const IntMat& T = b.charges_normalized;
  long r = b.r, s = b.s;
  b.ell_middle = T.topLeftCorner(r, s).transpose();
  b.ell_tors_free = T.bottomLeftCorner(m - r, s).transpose();
  b.ell_free_tors = T.topRightCorner(r, n - s).transpose();
  b.ell_free_free = T.bottomRightCorner(m - r, n - s).transpose();
  return b;
}

IntVec flatten_copy_major(const IntMat& block) {
  IntVec v(block.rows() * block.cols());
  for (Eigen::Index j = 0; j < block.rows(); ++j)
    for (Eigen::Index i = 0; i < block.cols(); ++i) v(j * block.cols() + i) = block(j, i);
  return v;
}

TorsionCosets::TorsionCosets(const IntMat& L0, long copies) : copies_(copies) {
  if (copies < 0) throw std::invalid_argument("copies must be nonnegative");
  if (L0.rows() != L0.cols()) throw DimensionError("L0 must be square");
  rank_ = static_cast<long>(L0.rows());
  SmithResult s = smith_normal_form(L0);
  if (s.rank != rank_) throw SingularMatrixError("torsion_cosets: L0 is singular");
  IntMat Uinv = integer_inverse_unimodular(s.U);
  std::vector<Eigen::Index> cols;
  for (long i = 0; i < rank_; ++i)
    if (s.D(i, i) != 1) {
      factors_.push_back(s.D(i, i));
      cols.push_back(i);
    }
  lift_ = IntMat(rank_, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) lift_.col(k) = Uinv.col(cols[k]);
}

BigInt TorsionCosets::count() const {
  BigInt per = 1;
  for (const auto& d : factors_) per *= d;
  BigInt c = 1;
  for (long j = 0; j < copies_; ++j) c *= per;
  return c;
}

IntVec TorsionCosets::representative(const BigInt& index) const {
  if (index < 0 || index >= count()) throw std::out_of_range("coset index out of range");
  long t = static_cast<long>(factors_.size());
  IntVec out = IntVec::Zero(copies_ * rank_);
  BigInt rest = index;
  // last digit varies fastest
  for (long j = copies_ - 1; j >= 0; --j)
    for (long k = t - 1; k >= 0; --k) {
      BigInt digit = rest % factors_[k];
      rest /= factors_[k];
      if (digit != 0) out.segment(j * rank_, rank_) += digit * lift_.col(k);
    }
  return out;
}

std::vector<IntVec> TorsionCosets::all() const {
  std::vector<IntVec> v;
  BigInt c = count();
  for (BigInt i = 0; i < c; ++i) v.push_back(representative(i));
  return v;
}

IntVec reduce_mod_lattice(const IntMat& H, const IntVec& x) {
  IntVec y = x;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), y(i).get_mpz_t(), H(i, i).get_mpz_t());
    if (q != 0) y -= q * H.col(i);
  }
  return y;
}

IntMat linking_from_crossings(long components, const std::vector<Crossing>& crossings,
                              const std::vector<BigInt>& framings) {
  if (static_cast<long>(framings.size()) != components)
    throw DimensionError("one framing per component is required");
  IntMat twice = IntMat::Zero(components, components);
  for (const auto& c : crossings) {
    if (c.a < 0 || c.a >= components || c.b < 0 || c.b >= components)
      throw MalformedDiagramError("crossing references an unknown component");
    if (c.sign != 1 && c.sign != -1) throw MalformedDiagramError("crossing sign must be +1 or -1");
    if (c.a == c.b) continue;
    twice(c.a, c.b) += c.sign;
    twice(c.b, c.a) += c.sign;
  }
  IntMat L(components, components);
  for (long a = 0; a < components; ++a)
    for (long b = 0; b < components; ++b) {
      if (a == b) {
        L(a, a) = framings[a];
        continue;
      }
      if (mpz_odd_p(twice(a, b).get_mpz_t()))
        throw MalformedDiagramError("odd signed crossing count between components " +
                                    std::to_string(a) + " and " + std::to_string(b));
      L(a, b) = twice(a, b) / 2;
    }
  return L;
}

IntMat bf_embed(const IntMat& C) {
  if (C.rows() != C.cols()) throw DimensionError("bf_embed needs a square matrix");
  Eigen::Index n = C.rows();
  IntMat out = IntMat::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = C;
  return out;
}

std::vector<std::vector<long>> parallel_groups(const ObservableSpec& obs) {
  long t = static_cast<long>(obs.trivial.size());
  std::vector<long> parent(t);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](long a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const IntMat& lk = obs.trivial_links;
  for (long a = 0; a < t; ++a)
    for (long b = a + 1; b < t; ++b) {
      if (lk(a, a) != lk(b, b) || lk(a, b) != lk(a, a)) continue;
      bool same = true;
      for (long x = 0; x < t && same; ++x)
        if (x != a && x != b && lk(a, x) != lk(b, x)) same = false;
      if (same && obs.cross_links.rows() == t && obs.cross_links.row(a) != obs.cross_links.row(b))
        same = false;
      if (same) parent[find(a)] = find(b);
    }
  std::vector<std::vector<long>> groups;
  std::vector<long> slot(t, -1);
  for (long a = 0; a < t; ++a) {
    long root = find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(a);
  }
  return groups;
}

std::vector<VectorLoop> group_vectors(const ObservableSpec& obs,
                                      const std::vector<std::vector<long>>& groups, long n) {
  std::vector<VectorLoop> out;
  for (const auto& g : groups) {
    VectorLoop v{IntVec::Zero(n), obs.trivial[g.front()].framing};
    for (long a : g) v.charge(obs.trivial[a].copy) += obs.trivial[a].charge;
    out.push_back(std::move(v));
  }
  return out;
}

void set_vector_loops(ObservableSpec& obs, const std::vector<VectorLoop>& loops, const IntMat& links) {
  std::vector<std::pair<long, long>> pieces;  // (loop, copy)
  obs.trivial.clear();
  for (long a = 0; a < static_cast<long>(loops.size()); ++a)
    for (Eigen::Index c = 0; c < loops[a].charge.size(); ++c)
      if (loops[a].charge(c) != 0) {
        pieces.emplace_back(a, static_cast<long>(c));
        obs.trivial.push_back({static_cast<long>(c), loops[a].charge(c), loops[a].framing});
      }
  long t = static_cast<long>(pieces.size());
  obs.trivial_links = IntMat(t, t);
  for (long x = 0; x < t; ++x)
    for (long y = 0; y < t; ++y) {
      long a = pieces[x].first, b = pieces[y].first;
      obs.trivial_links(x, y) = a == b ? loops[a].framing : BigInt(links(a, b));
    }
  obs.cross_links = IntMat::Zero(t, obs.copies() * obs.components());
}

ObservableSpec pull_back_frame(const FrameHint& hint, const IntMat& charges_normalized,
                               const std::vector<TrivialComponent>& trivial_normalized,
                               const IntMat& trivial_links) {
  IntMat PLinvT = integer_inverse_unimodular(hint.P_L).transpose();
  IntMat PKinv = integer_inverse_unimodular(hint.P_K);
  ObservableSpec obs;
  obs.charges = PLinvT * charges_normalized * PKinv;
  long n = static_cast<long>(hint.P_K.rows());
  std::vector<VectorLoop> loops;
  for (const auto& tc : trivial_normalized) {
    if (tc.copy < 0 || tc.copy >= n) throw DimensionError("trivial component copy out of range");
    IntVec e = IntVec::Zero(n);
    e(tc.copy) = tc.charge;
    loops.push_back({PKinv.transpose() * e, tc.framing});
  }
  IntMat links = trivial_links;
  if (links.size() == 0) {
    links = IntMat::Zero(static_cast<Eigen::Index>(loops.size()), static_cast<Eigen::Index>(loops.size()));
    for (std::size_t a = 0; a < loops.size(); ++a) links(a, a) = loops[a].framing;
  }
  set_vector_loops(obs, loops, links);
  return obs;
}

}  // namespace abelcs
