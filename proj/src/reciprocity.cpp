#include "abelcs/reciprocity.hpp"

#include <map>

namespace abelcs {

namespace {

// Coset representatives of M Z^k: the box 0 <= x_i < H_ii of the lower Hermite form.
std::vector<IntVec> hermite_box(const IntMat& M) {
  long k = static_cast<long>(M.rows());
  std::vector<IntVec> out{IntVec::Zero(k)};
  if (k == 0) return out;
  IntMat H = hermite_lower(M);
  for (long i = 0; i < k; ++i) {
    std::vector<IntVec> next;
    long bound = H(i, i).get_si();
    next.reserve(out.size() * static_cast<std::size_t>(bound));
    for (const IntVec& v : out)
      for (long x = 0; x < bound; ++x) {
        IntVec w = v;
        w(i) = x;
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

// sum over (box)^copies of e^{i pi (x^T Q x + b^T x)}
PhaseSum box_sum(const std::vector<IntVec>& box, long copies, const RatMat& Q, const RatVec& b) {
  long k = box.empty() ? 0 : static_cast<long>(box.front().size());
  std::map<Rat, long> tally;
  std::vector<std::size_t> idx(copies, 0);
  RatVec x(copies * k);
  for (;;) {
    for (long j = 0; j < copies; ++j) x.segment(j * k, k) = box[idx[j]].cast<Rat>();
    Rat e = (x.transpose() * (Q * x))(0, 0) + (b.transpose() * x)(0, 0);
    ++tally[mod2(e)];
    long j = copies - 1;
    while (j >= 0 && ++idx[j] == box.size()) idx[j--] = 0;
    if (j < 0) break;
  }
  PhaseSum p;
  for (const auto& [t, c] : tally) p.add_term(Rat(c), t);
  return phase_canonicalize(p);
}

void require_nonsingular(const IntMat& M, const char* what) {
  require_symmetric(M, what);
  if (determinant(M) == 0) throw SingularMatrixError(std::string(what) + " is singular");
}

}  // namespace

RatVec tensor_permute(const RatVec& u, long m, long n) {
  if (u.size() != m * n) throw DimensionError("tensor_permute: wrong length");
  RatVec out(m * n);
  for (long i = 0; i < m; ++i)
    for (long a = 0; a < n; ++a) out(a * m + i) = u(i * n + a);
  return out;
}

ExactValue reciprocity_lhs(const IntMat& K, const IntMat& L, const RatVec& u) {
  require_nonsingular(K, "K");
  require_nonsingular(L, "L");
  long n = static_cast<long>(K.rows()), m = static_cast<long>(L.rows());
  if (u.size() != m * n) throw DimensionError("u must have length m*n");
  if (!verify_wu(to_rat(kron(L, K)), u)) throw WuClassError("u is not a Wu class of L x K");
  RatMat Q = kron(to_rat(L), rational_inverse(K));
  RatVec b = -RatVec(kron(to_rat(L), RatMat(RatMat::Identity(n, n))) * u);
  PhaseSum sum = box_sum(hermite_box(K), m, Q, b);
  return ExactValue::power_half(abs(determinant(K)), -m) * ExactValue::from_phase(sum);
}

ExactValue reciprocity_rhs(const IntMat& K, const IntMat& L, const RatVec& u) {
  require_nonsingular(K, "K");
  require_nonsingular(L, "L");
  long n = static_cast<long>(K.rows()), m = static_cast<long>(L.rows());
  if (u.size() != m * n) throw DimensionError("u must have length m*n");
  RatMat e = to_rat(kron(L, K));
  if (!verify_wu(e, u)) throw WuClassError("u is not a Wu class of L x K");
  RatVec up = tensor_permute(u, m, n);
  RatMat Q = -kron(to_rat(K), rational_inverse(L));
  RatVec b = kron(to_rat(K), RatMat(RatMat::Identity(m, m))) * up;
  PhaseSum sum = box_sum(hermite_box(L), n, Q, b);
  Rat ueu = (u.transpose() * (e * u))(0, 0);
  Rat phase = (Rat(signature(K) * signature(L)) - ueu) / 4;
  return ExactValue::power_half(abs(determinant(L)), -n) * ExactValue::from_phase(PhaseSum::unit(phase)) *
         ExactValue::from_phase(sum);
}

ReciprocitySides reciprocity_degenerate(const IntMat& K, const IntMat& L, const IntMat& ell) {
  require_symmetric(K, "K");
  require_symmetric(L, "L");
  long n = static_cast<long>(K.rows()), m = static_cast<long>(L.rows());
  if (ell.rows() != m || ell.cols() != n) throw DimensionError("ell must be m x n");
  if (!is_even(K) && !is_even(L)) throw UnsupportedCaseError("reciprocity needs L or K even");
  CongruenceResult cl = congruence_block_diag(L), ck = congruence_block_diag(K);
  long r = cl.rank, s = ck.rank;
  IntMat Ln = cl.P.transpose() * L * cl.P, Kn = ck.P.transpose() * K * ck.P;
  IntMat lt = cl.P.transpose() * ell * ck.P;

  ReciprocitySides out;
  {
    // x indexed i*s + a over all m components and the s torsion directions of K
    RatMat K0inv = s ? rational_inverse(ck.M0) : RatMat(0, 0);
    RatMat Q = kron(to_rat(Ln), K0inv);
    RatVec b = RatVec::Zero(m * s);
    for (long i = 0; i < r; ++i) {
      RatVec li(s);
      for (long a = 0; a < s; ++a) li(a) = Rat(lt(i, a));
      b.segment(i * s, s) = -2 * (K0inv * li);
    }
    PhaseSum sum = box_sum(hermite_box(ck.M0), m, Q, b);
    out.lhs = ExactValue::power_half(abs(determinant(ck.M0)), -(2 * m - r)) * ExactValue::from_phase(sum);
  }
  {
    RatMat L0inv = r ? rational_inverse(cl.M0) : RatMat(0, 0);
    RatMat Q = -kron(to_rat(Kn), L0inv);
    RatVec b = RatVec::Zero(n * r);
    for (long a = 0; a < s; ++a) {
      RatVec la(r);
      for (long i = 0; i < r; ++i) la(i) = Rat(lt(i, a));
      b.segment(a * r, r) = 2 * (L0inv * la);
    }
    PhaseSum sum = box_sum(hermite_box(cl.M0), n, Q, b);
    Rat mid = 0;
    if (r && s) {
      RatVec lm(r * s);
      for (long i = 0; i < r; ++i)
        for (long a = 0; a < s; ++a) lm(i * s + a) = Rat(lt(i, a));
      mid = (lm.transpose() * (kron(L0inv, rational_inverse(ck.M0)) * lm))(0, 0);
    }
    Rat phase = Rat(signature(K) * signature(L)) / 4 - mid;
    out.rhs = ExactValue::power_half(abs(determinant(cl.M0)), -(2 * n - s)) *
              ExactValue::from_phase(PhaseSum::unit(phase)) * ExactValue::from_phase(sum);
  }
  return out;
}

IntMat dual_observable(const IntMat& charges) { return charges.transpose(); }

IntVec dual_observable(const IntVec& flat, long m, long n) {
  if (flat.size() != m * n) throw DimensionError("dual_observable: wrong length");
  IntVec out(m * n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < m; ++i) out(i * n + j) = flat(j * m + i);
  return out;
}

DualityResult duality_check(const SurgeryPresentation& L, const IntMat& C, const ObservableSpec& obs,
                            const EvalOptions& opts) {
  require_symmetric(L.L, "surgery matrix L");
  long bad = first_odd_diagonal(L.L);
  if (bad >= 0)
    throw EvennessError("duality needs an even surgery matrix: L[" + std::to_string(bad) + "][" +
                        std::to_string(bad) + "] = " + L.L(bad, bad).get_str() + " is odd");
  if (!obs.trivial.empty()) throw UnsupportedCaseError("duality is defined for observables without trivial components");
  long m = L.m(), n = static_cast<long>(C.rows());
  IntMat K = C + C.transpose();

  DualityResult res;
  res.primal = evaluate(L, C, obs, opts);
  ObservableSpec dobs = ObservableSpec::empty(n, m);
  dobs.charges = dual_observable(obs.charges);
  res.dual = evaluate(SurgeryPresentation{K}, half_coupling(L.L), dobs, opts);

  const BlockDecomposition& B = res.primal.blocks;
  long r = B.r, s = B.s;
  res.lhs = ExactValue::from_phase(PhaseSum::unit(res.primal.self_linking)) *
            ExactValue::power_half(abs(determinant(B.K0)), 2 * m - r) * res.primal.value;
  res.rhs = ExactValue::from_phase(PhaseSum::unit(Rat(-signature(K) * signature(L.L)) / 4)) *
            ExactValue::power_half(abs(determinant(B.L0)), 2 * n - s) * res.dual.value.conj();
  res.verdict = compare_values(res.lhs, res.rhs);
  return res;
}

}  // namespace abelcs
