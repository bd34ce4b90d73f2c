#include "abelcs/evaluator.hpp"

namespace abelcs {

bool GateReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string GateReport::failed_gate() const {
  for (const auto& c : checks)
    if (!c.passed) return c.name;
  return {};
}

namespace {

bool in_lattice(const RatMat& Minv, const IntVec& x) {
  RatVec y = Minv * x.cast<Rat>();
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i).get_den() != 1) return false;
  return true;
}

Rat quad(const RatVec& a, const RatMat& Q, const RatVec& b) { return (a.transpose() * (Q * b))(0, 0); }

// Exponent (units of pi) of the trivial-loop phase.
Rat trivial_exponent(const RatMat& K0inv, const std::vector<RatVec>& v, const IntMat& links,
                     const std::vector<RatVec>& weights, const IntMat& cross, long m) {
  Rat e = 0;
  long t = static_cast<long>(v.size());
  if (K0inv.rows() == 0) return e;
  for (long a = 0; a < t; ++a)
    for (long b = 0; b < t; ++b) {
      if (links(a, b) == 0) continue;
      e -= quad(v[a], K0inv, v[b]) * Rat(links(a, b));
    }
  if (cross.size() == 0) return e;
  for (long a = 0; a < t; ++a)
    for (long j = 0; j < static_cast<long>(weights.size()); ++j)
      for (long i = 0; i < m; ++i) {
        const BigInt& c = cross(a, j * m + i);
        if (c == 0) continue;
        e -= 2 * quad(v[a], K0inv, weights[j]) * Rat(c);
      }
  return e;
}

}  // namespace

PhaseSum trivial_phase(const IntMat& K0, const std::vector<TrivialComponent>& trivial,
                       const IntMat& trivial_links, const IntMat& cross_links, long surgery_components) {
  long s = static_cast<long>(K0.rows());
  long t = static_cast<long>(trivial.size());
  if (t == 0) return PhaseSum::one();
  if (trivial_links.rows() != t || trivial_links.cols() != t)
    throw DimensionError("trivial_links must match the trivial components");
  RatMat K0inv = rational_inverse(K0);
  std::vector<RatVec> v;
  for (const auto& tc : trivial) {
    if (tc.copy < 0 || tc.copy >= s) throw DimensionError("trivial component copy out of range");
    RatVec e = RatVec::Zero(s);
    e(tc.copy) = Rat(tc.charge);
    v.push_back(e);
  }
  std::vector<RatVec> w;
  for (long j = 0; j < s; ++j) {
    RatVec e = RatVec::Zero(s);
    e(j) = 1;
    w.push_back(e);
  }
  if (cross_links.size() != 0 && (cross_links.rows() != t || cross_links.cols() != s * surgery_components))
    throw DimensionError("cross_links has the wrong shape");
  return PhaseSum::unit(trivial_exponent(K0inv, v, trivial_links, w, cross_links, surgery_components));
}

EvalReport evaluate(const SurgeryPresentation& Lp, const IntMat& C, const ObservableSpec& obs_in,
                    const EvalOptions& opts, const std::optional<FrameHint>& hint) {
  require_symmetric(Lp.L, "surgery matrix L");
  if (C.rows() != C.cols()) throw DimensionError("coupling matrix must be square");
  long m = Lp.m(), n = static_cast<long>(C.rows());
  ObservableSpec obs = obs_in;
  validate_observable(obs, m, n);

  EvalReport rep;
  rep.blocks = decompose(Lp, C, obs, hint);
  const BlockDecomposition& B = rep.blocks;
  long r = B.r, s = B.s;
  RatMat L0inv = r ? rational_inverse(B.L0) : RatMat(0, 0);
  RatMat K0inv = s ? rational_inverse(B.K0) : RatMat(0, 0);

  auto gate = [&](const char* name, bool ok, std::string detail) {
    rep.gates.checks.push_back({name, ok, ok ? std::string() : std::move(detail)});
    return ok;
  };
  auto fail = [&]() {
    rep.value = ExactValue();
    return rep;
  };

  bool ff = true;
  for (Eigen::Index j = 0; j < B.ell_free_free.rows() && ff; ++j)
    for (Eigen::Index i = 0; i < B.ell_free_free.cols(); ++i)
      if (B.ell_free_free(j, i) != 0) ff = false;
  if (!gate("free-free", ff, "free-copy charge on a free surgery direction is nonzero")) return fail();

  long bad = -1;
  for (Eigen::Index j = 0; j < B.ell_free_tors.rows() && bad < 0; ++j)
    if (!in_lattice(L0inv, B.ell_free_tors.row(j).transpose())) bad = static_cast<long>(j);
  if (!gate("free-tors", bad < 0,
            "free copy " + std::to_string(s + bad) + " has torsion charges not in L0 Z^r"))
    return fail();

  bad = -1;
  for (Eigen::Index i = 0; i < B.ell_tors_free.cols() && bad < 0; ++i)
    if (!in_lattice(K0inv, B.ell_tors_free.col(i))) bad = static_cast<long>(i);
  if (!gate("tors-free", bad < 0,
            "free surgery direction " + std::to_string(r + bad) + " has charges not in K0 Z^s"))
    return fail();

  auto groups = parallel_groups(obs);
  auto loops = group_vectors(obs, groups, n);
  bad = -1;
  for (std::size_t g = 0; g < loops.size() && bad < 0; ++g) {
    IntVec v = B.P_K.transpose() * loops[g].charge;
    for (long k = s; k < n; ++k)
      if (v(k) != 0) bad = static_cast<long>(groups[g].front());
  }
  if (!gate("degenerate-copy-trivial", bad < 0,
            "trivial component " + std::to_string(bad) + " carries charge in a degenerate copy"))
    return fail();

  BigInt detL0 = abs(determinant(B.L0));
  mpz_pow_ui(rep.term_count.get_mpz_t(), detL0.get_mpz_t(), static_cast<unsigned long>(s));
  if (rep.term_count > opts.max_terms)
    throw TermLimitError("evaluation needs " + rep.term_count.get_str() + " terms, above the limit " +
                             opts.max_terms.get_str(),
                         rep.term_count.get_str());
  mpz_pow_ui(rep.prefactor.get_mpz_t(), detL0.get_mpz_t(), static_cast<unsigned long>(n - s));

  // trivial loops, projected to the torsion copies of the normalized frame
  std::vector<RatVec> tv;
  for (const auto& tc : obs.trivial) {
    IntVec e = IntVec::Zero(n);
    e(tc.copy) = tc.charge;
    tv.push_back(IntVec(B.P_K.transpose() * e).head(s).cast<Rat>());
  }
  std::vector<RatVec> weights;
  for (long j = 0; j < n; ++j) weights.push_back(RatVec(B.P_K.transpose().col(j).head(s).cast<Rat>()));
  Rat texp = trivial_exponent(K0inv, tv, obs.trivial_links, weights, obs.cross_links, m);
  rep.trivial_phase = PhaseSum::unit(texp);

  rep.self_linking = self_linking(B.K0, B.L0, B.ell_middle);
  rep.self_link_phase = PhaseSum::unit(rep.self_linking);
  rep.gauss_sum = gauss_sum(B.K0, B.L0, B.ell_middle, opts);
  rep.completed_sum = phase_canonicalize(rep.gauss_sum * PhaseSum::unit(-rep.self_linking));
  rep.value = ExactValue(Rat(rep.prefactor), BigInt(1), rep.trivial_phase * rep.completed_sum);
  return rep;
}

ExactValue partition_function(const SurgeryPresentation& L, const IntMat& C, const EvalOptions& opts) {
  return evaluate(L, C, ObservableSpec::empty(L.m(), static_cast<long>(C.rows())), opts).value;
}

LinkingFormCheck linking_form_details(const IntMat& L0, const IntMat& C, const IntMat& ell) {
  if (C.rows() != C.cols() || ell.rows() != C.rows() || ell.cols() != L0.rows())
    throw DimensionError("linking_form_consistency: ell must be n x r");
  LinkingFormCheck out;
  long n = static_cast<long>(C.rows()), r = static_cast<long>(L0.rows());
  if (n == 0 || r == 0) return out;
  RatMat L0inv = rational_inverse(L0);
  IntMat K = C + C.transpose();
  RatMat QK = kron(to_rat(K), L0inv), QC = kron(to_rat(C), L0inv);
  RatVec l = flatten_copy_major(ell).cast<Rat>();
  auto frac = [](const Rat& x) {
    Rat f = x - Rat(floor_rat(x));
    return f;
  };
  out.k_value = frac(quad(l, QK, l));
  out.c_value = frac(quad(l, QC, l));
  // An integer-valued quadratic in v is detected on e_a and e_a + e_b.
  IntMat step = kron(IntMat(IntMat::Identity(n, n)), L0);
  long N = n * r;
  auto check = [&](const RatVec& v) {
    RatVec shifted = l + v;
    Rat dk = quad(shifted, QK, shifted) - quad(l, QK, l);
    Rat dc = quad(shifted, QC, shifted) - quad(l, QC, l);
    if (dk.get_den() != 1) out.k_form_invariant = false;
    if (dc.get_den() != 1) out.c_form_invariant = false;
  };
  for (long a = 0; a < N; ++a) {
    RatVec va = step.col(a).cast<Rat>();
    check(va);
    for (long b = a + 1; b < N; ++b) check(RatVec(va + step.col(b).cast<Rat>()));
  }
  return out;
}

bool linking_form_consistency(const IntMat& L0, const IntMat& C, const IntMat& ell) {
  return linking_form_details(L0, C, ell).k_form_invariant;
}

std::vector<IntVec> zero_modes_torsion(const IntMat& L0, const IntMat& C) {
  require_symmetric(L0, "L0");
  if (C.rows() != C.cols()) throw DimensionError("coupling matrix must be square");
  long n = static_cast<long>(C.rows()), r = static_cast<long>(L0.rows());
  TorsionCosets tc(L0, n);
  std::vector<IntVec> out;
  if (r == 0) {
    out.push_back(IntVec(0));
    return out;
  }
  RatMat L0inv = rational_inverse(L0);
  IntMat K = C + C.transpose();
  RatMat QK = kron(to_rat(K), L0inv), QC = kron(to_rat(C), L0inv);
  IntMat H = hermite_lower(L0);
  BigInt count = tc.count();
  for (BigInt i = 0; i < count; ++i) {
    RatVec k = tc.representative(i).cast<Rat>();
    RatVec img = QK * k;
    bool ok = true;
    for (Eigen::Index a = 0; a < img.size() && ok; ++a)
      if (img(a).get_den() != 1) ok = false;
    if (!ok) continue;
    if (quad(k, QC, k).get_den() != 1) continue;
    IntVec rep = to_int(k);
    for (long j = 0; j < n; ++j) rep.segment(j * r, r) = reduce_mod_lattice(H, rep.segment(j * r, r));
    out.push_back(rep);
  }
  return out;
}

}  // namespace abelcs
