#include "abelcs/suites.hpp"

#include <chrono>
#include <random>
#include <sstream>

namespace abelcs {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  explicit Timer(SuiteReport& r) : r_(r), t0_(Clock::now()) {}
  ~Timer() { r_.seconds = std::chrono::duration<double>(Clock::now() - t0_).count(); }

 private:
  SuiteReport& r_;
  Clock::time_point t0_;
};

long uniform(std::mt19937_64& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

IntMat random_sym(std::mt19937_64& g, long k, long bound) {
  IntMat M(k, k);
  for (long i = 0; i < k; ++i)
    for (long j = i; j < k; ++j) M(i, j) = M(j, i) = uniform(g, -bound, bound);
  return M;
}

IntMat random_mat(std::mt19937_64& g, long r, long c, long bound) {
  IntMat M(r, c);
  for (long i = 0; i < M.size(); ++i) M.data()[i] = uniform(g, -bound, bound);
  return M;
}

void make_even(IntMat& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, i) = 2 * (M(i, i) / 2);
}

BigInt power(const BigInt& b, long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

bool same(const ExactValue& a, const ExactValue& b) { return compare_values(a, b) != Verdict::NotEqual; }

std::string vs(const ExactValue& a, const ExactValue& b) { return render(a) + " vs " + render(b); }

struct Torsion {
  IntMat K0, L0, ell;
};

Torsion random_torsion(std::mt19937_64& g, const FuzzConfig& cfg) {
  for (;;) {
    long s = uniform(g, 1, cfg.max_dim), r = uniform(g, 1, cfg.max_dim);
    Torsion t{random_sym(g, s, cfg.entry_bound), random_sym(g, r, cfg.entry_bound),
              random_mat(g, s, r, cfg.entry_bound)};
    make_even(t.K0);
    if (determinant(t.K0) == 0) continue;
    BigInt dl = abs(determinant(t.L0));
    if (dl == 0 || power(dl, s) > 10000) continue;
    return t;
  }
}

std::string describe(const Torsion& t) {
  return "K0=" + format_mat(t.K0) + " L0=" + format_mat(t.L0) + " ell=" + format_mat(t.ell);
}

}  // namespace

std::string describe(const KirbyState& s) {
  std::ostringstream os;
  os << "L=" << format_mat(s.L.L) << " C=" << format_mat(s.C) << " charges=" << format_mat(s.obs.charges);
  if (!s.obs.trivial.empty()) {
    os << " trivial=[";
    for (std::size_t k = 0; k < s.obs.trivial.size(); ++k) {
      const auto& t = s.obs.trivial[k];
      os << (k ? "," : "") << "(" << t.copy << "," << t.charge << "," << t.framing << ")";
    }
    os << "] links=" << format_mat(s.obs.trivial_links);
  }
  return os.str();
}

SuiteReport reciprocity_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "reciprocity";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  long quadratic = 0;
  while (rep.checked < cfg.count) {
    long m = uniform(g, 1, cfg.max_dim), n = uniform(g, 1, cfg.max_dim);
    IntMat L = random_sym(g, m, cfg.entry_bound), K = random_sym(g, n, cfg.entry_bound);
    if (g() % 2)
      make_even(L);
    else
      make_even(K);
    CongruenceResult cl = congruence_block_diag(L), ck = congruence_block_diag(K);
    BigInt dl = abs(determinant(cl.M0)), dk = abs(determinant(ck.M0));
    if (dl > cfg.det_bound || dk > cfg.det_bound) continue;
    IntMat ell = random_mat(g, m, n, cfg.entry_bound);
    std::string inst = "K=" + format_mat(K) + " L=" + format_mat(L) + " ell=" + format_mat(ell);
    ++rep.checked;
    try {
      ReciprocitySides s = reciprocity_degenerate(K, L, ell);
      if (!same(s.lhs, s.rhs)) rep.failures.push_back({inst, "linear form: " + vs(s.lhs, s.rhs)});
      if (cl.rank == m && ck.rank == n) {
        IntVec w = random_mat(g, m * n, 1, cfg.entry_bound).col(0);
        RatVec u = wu_class_even(L, K, w);
        ExactValue lhs = reciprocity_lhs(K, L, u), rhs = reciprocity_rhs(K, L, u);
        ++quadratic;
        if (!same(lhs, rhs))
          rep.failures.push_back({inst + " w=" + format_mat(w.transpose()), "quadratic form: " + vs(lhs, rhs)});
      }
    } catch (const Error& e) {
      rep.failures.push_back({inst, e.what()});
    }
  }
  rep.notes.push_back(std::to_string(quadratic) + " nondegenerate pairs also checked with a Wu class");
  return rep;
}

SuiteReport wu_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "wu-classes";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  while (rep.checked < cfg.count) {
    long m = uniform(g, 1, cfg.max_dim), n = uniform(g, 1, cfg.max_dim);
    IntMat L = random_sym(g, m, cfg.entry_bound), K = random_sym(g, n, cfg.entry_bound);
    if (g() % 2)
      make_even(L);
    else
      make_even(K);
    if (determinant(L) == 0 || determinant(K) == 0) continue;
    IntVec w = random_mat(g, m * n, 1, cfg.entry_bound).col(0);
    ++rep.checked;
    RatVec u = wu_class_even(L, K, w);
    if (!verify_wu(to_rat(kron(L, K)), u))
      rep.failures.push_back({"L=" + format_mat(L) + " K=" + format_mat(K) + " w=" + format_mat(w.transpose()),
                              "verify_wu rejected the class"});
  }
  return rep;
}

SuiteReport duality_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "duality";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  EvalOptions opts;
  opts.threads = cfg.threads;
  while (rep.checked < cfg.count) {
    long m = uniform(g, 1, cfg.max_dim), n = uniform(g, 1, cfg.max_dim);
    IntMat L = random_sym(g, m, cfg.entry_bound);
    make_even(L);
    IntMat C = random_mat(g, n, n, (cfg.entry_bound + 1) / 2);
    IntMat K = C + C.transpose();
    CongruenceResult cl = congruence_block_diag(L), ck = congruence_block_diag(K);
    if (power(abs(determinant(cl.M0)), ck.rank) > 10000 || power(abs(determinant(ck.M0)), cl.rank) > 10000) continue;
    ObservableSpec obs = ObservableSpec::empty(m, n);
    obs.charges = random_mat(g, m, n, cfg.entry_bound);
    std::string inst = "L=" + format_mat(L) + " C=" + format_mat(C) + " charges=" + format_mat(obs.charges);
    ++rep.checked;
    try {
      DualityResult r = duality_check({L}, C, obs, opts);
      if (!r.equal()) rep.failures.push_back({inst, vs(r.lhs, r.rhs)});
    } catch (const Error& e) {
      rep.failures.push_back({inst, e.what()});
    }
  }
  return rep;
}

SuiteReport dual_involution_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "dual-involution";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  for (; rep.checked < cfg.count; ++rep.checked) {
    long m = uniform(g, 0, cfg.max_dim + 1), n = uniform(g, 0, cfg.max_dim + 1);
    IntMat ell = random_mat(g, m, n, cfg.entry_bound);
    IntMat d = dual_observable(ell);
    IntVec flat = flatten_copy_major(ell.transpose());
    bool ok = d.rows() == n && d.cols() == m && dual_observable(d) == ell;
    ok = ok && dual_observable(flat, m, n) == flatten_copy_major(d.transpose());
    ok = ok && dual_observable(dual_observable(flat, m, n), n, m) == flat;
    if (!ok) rep.failures.push_back({"ell=" + format_mat(ell), "dual observable is not an involution"});
  }
  return rep;
}

SuiteReport representative_independence_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "representative-independence";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  for (; rep.checked < cfg.count; ++rep.checked) {
    Torsion t = random_torsion(g, cfg);
    EvalOptions plain, shifted;
    plain.threads = shifted.threads = cfg.threads;
    shifted.shift_seed = g() | 1;
    PhaseSum a = gauss_sum(t.K0, t.L0, t.ell, plain), b = gauss_sum(t.K0, t.L0, t.ell, shifted);
    if (!(a == b)) rep.failures.push_back({describe(t), render(a) + " vs " + render(b)});
  }
  return rep;
}

SuiteReport route_equivalence_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "route-equivalence";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  for (; rep.checked < cfg.count; ++rep.checked) {
    Torsion t = random_torsion(g, cfg);
    EvalOptions opts;
    opts.threads = cfg.threads;
    PhaseSum direct = gauss_sum(t.K0, t.L0, t.ell, opts);
    PhaseSum completed = gauss_sum_completed(t.K0, t.L0, t.ell);
    PhaseSum back = phase_canonicalize(completed * PhaseSum::unit(self_linking(t.K0, t.L0, t.ell)));
    if (!(back == direct)) rep.failures.push_back({describe(t), render(back) + " vs " + render(direct)});
  }
  return rep;
}

SuiteReport zero_regularization_suite(const FuzzConfig& cfg) {
  SuiteReport rep;
  rep.name = "zero-regularization";
  Timer timer(rep);
  std::mt19937_64 g(cfg.seed);
  long c_form = 0;
  for (; rep.checked < cfg.count; ++rep.checked) {
    IntMat L0;
    do {
      L0 = random_sym(g, uniform(g, 1, cfg.max_dim), cfg.entry_bound);
    } while (determinant(L0) == 0);
    long n = uniform(g, 1, cfg.max_dim);
    IntMat C = random_mat(g, n, n, cfg.entry_bound), ell = random_mat(g, n, L0.rows(), cfg.entry_bound);
    LinkingFormCheck chk = linking_form_details(L0, C, ell);
    if (chk.c_form_invariant) ++c_form;
    if (!chk.k_form_invariant)
      rep.failures.push_back({"L0=" + format_mat(L0) + " C=" + format_mat(C) + " ell=" + format_mat(ell),
                              "K-form value changes under a lattice shift"});
  }
  rep.notes.push_back("C-form invariant on " + std::to_string(c_form) + " of " + std::to_string(rep.checked) +
                      " instances (recorded, not asserted)");
  return rep;
}

std::vector<KirbyState> random_kirby_instances(long count, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<KirbyState> out;
  while (static_cast<long>(out.size()) < count) {
    long m = uniform(g, 1, 3), n = uniform(g, 1, 3);
    KirbyState s;
    s.L.L = random_sym(g, m, 3);
    s.C = random_mat(g, n, n, 3);
    IntMat K = s.C + s.C.transpose();
    CongruenceResult cl = congruence_block_diag(s.L.L), ck = congruence_block_diag(K);
    if (cl.rank == 0 || ck.rank == 0) continue;
    if (power(abs(determinant(cl.M0)), ck.rank) > 10000) continue;
    // Charges chosen in the normalized frame with zero free blocks, so no gate zeroes the value.
    IntMat norm = IntMat::Zero(m, n);
    norm.topLeftCorner(cl.rank, ck.rank) = random_mat(g, cl.rank, ck.rank, 3);
    s.obs = ObservableSpec::empty(m, n);
    s.obs.charges = integer_inverse_unimodular(cl.P).transpose() * norm * integer_inverse_unimodular(ck.P);
    long t = uniform(g, 0, 2);
    IntMat PKinvT = integer_inverse_unimodular(ck.P).transpose();
    std::vector<VectorLoop> loops;
    for (long a = 0; a < t; ++a) {
      IntVec v = IntVec::Zero(n);
      v.head(ck.rank) = random_mat(g, ck.rank, 1, 3).col(0);
      loops.push_back({IntVec(PKinvT * v), BigInt(uniform(g, -3, 3))});
    }
    IntMat links = IntMat::Zero(t, t);
    for (long a = 0; a < t; ++a) {
      links(a, a) = loops[a].framing;
      for (long b = a + 1; b < t; ++b) links(a, b) = links(b, a) = uniform(g, -2, 2);
    }
    set_vector_loops(s.obs, loops, links);
    if (!within_entry_bound(s)) continue;
    EvalReport r = evaluate(s.L, s.C, s.obs);
    if (r.value.is_zero() && g() % 4 != 0) continue;
    out.push_back(std::move(s));
  }
  return out;
}

SuiteReport kirby_suite(const std::vector<KirbyState>& instances, long steps, long seeds, std::uint64_t seed,
                        unsigned threads) {
  SuiteReport rep;
  rep.name = "kirby-invariance";
  Timer timer(rep);
  EvalOptions opts;
  opts.threads = threads;
  long moves = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const KirbyState& s = instances[k];
    ExactValue base;
    try {
      base = evaluate(s.L, s.C, s.obs, opts).value;
    } catch (const Error& e) {
      rep.failures.push_back({describe(s), std::string("base evaluation: ") + e.what()});
      continue;
    }
    for (long d = 0; d < seeds; ++d) {
      std::uint64_t sd = seed + static_cast<std::uint64_t>(d);
      ++rep.checked;
      RandomRun run = random_equivalent(s, steps, sd);
      moves += static_cast<long>(run.log.size());
      std::string where = describe(s) + " seed=" + std::to_string(sd) + " log: " + format_log(run.log);
      try {
        ExactValue v = evaluate(run.state.L, run.state.C, run.state.obs, opts).value;
        if (compare_values(v, base) != Verdict::Equal) rep.failures.push_back({where, vs(v, base)});
      } catch (const Error& e) {
        rep.failures.push_back({where, e.what()});
      }
    }
  }
  rep.notes.push_back(std::to_string(moves) + " moves applied");
  return rep;
}

}  // namespace abelcs
