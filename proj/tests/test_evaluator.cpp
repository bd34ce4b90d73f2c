#include "abelcs/evaluator.hpp"

#include "doctest.h"
#include "support/oracle.hpp"
#include "support/worked_examples.hpp"

#include <algorithm>
#include <random>

using namespace abelcs;

namespace {

Rat q(long a, long b = 1) {
  Rat r(a, b);
  r.canonicalize();
  return r;
}

struct Torsion {
  IntMat K0, L0, ell;
};

// K0 even, |det L0|^s <= 1e4, dims <= 2.
Torsion random_torsion(std::mt19937_64& g) {
  std::uniform_int_distribution<long> d(-4, 4);
  for (;;) {
    long s = 1 + static_cast<long>(g() % 2), r = 1 + static_cast<long>(g() % 2);
    Torsion t{IntMat(s, s), IntMat(r, r), IntMat(s, r)};
    for (long i = 0; i < s; ++i)
      for (long j = i; j < s; ++j) t.K0(i, j) = t.K0(j, i) = i == j ? 2 * d(g) : d(g);
    for (long i = 0; i < r; ++i)
      for (long j = i; j < r; ++j) t.L0(i, j) = t.L0(j, i) = d(g);
    for (long i = 0; i < t.ell.size(); ++i) t.ell.data()[i] = d(g);
    BigInt dk = determinant(t.K0), dl = abs(determinant(t.L0));
    if (dk == 0 || dl == 0 || dl > 60) continue;
    BigInt count;
    mpz_pow_ui(count.get_mpz_t(), dl.get_mpz_t(), s);
    if (count > 10000) continue;
    return t;
  }
}

}  // namespace

TEST_CASE("example one end to end") {
  auto ex = testdata::example1();
  EvalReport rep = evaluate(ex.L, ex.C, ex.obs, {}, ex.hint);
  CHECK(rep.gates.passed());
  CHECK(rep.prefactor == 5);
  CHECK(rep.term_count == 25);
  CHECK(render(rep.trivial_phase) == "1 * exp(i*pi*1/3)");
  CHECK(render(rep.completed_sum) == "-5");
  CHECK(render(rep.gauss_sum) == "5 * exp(i*pi*-1/5)");
  CHECK(render(rep.value) == "-25 * exp(i*pi*1/3)");
  CHECK(rep.value == ExactValue(q(-25), BigInt(1), PhaseSum::unit(q(1, 3))));
}

TEST_CASE("example one without a frame hint") {
  auto ex = testdata::example1();
  EvalReport rep = evaluate(ex.L, ex.C, ex.obs);
  CHECK(rep.gates.passed());
  CHECK(render(rep.value) == "-25 * exp(i*pi*1/3)");
}

TEST_CASE("example two") {
  auto ex = testdata::example2();
  EvalReport rep = evaluate(ex.L, ex.C, ex.obs);
  CHECK(render(rep.value) == "12 * exp(i*pi*-16/23)");
  CHECK(rep.self_linking == q(-37, 46));
  CHECK(render(rep.gauss_sum) == "12 * exp(i*pi*1/2)");
  CHECK(rep.term_count == 144);
  CHECK(rep.prefactor == 1);
}

TEST_CASE("gauss sum against the box oracle") {
  auto e1 = testdata::example1();
  BlockDecomposition B = decompose(e1.L, e1.C, e1.obs, e1.hint);
  CHECK(gauss_sum(B.K0, B.L0, B.ell_middle) == oracle::gauss_sum(B.K0, B.L0, B.ell_middle));
  IntMat K2 = int_mat({{8, 3}, {3, 4}});
  IntMat L2 = int_mat({{-2, 1, 0}, {1, 2, 1}, {0, 1, -2}});
  IntMat l2 = int_mat({{1, 6, 0}, {5, 3, 2}});
  CHECK(gauss_sum(K2, L2, l2) == oracle::gauss_sum(K2, L2, l2));
  CHECK(gauss_sum(IntMat(0, 0), L2, IntMat(0, 3)) == PhaseSum::one());
  CHECK(gauss_sum(K2, IntMat(0, 0), IntMat(2, 0)) == PhaseSum::one());
  CHECK_THROWS_AS(gauss_sum(K2, int_mat({{1, 1}, {1, 1}}), IntMat::Zero(2, 2)), SingularMatrixError);
}

TEST_CASE("completed square routes agree") {
  auto e1 = testdata::example1();
  BlockDecomposition B = decompose(e1.L, e1.C, e1.obs, e1.hint);
  auto route = [](const IntMat& K0, const IntMat& L0, const IntMat& l) {
    PhaseSum lhs = phase_mul(gauss_sum_completed(K0, L0, l), PhaseSum::unit(self_linking(K0, L0, l)));
    return lhs == gauss_sum(K0, L0, l);
  };
  CHECK(route(B.K0, B.L0, B.ell_middle));
  CHECK(route(int_mat({{8, 3}, {3, 4}}), int_mat({{-2, 1, 0}, {1, 2, 1}, {0, 1, -2}}),
              int_mat({{1, 6, 0}, {5, 3, 2}})));
  CHECK(render(gauss_sum_completed(B.K0, B.L0, B.ell_middle)) == "-5");
  CHECK(render(gauss_sum_completed(int_mat({{8, 3}, {3, 4}}), int_mat({{-2, 1, 0}, {1, 2, 1}, {0, 1, -2}}),
                                   int_mat({{1, 6, 0}, {5, 3, 2}}))) == "12 * exp(i*pi*-16/23)");
  IntMat z = IntMat::Zero(2, 2);
  CHECK(gauss_sum_completed(B.K0, B.L0, z) == gauss_sum(B.K0, B.L0, z));
  CHECK_THROWS_AS(gauss_sum_completed(int_mat({{2, 2}, {2, 2}}), B.L0, z), SingularMatrixError);
}

TEST_CASE("representative independence and route equivalence on random instances") {
  std::mt19937_64 g(1234);
  for (int it = 0; it < 50; ++it) {
    Torsion t = random_torsion(g);
    PhaseSum base = gauss_sum(t.K0, t.L0, t.ell);
    EvalOptions shifted;
    shifted.shift_seed = 1000 + static_cast<std::uint64_t>(it);
    CHECK(gauss_sum(t.K0, t.L0, t.ell, shifted) == base);
    PhaseSum completed = gauss_sum_completed(t.K0, t.L0, t.ell);
    CHECK(phase_mul(completed, PhaseSum::unit(self_linking(t.K0, t.L0, t.ell))) == base);
    if (it < 15) CHECK(base == oracle::gauss_sum(t.K0, t.L0, t.ell));
    ComplexBall b = numeric_eval(base, 64);
    auto z = b.approx();
    BigInt bound;
    mpz_pow_ui(bound.get_mpz_t(), BigInt(abs(determinant(t.L0))).get_mpz_t(), t.K0.rows());
    CHECK(std::abs(z) <= bound.get_d() + 1e-9);
  }
}

TEST_CASE("thread count does not change the sum") {
  IntMat K2 = int_mat({{8, 3}, {3, 4}});
  IntMat L2 = int_mat({{-2, 1, 0}, {1, 2, 1}, {0, 1, -2}});
  IntMat l2 = int_mat({{1, 6, 0}, {5, 3, 2}});
  EvalOptions one, four;
  four.threads = 4;
  CHECK(render(gauss_sum(L2, K2, l2.transpose(), one)) == render(gauss_sum(L2, K2, l2.transpose(), four)));
  EvalOptions tiny;
  tiny.max_terms = 100;
  CHECK_THROWS_AS(gauss_sum(K2, L2, l2, tiny), TermLimitError);
}

TEST_CASE("charge shifts by lattice vectors") {
  std::mt19937_64 g(99);
  std::uniform_int_distribution<long> d(-2, 2);
  for (int it = 0; it < 30; ++it) {
    Torsion t = random_torsion(g);
    long s = t.K0.rows(), r = t.L0.rows();
    IntMat W(s, r);
    for (long i = 0; i < W.size(); ++i) W.data()[i] = d(g);
    // copy j shifted by L0 w_j: the sum is unchanged
    IntMat byL = t.ell + IntMat(W * t.L0);
    CHECK(gauss_sum(t.K0, t.L0, byL) == gauss_sum(t.K0, t.L0, t.ell));
    // copy j shifted by sum_k K0[j,k] w_k: the completed sum is unchanged
    IntMat byK = t.ell + IntMat(t.K0 * W);
    PhaseSum a = phase_mul(gauss_sum(t.K0, t.L0, byK), PhaseSum::unit(-self_linking(t.K0, t.L0, byK)));
    PhaseSum b = phase_mul(gauss_sum(t.K0, t.L0, t.ell), PhaseSum::unit(-self_linking(t.K0, t.L0, t.ell)));
    CHECK(a == b);
  }
}

TEST_CASE("trivial phase") {
  IntMat K0 = int_mat({{4, 2}, {2, 4}});
  std::vector<TrivialComponent> tr{{0, BigInt(3), BigInt(0)}, {1, BigInt(1), BigInt(-4)}};
  CHECK(render(trivial_phase(K0, tr, int_mat({{0, 1}, {1, -4}}))) == "1 * exp(i*pi*1/3)");
  CHECK(trivial_phase(K0, {}, IntMat(0, 0)) == PhaseSum::one());
  for (long qq : {1, 2, 5})
    for (long f : {-3, 1, 2})
      for (long j : {0, 1}) {
        std::vector<TrivialComponent> one{{j, BigInt(qq), BigInt(f)}};
        Rat e = -rational_inverse(K0)(j, j) * Rat(f * qq * qq);
        CHECK(trivial_phase(K0, one, int_mat({{f}})) == PhaseSum::unit(e));
      }
}

TEST_CASE("trivial components can be permuted") {
  auto ex = testdata::example1();
  ObservableSpec p = ex.obs;
  long t = static_cast<long>(p.trivial.size());
  std::vector<long> perm(t);
  for (long i = 0; i < t; ++i) perm[i] = t - 1 - i;
  ObservableSpec q2 = p;
  for (long a = 0; a < t; ++a) {
    q2.trivial[a] = p.trivial[perm[a]];
    for (long b = 0; b < t; ++b) q2.trivial_links(a, b) = p.trivial_links(perm[a], perm[b]);
    if (p.cross_links.rows() == t) q2.cross_links.row(a) = p.cross_links.row(perm[a]);
  }
  CHECK(evaluate(ex.L, ex.C, q2).value == evaluate(ex.L, ex.C, p).value);
}

TEST_CASE("gates") {
  auto ex = testdata::example1();
  ObservableSpec bad = ex.obs;
  BlockDecomposition B = decompose(ex.L, ex.C, bad, ex.hint);
  IntMat n = B.charges_normalized;
  n(2, 2) = 1;
  ObservableSpec ff = pull_back_frame(*ex.hint, n, {}, IntMat(0, 0));
  EvalReport r = evaluate(ex.L, ex.C, ff, {}, ex.hint);
  CHECK(r.value.is_zero());
  CHECK(r.gates.failed_gate() == "free-free");

  n = B.charges_normalized;
  n(0, 2) = 1;
  r = evaluate(ex.L, ex.C, pull_back_frame(*ex.hint, n, {}, IntMat(0, 0)), {}, ex.hint);
  CHECK(r.gates.failed_gate() == "free-tors");
  n(0, 2) = 3;
  n(1, 2) = 0;
  r = evaluate(ex.L, ex.C, pull_back_frame(*ex.hint, n, {}, IntMat(0, 0)), {}, ex.hint);
  CHECK(r.gates.failed_gate() == "free-tors");
  // column (-2, 1) is L0 e_0
  n(0, 2) = -2;
  n(1, 2) = 1;
  r = evaluate(ex.L, ex.C, pull_back_frame(*ex.hint, n, {}, IntMat(0, 0)), {}, ex.hint);
  CHECK(r.gates.passed());

  n = B.charges_normalized;
  n(2, 0) = 1;
  r = evaluate(ex.L, ex.C, pull_back_frame(*ex.hint, n, {}, IntMat(0, 0)), {}, ex.hint);
  CHECK(r.gates.failed_gate() == "tors-free");
  n(2, 0) = 4;
  n(2, 1) = 2;
  r = evaluate(ex.L, ex.C, pull_back_frame(*ex.hint, n, {}, IntMat(0, 0)), {}, ex.hint);
  CHECK(r.gates.passed());

  std::vector<TrivialComponent> tr{{2, BigInt(1), BigInt(0)}};
  r = evaluate(ex.L, ex.C, pull_back_frame(*ex.hint, B.charges_normalized, tr, int_mat({{0}})), {}, ex.hint);
  CHECK(r.gates.failed_gate() == "degenerate-copy-trivial");
  CHECK(r.value.is_zero());
}

TEST_CASE("partition function") {
  CHECK(render(partition_function({IntMat(0, 0)}, int_mat({{1}}))) == "1");
  for (long f : {1, -1}) CHECK(render(partition_function({int_mat({{f}})}, int_mat({{3, 1}, {0, -2}}))) == "1");
  IntMat L2 = int_mat({{-2, 1, 0}, {1, 2, 1}, {0, 1, -2}});
  IntMat K2 = int_mat({{8, 3}, {3, 4}});
  ExactValue z = partition_function({L2}, half_coupling(K2));
  CHECK(z == ExactValue::from_phase(oracle::gauss_sum(K2, L2, IntMat::Zero(2, 3))));
  // degenerate L with a free copy: |det L0|^{n-s}
  ExactValue zd = partition_function({int_mat({{2, 0}, {0, 0}})}, int_mat({{2, 0}, {0, 0}}));
  CHECK(zd == ExactValue::from_phase(oracle::gauss_sum(int_mat({{4}}), int_mat({{2}}), IntMat::Zero(1, 1))
                                         .scaled(Rat(2))));
  CHECK(render(zd) == "4");
}

TEST_CASE("bf factorization smoke test") {
  for (long c : {1, 2, 3})
    for (long p : {3, 4, 5})
      for (long eta : {0, 1, 2}) {
        IntMat Cp = bf_embed(int_mat({{c}}));
        ObservableSpec obs = ObservableSpec::empty(1, 2);
        obs.charges(0, 0) = eta;
        ExactValue v = evaluate({int_mat({{p}})}, Cp, obs).value;
        // direct: sum_{k0,k1 mod p} e^{-2 pi i (c k0 k1 + k0 eta) / p}
        long hits = 0;
        for (long k0 = 0; k0 < p; ++k0)
          if ((c * k0 + eta) % p == 0) ++hits;
        CHECK(v == ExactValue::rational(Rat(hits * p)));
      }
}

TEST_CASE("linking form consistency") {
  IntMat L0 = int_mat({{-2, 1}, {1, 2}});
  IntMat C = half_coupling(int_mat({{4, 2}, {2, 4}}));
  CHECK(linking_form_consistency(L0, C, IntMat::Zero(2, 2)));
  IntMat ell = int_mat({{1, 2}, {-1, 4}});
  CHECK(linking_form_consistency(L0, C, ell));
  RatMat L0inv = rational_inverse(L0);
  IntMat K = C + C.transpose();
  RatMat QK = kron(to_rat(K), L0inv), QC = kron(to_rat(C), L0inv);
  auto val = [&](const IntMat& e, const RatMat& Q) {
    RatVec v = flatten_copy_major(e).cast<Rat>();
    Rat x = oracle::qf(v, Q);
    return Rat(x - Rat(floor_rat(x)));
  };
  std::mt19937_64 g(5);
  std::uniform_int_distribution<long> d(-3, 3);
  for (int it = 0; it < 20; ++it) {
    IntMat W(2, 2);
    for (long i = 0; i < 4; ++i) W.data()[i] = d(g);
    IntMat sh = ell + IntMat(W * L0);
    CHECK(val(sh, QK) == val(ell, QK));
    CHECK(val(sh, QC) == val(ell, QC));
  }
  LinkingFormCheck f = linking_form_details(int_mat({{5}}), int_mat({{1}}), int_mat({{2}}));
  CHECK(f.c_value == q(4, 5));
  CHECK(f.k_value == q(3, 5));
  CHECK(f.k_form_invariant);
  CHECK(f.c_form_invariant);
}

TEST_CASE("zero modes") {
  auto has = [](const std::vector<IntVec>& v, long x) {
    return std::any_of(v.begin(), v.end(), [&](const IntVec& a) { return a.size() == 1 && a(0) == x; });
  };
  auto z4 = zero_modes_torsion(int_mat({{4}}), int_mat({{1}}));
  CHECK(has(z4, 0));
  CHECK(has(z4, 2));
  CHECK_FALSE(has(z4, 1));
  CHECK_FALSE(has(z4, 3));
  auto z3 = zero_modes_torsion(int_mat({{3}}), int_mat({{1}}));
  CHECK(z3.size() == 1);
  CHECK(has(z3, 0));
  auto e = zero_modes_torsion(IntMat(0, 0), int_mat({{1}}));
  CHECK(e.size() == 1);
  std::mt19937_64 g(8);
  std::uniform_int_distribution<long> d(-4, 4);
  for (int it = 0; it < 20; ++it) {
    IntMat L0 = int_mat({{d(g), 0}, {0, 0}});
    L0(1, 1) = d(g);
    L0(0, 1) = L0(1, 0) = d(g);
    if (determinant(L0) == 0) continue;
    auto zm = zero_modes_torsion(L0, int_mat({{d(g)}}));
    REQUIRE_FALSE(zm.empty());
    CHECK(zm.front().isZero());
  }
}
