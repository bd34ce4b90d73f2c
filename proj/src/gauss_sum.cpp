#include "abelcs/evaluator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <thread>

namespace abelcs {

namespace {

long long mod_ll(const BigInt& x, long long M) {
  BigInt r;
  BigInt mm(static_cast<long>(M));
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), mm.get_mpz_t());
  return static_cast<long long>(r.get_si());
}

std::vector<long long> reduce_mat(const IntMat& A, long long M) {
  std::vector<long long> out(static_cast<std::size_t>(A.size()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) out[i * A.cols() + j] = mod_ll(A(i, j), M);
  return out;
}

void check_inputs(const IntMat& K0, const IntMat& L0, const IntMat& ell) {
  require_symmetric(K0, "K0");
  require_symmetric(L0, "L0");
  if (ell.rows() != K0.rows() || ell.cols() != L0.rows())
    throw DimensionError("ell_middle must be s x r");
}

// Deterministic small lattice offset for the representative-shift diagnostic.
IntVec shift_vector(std::uint64_t seed, std::uint64_t index, long len) {
  std::mt19937_64 g(seed ^ (index * 0x9E3779B97F4A7C15ULL));
  std::uniform_int_distribution<int> dist(-3, 3);
  IntVec h(len);
  for (long k = 0; k < len; ++k) h(k) = dist(g);
  return h;
}

}  // namespace

PhaseSum gauss_sum(const IntMat& K0, const IntMat& L0, const IntMat& ell, const EvalOptions& opts) {
  check_inputs(K0, L0, ell);
  long s = static_cast<long>(K0.rows()), r = static_cast<long>(L0.rows());
  if (s == 0 || r == 0) return PhaseSum::one();
  if (!is_even(K0)) throw EvennessError("gauss_sum: K0 must be even");
  BigInt d = determinant(L0);
  if (d == 0) throw SingularMatrixError("gauss_sum: L0 is singular");
  TorsionCosets tc(L0, s);
  BigInt count = tc.count();
  if (count > opts.max_terms)
    throw TermLimitError("Gauss sum needs " + count.get_str() + " terms, above the limit " +
                             opts.max_terms.get_str(),
                         count.get_str());
  BigInt Mbig = 2 * abs(d);
  if (Mbig >= BigInt(1L << 30)) throw UnsupportedCaseError("gauss_sum: |det L0| too large");
  const long long M = Mbig.get_si();
  const int sgn = d > 0 ? 1 : -1;

  IntMat adj = adjugate(L0);
  const IntMat& W = tc.lift();
  const long t = static_cast<long>(W.cols());
  IntVec ellv = flatten_copy_major(ell);
  const bool shifted = opts.shift_seed != 0;

  // Quadratic form and linear term in the coordinates actually enumerated.
  IntMat A;
  IntVec b;
  if (!shifted) {
    A = kron(K0, IntMat(W.transpose() * adj * W));
    b = IntVec(s * t);
    for (long j = 0; j < s; ++j)
      b.segment(j * t, t) = BigInt(2) * (W.transpose() * (adj * ellv.segment(j * r, r)));
  } else {
    A = kron(K0, adj);
    b = IntVec(s * r);
    for (long j = 0; j < s; ++j) b.segment(j * r, r) = BigInt(2) * (adj * ellv.segment(j * r, r));
  }
  const long dim = static_cast<long>(A.rows());
  const std::vector<long long> Ar = reduce_mat(A, M);
  std::vector<long long> br(dim);
  for (long a = 0; a < dim; ++a) br[a] = mod_ll(b(a), M);

  std::vector<long> radix;  // digit radices, most significant first
  for (long j = 0; j < s; ++j)
    for (long k = 0; k < t; ++k) radix.push_back(tc.factors()[k].get_si());
  const long ndig = static_cast<long>(radix.size());
  const std::uint64_t total = count.get_ui();

  std::vector<long long> Wr, L0r;
  if (shifted) {
    Wr = reduce_mat(W, M);
    L0r = reduce_mat(L0, M);
  }

  auto run = [&](std::uint64_t begin, std::uint64_t end, std::vector<long long>& counts) {
    std::vector<long> digit(ndig, 0);
    std::uint64_t rest = begin;
    for (long k = ndig - 1; k >= 0; --k) {
      digit[k] = static_cast<long>(rest % radix[k]);
      rest /= radix[k];
    }
    std::vector<long long> y(dim);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (!shifted) {
        for (long a = 0; a < dim; ++a) y[a] = digit[a];
      } else {
        IntVec h = shift_vector(opts.shift_seed, idx, s * r);
        for (long j = 0; j < s; ++j)
          for (long i = 0; i < r; ++i) {
            long long acc = 0;
            for (long k = 0; k < t; ++k) acc = (acc + Wr[i * t + k] * digit[j * t + k]) % M;
            for (long c = 0; c < r; ++c) {
              long long hv = mod_ll(h(j * r + c), M);
              acc = (acc + L0r[i * r + c] * hv) % M;
            }
            y[j * r + i] = acc;
          }
      }
      long long N = 0;
      for (long a = 0; a < dim; ++a) {
        if (y[a] == 0) continue;
        long long row = (Ar[a * dim + a] * y[a]) % M;
        for (long c = 0; c < a; ++c) row = (row + 2 * ((Ar[a * dim + c] * y[c]) % M)) % M;
        row = (row + br[a]) % M;
        N = (N + row * y[a]) % M;
      }
      long long e = ((-sgn * N) % M + M) % M;
      ++counts[e];
      for (long k = ndig - 1; k >= 0; --k) {
        if (++digit[k] < radix[k]) break;
        digit[k] = 0;
      }
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t mem_cap = std::max<std::uint64_t>(1, (std::uint64_t(1) << 27) / static_cast<std::uint64_t>(M));
  threads = static_cast<unsigned>(std::min<std::uint64_t>({threads, mem_cap, std::max<std::uint64_t>(1, total / 4096)}));
  std::vector<std::vector<long long>> partial(threads, std::vector<long long>(M, 0));
  if (threads == 1) {
    run(0, total, partial[0]);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (total + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      std::uint64_t lo = std::min(total, w * chunk), hi = std::min(total, lo + chunk);
      pool.emplace_back(run, lo, hi, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
  }
  std::vector<long long> counts = std::move(partial[0]);
  for (unsigned w = 1; w < threads; ++w)
    for (long long k = 0; k < M; ++k) counts[k] += partial[w][k];
  return phase_from_root_counts(std::move(counts));
}

PhaseSum gauss_sum_completed(const IntMat& K0, const IntMat& L0, const IntMat& ell) {
  check_inputs(K0, L0, ell);
  long s = static_cast<long>(K0.rows()), r = static_cast<long>(L0.rows());
  if (s == 0 || r == 0) return PhaseSum::one();
  BigInt dK = determinant(K0), dL = determinant(L0);
  if (dK == 0) throw SingularMatrixError("gauss_sum_completed: K0 is singular");
  if (dL == 0) throw SingularMatrixError("gauss_sum_completed: L0 is singular");
  IntMat Q = kron(K0, adjugate(L0));
  IntVec shift = kron(adjugate(K0), IntMat(IntMat::Identity(r, r))) * flatten_copy_major(ell);
  Rat denom(dK * dK * dL);
  std::map<Rat, long> tally;
  TorsionCosets tc(L0, s);
  BigInt count = tc.count();
  for (BigInt i = 0; i < count; ++i) {
    IntVec z = dK * tc.representative(i) + shift;
    BigInt q = (z.transpose() * (Q * z))(0, 0);
    Rat e = mod2(Rat(-q) / denom);
    ++tally[e];
  }
  PhaseSum p;
  for (const auto& [e, c] : tally) p.add_term(Rat(c), e);
  return phase_canonicalize(p);
}

Rat self_linking(const IntMat& K0, const IntMat& L0, const IntMat& ell) {
  check_inputs(K0, L0, ell);
  if (K0.rows() == 0 || L0.rows() == 0) return Rat(0);
  RatVec v = flatten_copy_major(ell).cast<Rat>();
  RatMat Q = kron(rational_inverse(K0), rational_inverse(L0));
  return (v.transpose() * (Q * v))(0, 0);
}

}  // namespace abelcs
