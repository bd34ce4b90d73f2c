#include "abelcs/int_linalg.hpp"

#include <utility>

namespace abelcs {

namespace {

// g = x a + y b, g >= 0
// When a | b the cofactors are (sgn a, 0) so the pivot row is kept.
void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& x, BigInt& y) {
  if (a != 0 && mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
    g = abs(a);
    x = a > 0 ? 1 : -1;
    y = 0;
    return;
  }
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

void row_combine(IntMat& A, Eigen::Index r1, Eigen::Index r2, const BigInt& a, const BigInt& b,
                 const BigInt& c, const BigInt& d) {
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    BigInt u = A(r1, k), v = A(r2, k);
    A(r1, k) = a * u + b * v;
    A(r2, k) = c * u + d * v;
  }
}

void col_combine(IntMat& A, Eigen::Index c1, Eigen::Index c2, const BigInt& a, const BigInt& b,
                 const BigInt& c, const BigInt& d) {
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    BigInt u = A(k, c1), v = A(k, c2);
    A(k, c1) = a * u + b * v;
    A(k, c2) = c * u + d * v;
  }
}

}  // namespace

long first_odd_diagonal(const IntMat& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    if (mpz_odd_p(M(i, i).get_mpz_t())) return static_cast<long>(i);
  return -1;
}

void require_symmetric(const IntMat& M, const char* what) {
  if (!is_symmetric(M)) throw InputError(std::string(what) + " must be a symmetric square matrix");
}

BigInt determinant(const IntMat& M) {
  if (M.rows() != M.cols()) throw DimensionError("determinant of a non-square matrix");
  Eigen::Index n = M.rows();
  if (n == 0) return 1;
  IntMat A = M;
  BigInt prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && A(p, k) == 0) ++p;
      if (p == n) return 0;
      A.row(k).swap(A.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) {
        BigInt v = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(A(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

IntMat adjugate(const IntMat& M) {
  Eigen::Index n = M.rows();
  IntMat adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      IntMat minor(n - 1, n - 1);
      for (Eigen::Index a = 0, ra = 0; a < n; ++a) {
        if (a == j) continue;
        for (Eigen::Index b = 0, cb = 0; b < n; ++b) {
          if (b == i) continue;
          minor(ra, cb++) = M(a, b);
        }
        ++ra;
      }
      BigInt d = determinant(minor);
      adj(i, j) = ((i + j) % 2) ? BigInt(-d) : d;
    }
  return adj;
}

bool is_unimodular(const IntMat& M) {
  if (M.rows() != M.cols()) return false;
  BigInt d = determinant(M);
  return d == 1 || d == -1;
}

SmithResult smith_normal_form(const IntMat& M) {
  Eigen::Index m = M.rows(), n = M.cols();
  SmithResult res;
  IntMat D = M;
  IntMat U = IntMat::Identity(m, m);
  IntMat V = IntMat::Identity(n, n);
  Eigen::Index t = 0;
  for (; t < std::min(m, n); ++t) {
    // pivot: smallest nonzero magnitude
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = t; i < m; ++i)
      for (Eigen::Index j = t; j < n; ++j)
        if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    D.row(t).swap(D.row(pi));
    U.row(t).swap(U.row(pi));
    D.col(t).swap(D.col(pj));
    V.col(t).swap(V.col(pj));
    for (;;) {
      bool dirty = false;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        BigInt a = D(t, t), b = D(i, t), g, x, y;
        ext_gcd(a, b, g, x, y);
        BigInt c = -b / g, d = a / g;
        row_combine(D, t, i, x, y, c, d);
        row_combine(U, t, i, x, y, c, d);
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        BigInt a = D(t, t), b = D(t, j), g, x, y;
        ext_gcd(a, b, g, x, y);
        BigInt c = -b / g, d = a / g;
        col_combine(D, t, j, x, y, c, d);
        col_combine(V, t, j, x, y, c, d);
      }
      for (Eigen::Index i = t + 1; i < m; ++i)
        if (D(i, t) != 0) dirty = true;
      if (dirty) continue;
      // divisibility chain
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      D.row(t) += D.row(bad);
      U.row(t) += U.row(bad);
    }
    if (D(t, t) < 0) {
      D.row(t) = -D.row(t);
      U.row(t) = -U.row(t);
    }
  }
  res.rank = static_cast<long>(t);
  res.U = std::move(U);
  res.D = std::move(D);
  res.V = std::move(V);
  return res;
}

CongruenceResult congruence_block_diag(const IntMat& M) {
  require_symmetric(M, "congruence_block_diag input");
  Eigen::Index n = M.rows();
  CongruenceResult out;
  SmithResult s = smith_normal_form(M);
  long r = s.rank;
  out.rank = r;
  bool trailing_zero = true;
  for (Eigen::Index i = r; i < n && trailing_zero; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (M(i, j) != 0) {
        trailing_zero = false;
        break;
      }
  if (trailing_zero && determinant(M.topLeftCorner(r, r)) != 0) {
    out.P = IntMat::Identity(n, n);
  } else {
    out.P = s.V;
  }
  IntMat T = out.P.transpose() * M * out.P;
  out.M0 = T.topLeftCorner(r, r);
  return out;
}

int signature(const IntMat& M) {
  require_symmetric(M, "signature input");
  RatMat A = to_rat(M);
  int pos = 0, neg = 0;
  while (A.rows() > 0) {
    Eigen::Index n = A.rows();
    Eigen::Index piv = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (A(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv >= 0) {
      Rat a = A(piv, piv);
      if (a > 0) ++pos; else ++neg;
      RatMat B(n - 1, n - 1);
      for (Eigen::Index i = 0, bi = 0; i < n; ++i) {
        if (i == piv) continue;
        for (Eigen::Index j = 0, bj = 0; j < n; ++j) {
          if (j == piv) continue;
          B(bi, bj++) = A(i, j) - A(i, piv) * A(piv, j) / a;
        }
        ++bi;
      }
      A = std::move(B);
      continue;
    }
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = 0; i < n && pi < 0; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (A(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    // hyperbolic 2x2 block [[0,b],[b,0]]: one positive, one negative
    ++pos;
    ++neg;
    Rat b = A(pi, pj);
    RatMat B(n - 2, n - 2);
    for (Eigen::Index i = 0, bi = 0; i < n; ++i) {
      if (i == pi || i == pj) continue;
      for (Eigen::Index j = 0, bj = 0; j < n; ++j) {
        if (j == pi || j == pj) continue;
        // block inverse is [[0,1/b],[1/b,0]]
        B(bi, bj++) = A(i, j) - (A(i, pi) * A(pj, j) + A(i, pj) * A(pi, j)) / b;
      }
      ++bi;
    }
    A = std::move(B);
  }
  return pos - neg;
}

RatMat rational_inverse(const IntMat& M) {
  if (M.rows() != M.cols()) throw DimensionError("inverse of a non-square matrix");
  Eigen::Index n = M.rows();
  RatMat A = to_rat(M);
  RatMat I = RatMat::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && A(p, c) == 0) ++p;
    if (p == n) throw SingularMatrixError("matrix is singular");
    if (p != c) {
      A.row(p).swap(A.row(c));
      I.row(p).swap(I.row(c));
    }
    Rat inv = Rat(1) / A(c, c);
    A.row(c) *= inv;
    I.row(c) *= inv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || A(r, c) == 0) continue;
      Rat f = A(r, c);
      A.row(r) -= f * A.row(c);
      I.row(r) -= f * I.row(c);
    }
  }
  return I;
}

IntMat integer_inverse_unimodular(const IntMat& M) {
  if (!is_unimodular(M)) throw PreconditionError("matrix is not unimodular");
  return to_int(rational_inverse(M));
}

IntMat hermite_lower(const IntMat& M) {
  Eigen::Index n = M.rows();
  if (M.cols() != n) throw DimensionError("hermite_lower needs a square matrix");
  IntMat H = M;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (H(i, j) == 0) continue;
      BigInt a = H(i, i), b = H(i, j), g, x, y;
      ext_gcd(a, b, g, x, y);
      BigInt c = -b / g, d = a / g;
      col_combine(H, i, j, x, y, c, d);
    }
    if (H(i, i) == 0) throw SingularMatrixError("hermite_lower: singular matrix");
    if (H(i, i) < 0) H.col(i) = -H.col(i);
  }
  return H;
}

RatVec wu_class_even(const IntMat& L, const IntMat& K, const IntVec& w) {
  require_symmetric(L, "L");
  require_symmetric(K, "K");
  if (!is_even(L) && !is_even(K))
    throw UnsupportedCaseError("wu_class_even: neither matrix is even");
  if (w.size() != L.rows() * K.rows()) throw DimensionError("wu_class_even: w has wrong length");
  RatMat inv = kron(rational_inverse(L), rational_inverse(K));
  RatVec u = Rat(2) * (inv * w.cast<Rat>());
  return u;
}

bool verify_wu(const RatMat& e, const RatVec& u) {
  if (e.rows() != e.cols() || e.cols() != u.size()) throw DimensionError("verify_wu: size mismatch");
  RatVec eu = e * u;
  for (Eigen::Index i = 0; i < eu.size(); ++i) {
    if (eu(i).get_den() != 1) return false;
    if (e(i, i).get_den() != 1) return false;
    BigInt diff = eu(i).get_num() - e(i, i).get_num();
    if (mpz_odd_p(diff.get_mpz_t())) return false;
  }
  return true;
}

IntMat half_coupling(const IntMat& K) {
  require_symmetric(K, "K");
  long odd = first_odd_diagonal(K);
  if (odd >= 0)
    throw EvennessError("K must be even; diagonal entry K[" + std::to_string(odd) + "][" +
                        std::to_string(odd) + "] = " + K(odd, odd).get_str() + " is odd");
  IntMat C = IntMat::Zero(K.rows(), K.cols());
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    C(i, i) = K(i, i) / 2;
    for (Eigen::Index j = i + 1; j < K.cols(); ++j) C(i, j) = K(i, j);
  }
  return C;
}

}  // namespace abelcs
