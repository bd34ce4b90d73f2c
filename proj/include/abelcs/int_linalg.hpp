#pragma once

#include "abelcs/errors.hpp"
#include "abelcs/scalar.hpp"

namespace abelcs {

struct SmithResult {
  IntMat U, D, V;  // U * M * V = D
  long rank = 0;
};

struct CongruenceResult {
  IntMat P;   // unimodular, P^T M P = M0 (+) 0
  IntMat M0;  // r x r, nondegenerate
  long rank = 0;
};

// Kronecker product with A's index as the slow (block) index.
template <class DA, class DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(A.rows() * B.rows(),
                                                                         A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

inline RatMat tensor(const RatMat& A, const RatMat& B) { return kron(A, B); }

template <class Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& M) {
  if (M.rows() != M.cols()) return false;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = i + 1; j < M.cols(); ++j)
      if (M(i, j) != M(j, i)) return false;
  return true;
}

template <class Derived>
bool is_even(const Eigen::MatrixBase<Derived>& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    if (!mpz_even_p(BigInt(M(i, i)).get_mpz_t())) return false;
  return true;
}

// Index of the first odd diagonal entry, or -1.
long first_odd_diagonal(const IntMat& M);

void require_symmetric(const IntMat& M, const char* what);

BigInt determinant(const IntMat& M);
IntMat adjugate(const IntMat& M);
bool is_unimodular(const IntMat& M);

SmithResult smith_normal_form(const IntMat& M);

CongruenceResult congruence_block_diag(const IntMat& M);

int signature(const IntMat& M);

RatMat rational_inverse(const IntMat& M);
IntMat integer_inverse_unimodular(const IntMat& M);

// Lower-triangular column Hermite form H with H Z^n = M Z^n (M nonsingular square).
IntMat hermite_lower(const IntMat& M);

RatVec wu_class_even(const IntMat& L, const IntMat& K, const IntVec& w);
bool verify_wu(const RatMat& e, const RatVec& u);

// Upper-triangular C with C + C^T = K (K even).
IntMat half_coupling(const IntMat& K);

}  // namespace abelcs
