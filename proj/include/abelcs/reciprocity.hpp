#pragma once

#include "abelcs/evaluator.hpp"

namespace abelcs {

// |det K|^{-m/2} sum_{x in (Z^n/K Z^n)^m} e^{i pi x^T (L x K^-1) x - i pi x^T (L x Id) u}
// x and u are indexed i*n + a (L component i, K direction a).
ExactValue reciprocity_lhs(const IntMat& K, const IntMat& L, const RatVec& u);

// |det L|^{-n/2} e^{i pi/4 (sig K sig L - u^T e u)} sum_{k in (Z^m/L Z^m)^n}
//   e^{-i pi k^T (K x L^-1) k + i pi k^T (K x Id) u'}
ExactValue reciprocity_rhs(const IntMat& K, const IntMat& L, const RatVec& u);

struct ReciprocitySides {
  ExactValue lhs, rhs;
};

// Both sides of the linear reciprocity after block normalization. ell is the m x n charge matrix.
ReciprocitySides reciprocity_degenerate(const IntMat& K, const IntMat& L, const IntMat& ell);

// Reorders a vector indexed i*n + a into a*m + i.
RatVec tensor_permute(const RatVec& u, long m, long n);

// (ell')^i_j = ell^j_i: an m x n charge matrix becomes n x m.
IntMat dual_observable(const IntMat& charges);
// Copy-major flat form: length n*m indexed j*m + i, result indexed i*n + j.
IntVec dual_observable(const IntVec& flat, long m, long n);

struct DualityResult {
  ExactValue lhs, rhs;
  Verdict verdict = Verdict::NotEqual;
  bool equal() const { return verdict != Verdict::NotEqual; }
  EvalReport primal, dual;
};

DualityResult duality_check(const SurgeryPresentation& L, const IntMat& C, const ObservableSpec& obs,
                            const EvalOptions& opts = {});

}  // namespace abelcs
