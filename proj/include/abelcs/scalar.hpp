#pragma once

#include <gmpxx.h>
#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace abelcs {

using BigInt = mpz_class;
using Rat = mpq_class;

}  // namespace abelcs

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  typedef mpz_class Real;
  typedef mpz_class NonInteger;
  typedef mpz_class Nested;
  typedef mpz_class Literal;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  typedef mpq_class Literal;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace abelcs {

using IntMat = Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic>;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<BigInt, Eigen::Dynamic, 1>;
using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

// Build from nested initializer data, e.g. int_mat({{2,1},{1,2}}).
IntMat int_mat(const std::vector<std::vector<long>>& rows);
IntVec int_vec(const std::vector<long>& v);
RatVec rat_vec(const std::vector<Rat>& v);

template <class Derived>
RatMat to_rat(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<Rat>();
}

// Throws if some entry is not an integer.
IntMat to_int(const RatMat& m);

bool is_integral(const RatMat& m);

// Exact integer power of a rational.
Rat rat_pow(const Rat& base, long exponent);

// Canonical residue of a rational modulo 2, in [0,2).
Rat mod2(const Rat& t);

// floor/ceil helpers on mpq
BigInt floor_rat(const Rat& q);

// "[[1,2],[3,4]]" style rendering
std::string format_mat(const IntMat& m);

}  // namespace abelcs
