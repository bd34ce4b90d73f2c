#include "abelcs/scalar.hpp"

#include "abelcs/errors.hpp"

#include <sstream>

namespace abelcs {

IntMat int_mat(const std::vector<std::vector<long>>& rows) {
  Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Eigen::Index c = r ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  IntMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c) throw DimensionError("ragged matrix");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntVec int_vec(const std::vector<long>& v) {
  IntVec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

RatVec rat_vec(const std::vector<Rat>& v) {
  RatVec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

IntMat to_int(const RatMat& m) {
  IntMat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw std::domain_error("to_int: non-integral entry");
      out(i, j) = m(i, j).get_num();
    }
  return out;
}

bool is_integral(const RatMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

Rat rat_pow(const Rat& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw SingularMatrixError("rat_pow: zero to negative power");
    return rat_pow(Rat(1) / base, -exponent);
  }
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(exponent));
  Rat r(num, den);
  r.canonicalize();
  return r;
}

BigInt floor_rat(const Rat& q) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return f;
}

Rat mod2(const Rat& t) {
  Rat half = t / 2;
  Rat r = t - 2 * Rat(floor_rat(half));
  r.canonicalize();
  return r;
}

std::string format_mat(const IntMat& m) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace abelcs
