#pragma once

#include "abelcs/cyclotomic.hpp"
#include "abelcs/scalar.hpp"

#include <map>
#include <mpfr.h>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abelcs {

// Finite sum  sum_t c_t e^{i pi t}, exponents kept in [0,2).
class PhaseSum {
 public:
  using Terms = std::map<Rat, Rat>;

  PhaseSum() = default;
  static PhaseSum one() { return monomial(Rat(1), Rat(0)); }
  static PhaseSum unit(const Rat& t) { return monomial(Rat(1), t); }
  static PhaseSum monomial(const Rat& c, const Rat& t);
  static PhaseSum from_cyclotomic(const Cyclotomic& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Rat& c, const Rat& t);

  Cyclotomic to_cyclotomic() const;
  PhaseSum conj() const;
  PhaseSum scaled(const Rat& s) const;

  // Single-term view (c, t) if structurally one term.
  std::optional<std::pair<Rat, Rat>> single_term() const;

  friend PhaseSum operator+(const PhaseSum& a, const PhaseSum& b);
  friend PhaseSum operator*(const PhaseSum& a, const PhaseSum& b);
  // value equality
  friend bool operator==(const PhaseSum& a, const PhaseSum& b);

 private:
  Terms terms_;
};

// Product of the values, in canonical form.
PhaseSum phase_mul(const PhaseSum& a, const PhaseSum& b);

// Unique representative of the value: a single term c e^{i pi t} when the value is
// a rational multiple of a root of unity (c > 0 unless rational, then t = 0),
// otherwise Zumbroich-basis terms at minimal conductor.
PhaseSum phase_canonicalize(const PhaseSum& a);

// counts[k] * e^{2 pi i k / counts.size()}, canonicalized on machine integers.
PhaseSum phase_from_root_counts(std::vector<long long> counts);

struct SqrtFactor {
  BigInt radicand;
  long multiplicity;
};

// coeff * sqrt(radicand) * phase, radicand squarefree.
class ExactValue {
 public:
  ExactValue() = default;
  ExactValue(const Rat& coeff, const BigInt& radicand, PhaseSum phase);
  static ExactValue rational(const Rat& r);
  static ExactValue from_phase(PhaseSum phase);
  // base^(half_exponent/2) for base != 0, e.g. |det|^{n - s/2}
  static ExactValue power_half(const BigInt& base, long half_exponent);

  const Rat& coeff() const { return coeff_; }
  const BigInt& radicand() const { return radicand_; }
  const PhaseSum& phase() const { return phase_; }
  std::vector<SqrtFactor> roots() const;
  bool is_zero() const { return coeff_ == 0; }

  ExactValue conj() const;
  Cyclotomic to_cyclotomic() const;

  friend ExactValue operator*(const ExactValue& a, const ExactValue& b);
  // requires equal radicands (or a zero operand)
  friend ExactValue operator+(const ExactValue& a, const ExactValue& b);

 private:
  Rat coeff_{0};
  BigInt radicand_{1};
  PhaseSum phase_;
};

enum class Verdict { Equal, NotEqual, NumericCertified };

const char* verdict_name(Verdict v);

// Exact when sqrt factors embed into a cyclotomic field of moderate order,
// otherwise a 256-bit enclosure test with tolerance 2^-128.
Verdict compare_values(const ExactValue& a, const ExactValue& b);

bool operator==(const ExactValue& a, const ExactValue& b);

std::string render(const ExactValue& v);
std::string render(const PhaseSum& p);
std::string render_rat(const Rat& r);

// Accepts the output grammar of render; throws InputError.
ExactValue parse_exact_value(std::string_view text);

// Certified complex enclosure: true value lies within `radius` of (re, im).
class ComplexBall {
 public:
  explicit ComplexBall(mpfr_prec_t prec);
  ~ComplexBall();
  ComplexBall(const ComplexBall& o);
  ComplexBall& operator=(const ComplexBall& o);

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr re() const { return re_; }
  mpfr_srcptr im() const { return im_; }
  mpfr_srcptr radius() const { return rad_; }
  mpfr_ptr re() { return re_; }
  mpfr_ptr im() { return im_; }
  mpfr_ptr radius() { return rad_; }

  bool contains_zero() const;
  // upper bound on |this - other| (midpoint distance plus both radii)
  double distance_upper_log2(const ComplexBall& other) const;
  std::string to_string(int digits = 30) const;
  std::complex<double> approx() const;

 private:
  mpfr_prec_t prec_;
  mpfr_t re_, im_, rad_;
};

ComplexBall numeric_eval(const ExactValue& v, int precision_bits);
ComplexBall numeric_eval(const PhaseSum& p, int precision_bits);

}  // namespace abelcs
