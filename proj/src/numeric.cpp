#include "abelcs/exact.hpp"

#include <cmath>
#include <limits>

namespace abelcs {

ComplexBall::ComplexBall(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(re_, prec);
  mpfr_init2(im_, prec);
  mpfr_init2(rad_, 64);
  mpfr_set_zero(re_, 1);
  mpfr_set_zero(im_, 1);
  mpfr_set_zero(rad_, 1);
}

ComplexBall::~ComplexBall() {
  mpfr_clear(re_);
  mpfr_clear(im_);
  mpfr_clear(rad_);
}

ComplexBall::ComplexBall(const ComplexBall& o) : ComplexBall(o.prec_) {
  mpfr_set(re_, o.re_, MPFR_RNDN);
  mpfr_set(im_, o.im_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

ComplexBall& ComplexBall::operator=(const ComplexBall& o) {
  if (this == &o) return *this;
  prec_ = o.prec_;
  mpfr_set_prec(re_, prec_);
  mpfr_set_prec(im_, prec_);
  mpfr_set(re_, o.re_, MPFR_RNDN);
  mpfr_set(im_, o.im_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
  return *this;
}

bool ComplexBall::contains_zero() const {
  mpfr_t a;
  mpfr_init2(a, 64);
  mpfr_abs(a, re_, MPFR_RNDD);
  bool re_ok = mpfr_cmp(a, rad_) <= 0;
  mpfr_abs(a, im_, MPFR_RNDD);
  bool im_ok = mpfr_cmp(a, rad_) <= 0;
  mpfr_clear(a);
  return re_ok && im_ok;
}

double ComplexBall::distance_upper_log2(const ComplexBall& other) const {
  mpfr_prec_t p = std::max(prec_, other.prec_) + 8;
  mpfr_t d, acc;
  mpfr_init2(d, p);
  mpfr_init2(acc, 64);
  mpfr_sub(d, re_, other.re_, MPFR_RNDN);
  mpfr_abs(d, d, MPFR_RNDU);
  mpfr_set(acc, d, MPFR_RNDU);
  mpfr_sub(d, im_, other.im_, MPFR_RNDN);
  mpfr_abs(d, d, MPFR_RNDU);
  mpfr_add(acc, acc, d, MPFR_RNDU);
  mpfr_add(acc, acc, rad_, MPFR_RNDU);
  mpfr_add(acc, acc, other.rad_, MPFR_RNDU);
  // subtraction rounding of the midpoints
  mpfr_set_ui_2exp(d, 1, -static_cast<long>(p) + 4, MPFR_RNDU);
  mpfr_add(acc, acc, d, MPFR_RNDU);
  double out;
  if (mpfr_zero_p(acc)) {
    out = -std::numeric_limits<double>::infinity();
  } else {
    long e;
    double m = mpfr_get_d_2exp(&e, acc, MPFR_RNDU);
    out = std::log2(m) + static_cast<double>(e);
  }
  mpfr_clear(d);
  mpfr_clear(acc);
  return out;
}

std::string ComplexBall::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg + %.*Rg*i +/- %.3Rg", digits, re_, digits, im_, rad_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

std::complex<double> ComplexBall::approx() const {
  return {mpfr_get_d(re_, MPFR_RNDN), mpfr_get_d(im_, MPFR_RNDN)};
}

namespace {

long bit_length_upper(const Rat& x) {
  if (x == 0) return 0;
  Rat a = abs(x);
  long bn = static_cast<long>(mpz_sizeinbase(a.get_num().get_mpz_t(), 2));
  long bd = static_cast<long>(mpz_sizeinbase(a.get_den().get_mpz_t(), 2));
  return bn - bd + 1;
}

ComplexBall eval_terms(const Rat& coeff, const BigInt& radicand, const PhaseSum& phase,
                       int precision_bits) {
  ComplexBall out(precision_bits);
  if (coeff == 0 || phase.is_zero()) return out;

  Rat mass = 0;
  for (const auto& [t, c] : phase.terms()) mass += abs(c);
  long nterms = static_cast<long>(phase.size());
  long rad_bits = static_cast<long>(mpz_sizeinbase(radicand.get_mpz_t(), 2)) / 2 + 1;
  long mag = bit_length_upper(coeff) + bit_length_upper(mass) + rad_bits;
  long log_terms = 1;
  while ((1L << log_terms) < nterms + 64) ++log_terms;
  mpfr_prec_t w = precision_bits + 16 + log_terms + std::max(0L, mag);

  mpfr_t pi, th, cs, sn, cv, re, im;
  for (mpfr_ptr x : {pi, th, cs, sn, cv, re, im}) mpfr_init2(x, w);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  mpq_t q;
  mpq_init(q);
  for (const auto& [t, c] : phase.terms()) {
    mpq_set(q, t.get_mpq_t());
    mpfr_mul_q(th, pi, q, MPFR_RNDN);
    mpfr_sin_cos(sn, cs, th, MPFR_RNDN);
    mpfr_set_q(cv, c.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(cs, cs, cv, MPFR_RNDN);
    mpfr_mul(sn, sn, cv, MPFR_RNDN);
    mpfr_add(re, re, cs, MPFR_RNDN);
    mpfr_add(im, im, sn, MPFR_RNDN);
  }
  Rat scale = coeff;
  mpfr_set_q(cv, scale.get_mpq_t(), MPFR_RNDN);
  if (radicand != 1) {
    mpfr_t r;
    mpfr_init2(r, w);
    mpfr_set_z(r, radicand.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(r, r, MPFR_RNDN);
    mpfr_mul(cv, cv, r, MPFR_RNDN);
    mpfr_clear(r);
  }
  mpfr_mul(re, re, cv, MPFR_RNDN);
  mpfr_mul(im, im, cv, MPFR_RNDN);
  mpfr_set(out.re(), re, MPFR_RNDN);
  mpfr_set(out.im(), im, MPFR_RNDN);

  // Each term carries relative error below 32 ulp(w) of its magnitude; summation adds
  // at most nterms roundings of the running total; final scaling and rounding to the
  // output precision add a few more.
  mpfr_t bound, tmp;
  mpfr_init2(bound, 64);
  mpfr_init2(tmp, 64);
  mpfr_set_q(bound, mass.get_mpq_t(), MPFR_RNDU);
  mpfr_set_q(tmp, Rat(abs(coeff)).get_mpq_t(), MPFR_RNDU);
  mpfr_mul(bound, bound, tmp, MPFR_RNDU);
  mpfr_set_z(tmp, radicand.get_mpz_t(), MPFR_RNDU);
  mpfr_sqrt(tmp, tmp, MPFR_RNDU);
  mpfr_add_ui(tmp, tmp, 1, MPFR_RNDU);
  mpfr_mul(bound, bound, tmp, MPFR_RNDU);
  mpfr_mul_ui(bound, bound, static_cast<unsigned long>(nterms + 64), MPFR_RNDU);
  mpfr_mul_2si(bound, bound, -static_cast<long>(w) + 1, MPFR_RNDU);
  // rounding of the midpoint to precision_bits
  mpfr_abs(tmp, re, MPFR_RNDU);
  mpfr_t tmp2;
  mpfr_init2(tmp2, 64);
  mpfr_abs(tmp2, im, MPFR_RNDU);
  mpfr_add(tmp, tmp, tmp2, MPFR_RNDU);
  mpfr_add_ui(tmp, tmp, 1, MPFR_RNDU);
  mpfr_mul_2si(tmp, tmp, -static_cast<long>(precision_bits) + 1, MPFR_RNDU);
  mpfr_add(bound, bound, tmp, MPFR_RNDU);
  mpfr_set(out.radius(), bound, MPFR_RNDU);

  mpfr_clear(tmp2);
  mpfr_clear(bound);
  mpfr_clear(tmp);
  mpq_clear(q);
  for (mpfr_ptr x : {pi, th, cs, sn, cv, re, im}) mpfr_clear(x);
  return out;
}

}  // namespace

ComplexBall numeric_eval(const ExactValue& v, int precision_bits) {
  if (precision_bits < 64) throw std::invalid_argument("numeric_eval: precision_bits must be >= 64");
  return eval_terms(v.coeff(), v.radicand(), v.phase(), precision_bits);
}

ComplexBall numeric_eval(const PhaseSum& p, int precision_bits) {
  if (precision_bits < 64) throw std::invalid_argument("numeric_eval: precision_bits must be >= 64");
  return eval_terms(Rat(1), BigInt(1), p, precision_bits);
}

}  // namespace abelcs
