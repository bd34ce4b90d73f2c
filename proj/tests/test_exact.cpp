#include "abelcs/errors.hpp"
#include "abelcs/exact.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace abelcs;

namespace {

Rat q(long a, long b = 1) {
  Rat r(a, b);
  r.canonicalize();
  return r;
}

PhaseSum random_phase(std::mt19937_64& g) {
  std::uniform_int_distribution<int> nterms(1, 4), coef(-3, 3), den(1, 12);
  PhaseSum p;
  int k = nterms(g);
  for (int i = 0; i < k; ++i) {
    long d = den(g);
    std::uniform_int_distribution<long> num(0, 2 * d - 1);
    p.add_term(q(coef(g)), q(num(g), d));
  }
  return p;
}

double mid_re(const ComplexBall& b) { return b.approx().real(); }
double mid_im(const ComplexBall& b) { return b.approx().imag(); }

}  // namespace

TEST_CASE("phase_mul examples") {
  PhaseSum a = PhaseSum::unit(q(1, 3));
  CHECK(render(phase_mul(a, a)) == "1 * exp(i*pi*2/3)");
  PhaseSum x = PhaseSum::monomial(q(7), q(5, 4));
  CHECK(phase_mul(PhaseSum::one(), x) == x);
  PhaseSum s = PhaseSum::one() + PhaseSum::unit(q(1, 2));
  PhaseSum sq = phase_mul(s, s);
  CHECK(sq.size() == 1);
  CHECK(*sq.single_term() == std::make_pair(q(2), q(1, 2)));
}

TEST_CASE("phase_canonicalize examples") {
  PhaseSum cube = PhaseSum::one() + PhaseSum::unit(q(2, 3)) + PhaseSum::unit(q(4, 3));
  CHECK(phase_canonicalize(cube).is_zero());
  PhaseSum p = PhaseSum::unit(q(7, 3));
  CHECK(*phase_canonicalize(p).single_term() == std::make_pair(q(1), q(1, 3)));
  // minus one becomes a rational
  CHECK(*phase_canonicalize(PhaseSum::unit(q(1))).single_term() == std::make_pair(q(-1), q(0)));
  // sum of all 5th roots is zero; four of them give -1
  PhaseSum four;
  for (long k = 1; k < 5; ++k) four.add_term(q(1), q(2 * k, 5));
  CHECK(*phase_canonicalize(four).single_term() == std::make_pair(q(-1), q(0)));
}

TEST_CASE("root counts detect monomials") {
  // 1 + i  is sqrt2 e^{i pi/4}: not a rational monomial, stays a sum
  std::vector<long long> c(4, 0);
  c[0] = 1;
  c[1] = 1;
  PhaseSum p = phase_from_root_counts(c);
  CHECK(p == PhaseSum::one() + PhaseSum::unit(q(1, 2)));
  std::vector<long long> d(6, 0);
  d[1] = 3;
  d[3] = 3;
  d[5] = 3;
  CHECK(phase_from_root_counts(d).is_zero());
}

TEST_CASE("canonical form properties") {
  std::mt19937_64 g(7);
  for (int it = 0; it < 200; ++it) {
    PhaseSum a = random_phase(g), b = random_phase(g);
    PhaseSum ab = phase_mul(a, b), ba = phase_mul(b, a);
    CHECK(render(ab) == render(ba));
    CHECK(render(phase_canonicalize(ab)) == render(ab));
    std::uniform_int_distribution<long> num(-30, 30), den(1, 20);
    Rat t = q(num(g), den(g));
    CHECK(phase_mul(PhaseSum::unit(t), PhaseSum::unit(-t)) == PhaseSum::one());
  }
}

TEST_CASE("zero straddles zero at every precision") {
  PhaseSum cube = PhaseSum::one() + PhaseSum::unit(q(2, 3)) + PhaseSum::unit(q(4, 3));
  for (int bits : {64, 128, 256, 512}) CHECK(numeric_eval(cube, bits).contains_zero());
  ComplexBall z = numeric_eval(ExactValue(), 64);
  CHECK(z.contains_zero());
  CHECK(mpfr_zero_p(z.radius()));
}

TEST_CASE("numeric enclosures") {
  ExactValue v(q(-25), BigInt(1), PhaseSum::unit(q(1, 3)));
  ComplexBall b = numeric_eval(v, 128);
  CHECK(mid_re(b) == doctest::Approx(-12.5));
  CHECK(mid_im(b) == doctest::Approx(-25 * std::sqrt(3.0) / 2));
  CHECK(mpfr_get_exp(b.radius()) <= -120);
  ExactValue r = ExactValue::power_half(BigInt(23), 3);
  ComplexBall rb = numeric_eval(r, 128);
  CHECK(mid_re(rb) == doctest::Approx(110.30412503));
  CHECK(std::abs(mid_im(rb)) < 1e-30);
}

TEST_CASE("exact values with square roots") {
  ExactValue a = ExactValue::power_half(BigInt(23), 3);
  CHECK(a.coeff() == 23);
  CHECK(a.radicand() == 23);
  CHECK(render(a) == "23 * sqrt(23)");
  CHECK(a * a == ExactValue::rational(q(12167)));
  ExactValue h = ExactValue::power_half(BigInt(2), -1);
  CHECK(render(h) == "1/2 * sqrt(2)");
  // 1/sqrt2 (1 + i) = e^{i pi/4}
  ExactValue g(q(1), BigInt(1), PhaseSum::one() + PhaseSum::unit(q(1, 2)));
  CHECK(compare_values(h * g, ExactValue::from_phase(PhaseSum::unit(q(1, 4)))) == Verdict::Equal);
  // sqrt3 = -i (zeta3 - zeta3^2): compare exactly
  ExactValue s3(q(1), BigInt(3), PhaseSum::one());
  ExactValue g3(q(1), BigInt(1), PhaseSum::unit(q(3, 2)) * (PhaseSum::unit(q(2, 3)) + PhaseSum::unit(q(4, 3)).scaled(q(-1))));
  CHECK(compare_values(s3, g3) == Verdict::Equal);
  CHECK(compare_values(s3, ExactValue::rational(q(2))) == Verdict::NotEqual);
  CHECK(ExactValue(q(0), BigInt(5), PhaseSum::one()).is_zero());
  CHECK(ExactValue(q(3), BigInt(12), PhaseSum::one()).coeff() == 6);
}

TEST_CASE("render and parse round trip") {
  CHECK(render(ExactValue(q(-25), BigInt(1), PhaseSum::unit(q(1, 3)))) == "-25 * exp(i*pi*1/3)");
  CHECK(render(ExactValue(q(12), BigInt(1), PhaseSum::unit(q(-16, 23)))) == "12 * exp(i*pi*-16/23)");
  CHECK(render(ExactValue()) == "0");
  CHECK(render(ExactValue::rational(q(1))) == "1");
  std::mt19937_64 g(11);
  for (int it = 0; it < 100; ++it) {
    std::uniform_int_distribution<long> rad(1, 30), c(-9, 9);
    ExactValue v(q(c(g), 1 + std::abs(c(g))), BigInt(rad(g)), random_phase(g));
    std::string s = render(v);
    ExactValue back = parse_exact_value(s);
    CHECK(render(back) == s);
    CHECK(compare_values(back, v) == Verdict::Equal);
  }
  CHECK(render(parse_exact_value("2 * sqrt(8)")) == "4 * sqrt(2)");
  CHECK_THROWS_AS(parse_exact_value("2 * exp(pi)"), InputError);
  CHECK_THROWS_AS(parse_exact_value(""), InputError);
}

TEST_CASE("conjugation negates exponents") {
  ExactValue v(q(3), BigInt(7), PhaseSum::unit(q(2, 5)) + PhaseSum::unit(q(1, 7)));
  ExactValue c = v.conj();
  CHECK(c.conj() == v);
  for (const auto& [t, coef] : c.phase().terms()) CHECK(t < 2);
  CHECK(compare_values(c, ExactValue(q(3), BigInt(7), PhaseSum::unit(q(-2, 5)) + PhaseSum::unit(q(-1, 7)))) ==
        Verdict::Equal);
}

TEST_CASE("cyclotomic embedding of square roots") {
  for (long d : {2, 3, 5, 6, 7, 10, 23}) {
    Cyclotomic s = Cyclotomic::sqrt_of(BigInt(d));
    Cyclotomic sq = s * s;
    CHECK(sq.is_rational());
    CHECK(sq.rational_value() == d);
    CHECK(s.approx().real() == doctest::Approx(std::sqrt(double(d))));
  }
}
