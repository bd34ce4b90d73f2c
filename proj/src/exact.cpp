#include "abelcs/exact.hpp"

#include "abelcs/errors.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace abelcs {

namespace {

long checked_lcm(long a, long b) {
  long g = std::gcd(a, b);
  __int128 l = static_cast<__int128>(a / g) * b;
  if (l > (1L << 40)) throw UnsupportedCaseError("phase exponent denominators too large");
  return static_cast<long>(l);
}

PhaseSum phase_from_monomial_or_terms(const Cyclotomic& c) {
  PhaseSum out;
  if (c.is_zero()) return out;
  if (c.is_rational()) return PhaseSum::monomial(c.rational_value(), Rat(0));
  if (auto m = c.as_monomial()) {
    Rat coef = m->first;
    Rat t = m->second;
    if (coef < 0) {
      coef = -coef;
      t = mod2(t + 1);
    }
    return PhaseSum::monomial(coef, t);
  }
  return PhaseSum::from_cyclotomic(c);
}

// Splits n = s^2 f with f squarefree (trial division, perfect-square cofactor check).
std::pair<BigInt, BigInt> square_split(const BigInt& n) {
  BigInt s = 1, f = 1, rest = n;
  for (unsigned long p = 2; p < 2000000; ++p) {
    BigInt pp(p);
    if (pp * pp > rest) break;
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    int e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= pp;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) s *= pp;
    if (e % 2) f *= pp;
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      BigInt r;
      mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
      s *= r;
    } else {
      f *= rest;
    }
  }
  return {s, f};
}

}  // namespace

// ---- PhaseSum ----

PhaseSum PhaseSum::monomial(const Rat& c, const Rat& t) {
  PhaseSum p;
  p.add_term(c, t);
  return p;
}

void PhaseSum::add_term(const Rat& c, const Rat& t) {
  if (c == 0) return;
  Rat key = mod2(t);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PhaseSum PhaseSum::from_cyclotomic(const Cyclotomic& c) {
  PhaseSum p;
  long n = c.order();
  for (long k = 0; k < n; ++k) {
    const Rat& v = c.coeffs()[k];
    if (v == 0) continue;
    Rat t(2 * k, n);
    t.canonicalize();
    p.add_term(v, t);
  }
  return p;
}

Cyclotomic PhaseSum::to_cyclotomic() const {
  if (terms_.empty()) return Cyclotomic();
  long N = 1;
  for (const auto& [t, c] : terms_) {
    BigInt d = t.get_den();
    if (!d.fits_slong_p()) throw UnsupportedCaseError("phase denominator too large");
    N = checked_lcm(N, d.get_si());
  }
  long order = 2 * N;
  std::vector<Rat> a(order, Rat(0));
  for (const auto& [t, c] : terms_) {
    Rat idx = t * N;
    long k = idx.get_num().get_si() % order;
    a[k] += c;
  }
  return Cyclotomic::from_exponents(order, std::move(a));
}

PhaseSum PhaseSum::conj() const {
  PhaseSum p;
  for (const auto& [t, c] : terms_) p.add_term(c, -t);
  return p;
}

PhaseSum PhaseSum::scaled(const Rat& s) const {
  PhaseSum p;
  if (s == 0) return p;
  for (const auto& [t, c] : terms_) p.terms_.emplace(t, c * s);
  return p;
}

std::optional<std::pair<Rat, Rat>> PhaseSum::single_term() const {
  if (terms_.size() != 1) return std::nullopt;
  return std::make_pair(terms_.begin()->second, terms_.begin()->first);
}

PhaseSum operator+(const PhaseSum& a, const PhaseSum& b) {
  PhaseSum p = a;
  for (const auto& [t, c] : b.terms_) p.add_term(c, t);
  return p;
}

PhaseSum operator*(const PhaseSum& a, const PhaseSum& b) {
  PhaseSum p;
  for (const auto& [ta, ca] : a.terms_)
    for (const auto& [tb, cb] : b.terms_) p.add_term(ca * cb, ta + tb);
  return p;
}

bool operator==(const PhaseSum& a, const PhaseSum& b) {
  if (a.terms_ == b.terms_) return true;
  return (a + b.scaled(Rat(-1))).to_cyclotomic().is_zero();
}

PhaseSum phase_mul(const PhaseSum& a, const PhaseSum& b) { return phase_canonicalize(a * b); }

PhaseSum phase_canonicalize(const PhaseSum& a) {
  return phase_from_monomial_or_terms(a.to_cyclotomic());
}

PhaseSum phase_from_root_counts(std::vector<long long> counts) {
  long n = static_cast<long>(counts.size());
  detail::zumbroich_reduce(counts, n);
  n = detail::minimize_conductor(counts, n);
  if (n == 1) return PhaseSum::monomial(Rat(static_cast<long>(counts[0])), Rat(0));
  bool zero = true;
  for (auto v : counts)
    if (v) zero = false;
  if (zero) return PhaseSum();
  if (auto m = detail::detect_monomial(counts, n)) {
    Rat coef(static_cast<long>(m->first));
    Rat t(2 * m->second, n);
    t.canonicalize();
    if (coef < 0) {
      coef = -coef;
      t += 1;
    }
    return PhaseSum::monomial(coef, t);
  }
  PhaseSum p;
  for (long k = 0; k < n; ++k) {
    if (!counts[k]) continue;
    Rat t(2 * k, n);
    t.canonicalize();
    p.add_term(Rat(static_cast<long>(counts[k])), t);
  }
  return p;
}

// ---- ExactValue ----

namespace {

struct Folded {
  Rat coeff;
  BigInt radicand;
  Rat exponent;
};

// Writes a phase sum z as c sqrt(f) e^{i pi t} when z^2 is a rational multiple of a root of unity.
std::optional<Folded> fold_square_root(const PhaseSum& phase) {
  constexpr long kMaxOrder = 100000;
  Cyclotomic z = phase.to_cyclotomic();
  if (z.order() > kMaxOrder) return std::nullopt;
  auto sq = (z * z).as_monomial();
  if (!sq) return std::nullopt;
  auto [c, t] = *sq;
  if (c < 0) {
    c = -c;
    t = mod2(t + 1);
  }
  BigInt num = c.get_num() * c.get_den();
  auto [s, f] = square_split(num);
  if (!f.fits_slong_p() || f > kMaxOrder) return std::nullopt;
  Rat root = Rat(s) / Rat(c.get_den());
  Rat half = t / 2;
  Cyclotomic w = root * (Cyclotomic::sqrt_of(f) * PhaseSum::unit(half).to_cyclotomic());
  if (w == z) return Folded{root, f, mod2(half)};
  if (-w == z) return Folded{root, f, mod2(half + 1)};
  return std::nullopt;
}

}  // namespace

ExactValue::ExactValue(const Rat& coeff, const BigInt& radicand, PhaseSum phase) {
  if (radicand <= 0) throw std::invalid_argument("ExactValue: radicand must be positive");
  if (coeff == 0 || phase.is_zero()) return;
  auto [s, f] = square_split(radicand);
  coeff_ = coeff * Rat(s);
  radicand_ = f;
  if (auto st = phase.single_term()) {
    coeff_ *= st->first;
    phase_ = PhaseSum::unit(st->second);
    return;
  }
  if (auto folded = fold_square_root(phase)) {
    auto [s2, f2] = square_split(radicand_ * folded->radicand);
    coeff_ *= folded->coeff * Rat(s2);
    radicand_ = f2;
    phase_ = PhaseSum::unit(folded->exponent);
    return;
  }
  phase_ = std::move(phase);
}

ExactValue ExactValue::rational(const Rat& r) { return ExactValue(r, BigInt(1), PhaseSum::one()); }

ExactValue ExactValue::from_phase(PhaseSum phase) {
  return ExactValue(Rat(1), BigInt(1), std::move(phase));
}

ExactValue ExactValue::power_half(const BigInt& base, long half_exponent) {
  if (base == 0) throw SingularMatrixError("power_half: zero base");
  BigInt b = abs(base);
  long whole = half_exponent >= 0 ? half_exponent / 2 : -((-half_exponent + 1) / 2);
  bool odd = (half_exponent - 2 * whole) != 0;
  Rat c = rat_pow(Rat(b), whole);
  return ExactValue(c, odd ? b : BigInt(1), PhaseSum::one());
}

std::vector<SqrtFactor> ExactValue::roots() const {
  if (radicand_ == 1) return {};
  return {SqrtFactor{radicand_, 1}};
}

ExactValue ExactValue::conj() const {
  ExactValue v;
  v.coeff_ = coeff_;
  v.radicand_ = radicand_;
  v.phase_ = phase_.conj();
  return v;
}

Cyclotomic ExactValue::to_cyclotomic() const {
  if (is_zero()) return Cyclotomic();
  Cyclotomic c = coeff_ * phase_.to_cyclotomic();
  if (radicand_ != 1) c = c * Cyclotomic::sqrt_of(radicand_);
  return c;
}

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero() || b.is_zero()) return ExactValue();
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.radicand_.get_mpz_t(), b.radicand_.get_mpz_t());
  BigInt rad = (a.radicand_ / g) * (b.radicand_ / g);
  return ExactValue(a.coeff_ * b.coeff_ * Rat(g), rad, a.phase_ * b.phase_);
}

ExactValue operator+(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.radicand_ != b.radicand_)
    throw UnsupportedCaseError("addition of values with different square-root factors");
  return ExactValue(Rat(1), a.radicand_, a.phase_.scaled(a.coeff_) + b.phase_.scaled(b.coeff_));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "EQUAL";
    case Verdict::NotEqual: return "NOT-EQUAL";
    case Verdict::NumericCertified: return "NUMERIC-CERTIFIED";
  }
  return "?";
}

namespace {

long estimated_order(const ExactValue& v) {
  long n = 1;
  for (const auto& [t, c] : v.phase().terms()) {
    BigInt d = t.get_den();
    if (!d.fits_slong_p()) return -1;
    n = std::lcm(n, d.get_si());
    if (n > 100000) return -1;
  }
  n *= 2;
  if (v.radicand() != 1) {
    if (!v.radicand().fits_slong_p()) return -1;
    long r = v.radicand().get_si();
    if (r > 100000) return -1;
    n = std::lcm(n, 4 * r);
  }
  return n;
}

}  // namespace

Verdict compare_values(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero() && b.is_zero()) return Verdict::Equal;
  long na = estimated_order(a), nb = estimated_order(b);
  if (na > 0 && nb > 0 && std::lcm(na, nb) <= 400000) {
    if (a.radicand() == b.radicand()) {
      PhaseSum d = a.phase().scaled(a.coeff()) + b.phase().scaled(-b.coeff());
      return d.to_cyclotomic().is_zero() ? Verdict::Equal : Verdict::NotEqual;
    }
    return (a.to_cyclotomic() - b.to_cyclotomic()).is_zero() ? Verdict::Equal
                                                               : Verdict::NotEqual;
  }
  ComplexBall x = numeric_eval(a, 256);
  ComplexBall y = numeric_eval(b, 256);
  return x.distance_upper_log2(y) <= -128.0 ? Verdict::NumericCertified : Verdict::NotEqual;
}

bool operator==(const ExactValue& a, const ExactValue& b) {
  return compare_values(a, b) != Verdict::NotEqual;
}

// ---- text ----

std::string render_rat(const Rat& r) { return r.get_str(); }

namespace {

std::string render_terms(const Rat& coeff, const BigInt& radicand, const PhaseSum& phase) {
  if (coeff == 0 || phase.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, c] : phase.terms()) {
    Rat total = coeff * c;
    if (first) {
      os << total.get_str();
    } else {
      os << (total < 0 ? " - " : " + ") << Rat(abs(total)).get_str();
    }
    first = false;
    if (radicand != 1) os << " * sqrt(" << radicand.get_str() << ")";
    if (t != 0) {
      Rat e = t > 1 ? Rat(t - 2) : t;
      os << " * exp(i*pi*" << e.get_num().get_str() << "/" << e.get_den().get_str() << ")";
    }
  }
  return os.str();
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExactValue run() {
    skip();
    if (pos_ == s_.size()) fail("empty input");
    std::vector<std::tuple<Rat, BigInt, Rat>> summands;
    int sign = 1;
    if (peek() == '-') {
      ++pos_;
      sign = -1;
      skip();
    }
    summands.push_back(summand(sign));
    for (;;) {
      skip();
      if (pos_ == s_.size()) break;
      char c = s_[pos_];
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      ++pos_;
      skip();
      summands.push_back(summand(c == '-' ? -1 : 1));
    }
    BigInt rad = 0;
    PhaseSum phase;
    for (auto& [c, r, t] : summands) {
      auto [s, f] = square_split(r);
      if (c == 0) continue;
      if (rad == 0) rad = f;
      if (f != rad) fail("terms with different square-root factors are not supported");
      phase.add_term(c * Rat(s), t);
    }
    if (phase.is_zero()) return ExactValue();
    return ExactValue(Rat(1), rad, std::move(phase));
  }

 private:
  std::tuple<Rat, BigInt, Rat> summand(int sign) {
    Rat c = rational(true) * sign;
    BigInt rad = 1;
    Rat t = 0;
    bool have_exp = false;
    for (;;) {
      skip();
      if (peek() != '*') break;
      ++pos_;
      skip();
      if (match("sqrt(")) {
        skip();
        Rat r = rational(false);
        if (r.get_den() != 1 || r <= 0) fail("sqrt radicand must be a positive integer");
        rad *= r.get_num();
        skip();
        expect(')');
      } else if (match("exp(")) {
        if (have_exp) fail("repeated exp factor");
        skip();
        for (const char* tok : {"i", "*", "pi", "*"}) {
          skip();
          if (!match(tok)) fail(std::string("expected '") + tok + "'");
        }
        skip();
        t = rational(true);
        skip();
        expect(')');
        have_exp = true;
      } else {
        fail("expected sqrt( or exp(");
      }
    }
    return {c, rad, t};
  }

  Rat rational(bool allow_sign) {
    std::size_t start = pos_;
    if (allow_sign && (peek() == '-' || peek() == '+')) ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    std::string num(s_.substr(start, pos_ - start));
    std::string den = "1";
    std::size_t save = pos_;
    skip();
    if (peek() == '/') {
      ++pos_;
      skip();
      std::size_t ds = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (ds == pos_) fail("expected a denominator");
      den = std::string(s_.substr(ds, pos_ - ds));
    } else {
      pos_ = save;
    }
    if (num[0] == '+') num.erase(0, 1);
    Rat r{BigInt(num), BigInt(den)};
    if (r.get_den() == 0) fail("zero denominator");
    r.canonicalize();
    return r;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool match(std::string_view tok) {
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("value parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render(const ExactValue& v) {
  return render_terms(v.coeff(), v.radicand(), v.phase());
}

std::string render(const PhaseSum& p) { return render_terms(Rat(1), BigInt(1), p); }

ExactValue parse_exact_value(std::string_view text) { return Parser(text).run(); }

}  // namespace abelcs
