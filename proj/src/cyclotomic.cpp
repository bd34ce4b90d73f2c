#include "abelcs/cyclotomic.hpp"

#include "abelcs/errors.hpp"

#include <cmath>
#include <numeric>

namespace abelcs {

namespace detail {

std::vector<PrimePower> factor_small(long n) {
  std::vector<PrimePower> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.q *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

long mod_inverse(long a, long m) {
  if (m == 1) return 0;
  long g = m, x = 0, x1 = 1, r = ((a % m) + m) % m;
  while (r) {
    long q = g / r;
    long t = g - q * r;
    g = r;
    r = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::logic_error("mod_inverse: not invertible");
  return ((x % m) + m) % m;
}

}  // namespace detail

namespace {

Cyclotomic make(long n, std::vector<Rat> a) {
  detail::zumbroich_reduce(a, n);
  n = detail::minimize_conductor(a, n);
  return Cyclotomic::from_exponents(n, std::move(a));
}

long lcm_checked(long a, long b) {
  long g = std::gcd(a, b);
  __int128 l = static_cast<__int128>(a / g) * b;
  if (l > (1L << 40)) throw UnsupportedCaseError("cyclotomic order too large");
  return static_cast<long>(l);
}

long legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  BigInt r;
  BigInt base(a);
  BigInt e(static_cast<long>((p - 1) / 2));
  BigInt mod(p);
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return r == 1 ? 1 : -1;
}

Cyclotomic sqrt_prime(long p) {
  if (p == 2) {
    std::vector<Rat> a(8, Rat(0));
    a[1] = 1;
    a[7] = 1;
    return Cyclotomic::from_exponents(8, std::move(a));
  }
  std::vector<Rat> g(p, Rat(0));
  for (long k = 1; k < p; ++k) g[k] = legendre(k, p);
  Cyclotomic gs = Cyclotomic::from_exponents(p, std::move(g));
  if (p % 4 == 1) return gs;
  return Cyclotomic::root_of_unity(4, 3) * gs;
}

}  // namespace

Cyclotomic Cyclotomic::from_exponents(long order, std::vector<Rat> coeffs) {
  if (order < 1 || static_cast<long>(coeffs.size()) != order)
    throw std::invalid_argument("Cyclotomic: coefficient vector must have length order");
  Cyclotomic c;
  detail::zumbroich_reduce(coeffs, order);
  c.order_ = detail::minimize_conductor(coeffs, order);
  c.coeffs_ = std::move(coeffs);
  return c;
}

Cyclotomic Cyclotomic::root_of_unity(long order, long k) {
  std::vector<Rat> a(order, Rat(0));
  a[((k % order) + order) % order] = 1;
  return from_exponents(order, std::move(a));
}

Cyclotomic Cyclotomic::sqrt_of(const BigInt& d) {
  if (d <= 0) throw std::invalid_argument("sqrt_of: radicand must be positive");
  if (!d.fits_slong_p()) throw UnsupportedCaseError("sqrt_of: radicand too large");
  long n = d.get_si();
  Cyclotomic out(Rat(1));
  for (const auto& pp : detail::factor_small(n)) {
    for (int i = 0; i + 1 < pp.e; i += 2) out = Rat(pp.p) * out;
    if (pp.e % 2) out = out * sqrt_prime(pp.p);
  }
  return out;
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

std::optional<std::pair<Rat, Rat>> Cyclotomic::as_monomial() const {
  auto m = detail::detect_monomial(coeffs_, order_);
  if (!m) return std::nullopt;
  Rat t(2 * m->second, order_);
  t.canonicalize();
  return std::make_pair(m->first, mod2(t));
}

std::vector<Rat> Cyclotomic::embedded(long multiple) const {
  if (multiple % order_ != 0) throw std::invalid_argument("embedded: not a multiple");
  long f = multiple / order_;
  std::vector<Rat> z(multiple, Rat(0));
  for (long k = 0; k < order_; ++k)
    if (coeffs_[k] != 0) z[k * f] = coeffs_[k];
  detail::zumbroich_reduce(z, multiple);
  return z;
}

Cyclotomic Cyclotomic::conj() const {
  std::vector<Rat> a(order_, Rat(0));
  for (long k = 0; k < order_; ++k)
    if (coeffs_[k] != 0) a[(order_ - k) % order_] = coeffs_[k];
  return make(order_, std::move(a));
}

std::complex<double> Cyclotomic::approx() const {
  std::complex<double> s = 0;
  for (long k = 0; k < order_; ++k) {
    if (coeffs_[k] == 0) continue;
    double th = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(order_);
    s += coeffs_[k].get_d() * std::complex<double>(std::cos(th), std::sin(th));
  }
  return s;
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  long n = lcm_checked(a.order_, b.order_);
  auto x = a.embedded(n);
  auto y = b.embedded(n);
  for (long k = 0; k < n; ++k) x[k] += y[k];
  return make(n, std::move(x));
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic c = *this;
  for (auto& v : c.coeffs_) v = -v;
  return c;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  long n = lcm_checked(a.order_, b.order_);
  long fa = n / a.order_, fb = n / b.order_;
  std::vector<Rat> z(n, Rat(0));
  for (long i = 0; i < a.order_; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (long j = 0; j < b.order_; ++j) {
      if (b.coeffs_[j] == 0) continue;
      z[(i * fa + j * fb) % n] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return make(n, std::move(z));
}

Cyclotomic operator*(const Rat& s, const Cyclotomic& a) {
  if (s == 0) return Cyclotomic();
  Cyclotomic c = a;
  for (auto& v : c.coeffs_) v *= s;
  return c;
}

}  // namespace abelcs
