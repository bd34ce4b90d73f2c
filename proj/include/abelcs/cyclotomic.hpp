#pragma once

#include "abelcs/scalar.hpp"

#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace abelcs {

namespace detail {

struct PrimePower {
  long p;
  int e;
  long q;  // p^e
};

std::vector<PrimePower> factor_small(long n);

long mod_inverse(long a, long m);

// Top base-p digit of the p-primary part of exponent k in Z/n.
inline long top_digit(long k, long n, const PrimePower& pp) {
  long cof = n / pp.q;
  long u = mod_inverse(cof % pp.q, pp.q);
  long c = static_cast<long>((static_cast<__int128>(k % pp.q) * u) % pp.q);
  return c / (pp.q / pp.p);
}

// Rewrites sum a[k] zeta_n^k in the Zumbroich basis of Q(zeta_n), in place.
// For odd p a basis exponent has nonzero top p-digit; for p = 2 it has top digit 0.
template <class T>
void zumbroich_reduce(std::vector<T>& a, long n) {
  for (const auto& pp : factor_small(n)) {
    long step = n / pp.p;
    long cof = n / pp.q;
    long u = mod_inverse(cof % pp.q, pp.q);
    long low = pp.q / pp.p;
    for (long k = 0; k < n; ++k) {
      if (a[k] == 0) continue;
      long c = static_cast<long>((static_cast<__int128>(k % pp.q) * u) % pp.q);
      long d = c / low;
      if (pp.p == 2) {
        if (d != 1) continue;
        T v = a[k];
        a[k] = 0;
        a[(k + step) % n] -= v;
      } else {
        if (d != 0) continue;
        T v = a[k];
        a[k] = 0;
        for (long t = 1; t < pp.p; ++t) a[(k + t * step) % n] -= v;
      }
    }
  }
}

inline bool exact_div(long long& x, long d) {
  if (x % d != 0) return false;
  x /= d;
  return true;
}

inline bool exact_div(Rat& x, long d) {
  x /= d;
  return true;
}

// If the reduced element a of Q(zeta_n) lies in Q(zeta_{n/p}), returns its reduced
// coordinates there.
template <class T>
std::optional<std::vector<T>> descend(const std::vector<T>& a, long n, long p) {
  long m = n / p;
  std::vector<T> y(m, T(0));
  if ((n / p) % p == 0) {
    for (long k = 0; k < n; k += p) y[k / p] += a[k];
  } else {
    long beta = m == 1 ? 0 : mod_inverse(p % m, m);
    for (long k = 0; k < n; ++k) {
      if (a[k] == 0) continue;
      long idx = m == 1 ? 0 : static_cast<long>((static_cast<__int128>(beta) * k) % m);
      if (k % p == 0)
        y[idx] += a[k] * T(p - 1);
      else
        y[idx] -= a[k];
    }
    for (auto& v : y)
      if (v != 0 && !exact_div(v, p - 1)) return std::nullopt;
  }
  zumbroich_reduce(y, m);
  std::vector<T> z(n, T(0));
  for (long k = 0; k < m; ++k)
    if (y[k] != 0) z[k * p] = y[k];
  zumbroich_reduce(z, n);
  if (z != a) return std::nullopt;
  return y;
}

// Descends a reduced element to its minimal conductor. Returns the new order.
template <class T>
long minimize_conductor(std::vector<T>& a, long n) {
  bool changed = true;
  while (changed && n > 1) {
    changed = false;
    for (const auto& pp : factor_small(n)) {
      if (auto y = descend(a, n, pp.p)) {
        a = std::move(*y);
        n /= pp.p;
        changed = true;
        break;
      }
    }
  }
  return n;
}

// Detects a = c * zeta_n^j (a reduced, n minimal). Returns (c, j).
template <class T>
std::optional<std::pair<T, long>> detect_monomial(const std::vector<T>& a, long n) {
  long k0 = -1;
  for (long k = 0; k < n; ++k)
    if (a[k] != 0) {
      k0 = k;
      break;
    }
  if (k0 < 0) return std::nullopt;
  auto primes = factor_small(n);
  std::size_t np = primes.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << np); ++mask) {
    long j = k0;
    bool ok = true;
    for (std::size_t b = 0; b < np; ++b) {
      if (!(mask >> b & 1)) continue;
      const auto& pp = primes[b];
      long step = n / pp.p;
      long d = top_digit(j, n, pp);
      if (pp.p == 2) {
        if (d != 0) { ok = false; break; }
        j = (j + step) % n;
      } else {
        if (d == 0) { ok = false; break; }
        j = ((j - d * step) % n + n) % n;
      }
    }
    if (!ok) continue;
    std::vector<T> e(n, T(0));
    e[j] = T(1);
    zumbroich_reduce(e, n);
    if (e[k0] == 0) continue;
    T c = a[k0];
    if (e[k0] != T(1)) c = -c;
    bool match = true;
    for (long k = 0; k < n && match; ++k) {
      T expect = e[k] * c;
      if (expect != a[k]) match = false;
    }
    if (match) return std::make_pair(c, j);
  }
  return std::nullopt;
}

}  // namespace detail

// Element of Q(zeta_n), stored by Zumbroich-basis coordinates at minimal conductor n.
class Cyclotomic {
 public:
  Cyclotomic() : order_(1), coeffs_(1, Rat(0)) {}
  explicit Cyclotomic(const Rat& r) : order_(1), coeffs_(1, r) {}

  // sum_k coeffs[k] zeta_order^k, any representation
  static Cyclotomic from_exponents(long order, std::vector<Rat> coeffs);
  static Cyclotomic root_of_unity(long order, long k);
  // sqrt(d) for a positive integer d, exact
  static Cyclotomic sqrt_of(const BigInt& d);

  long order() const { return order_; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const { return order_ == 1; }
  Rat rational_value() const { return coeffs_[0]; }

  // (c, t) with value c * e^{i pi t}, t in [0,2), when the element is a monomial.
  std::optional<std::pair<Rat, Rat>> as_monomial() const;

  // Coordinates embedded into Q(zeta_multiple), reduced there.
  std::vector<Rat> embedded(long multiple) const;

  Cyclotomic conj() const;
  std::complex<double> approx() const;

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Rat& s, const Cyclotomic& a);
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
  }
  Cyclotomic operator-() const;

 private:
  long order_;
  std::vector<Rat> coeffs_;
};

}  // namespace abelcs
