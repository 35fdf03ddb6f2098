#pragma once

// Dense univariate polynomials over F_p, coefficients stored constant term first.

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "sl2/error.hpp"

namespace sl2 {

using Poly = std::vector<std::uint64_t>;

namespace modp {

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return (a * b) % p; }

inline std::uint64_t pow(std::uint64_t a, std::uint64_t k, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (k > 0) {
    if (k & 1U) r = mul(r, a, p);
    a = mul(a, a, p);
    k >>= 1U;
  }
  return r;
}

inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw Error(Errc::DivisionByZero, "inverse of zero mod p");
  // extended Euclid on signed values
  std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a % p);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  std::int64_t res = s0 % static_cast<std::int64_t>(p);
  if (res < 0) res += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(res);
}

inline std::uint64_t reduce(long long v, std::uint64_t p) {
  const long long m = static_cast<long long>(p);
  long long r = v % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace modp

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace poly {

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

/// Degree; -1 for the zero polynomial.
inline int degree(const Poly& f) {
  for (std::size_t i = f.size(); i > 0; --i)
    if (f[i - 1] != 0) return static_cast<int>(i) - 1;
  return -1;
}

inline bool is_zero(const Poly& f) { return degree(f) < 0; }

inline Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = modp::add(r[i], b[i], p);
  trim(r);
  return r;
}

inline Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = modp::sub(r[i], b[i], p);
  trim(r);
  return r;
}

inline Poly scale(const Poly& a, std::uint64_t c, std::uint64_t p) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = modp::mul(a[i], c, p);
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (is_zero(a) || is_zero(b)) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = modp::add(r[i + j], modp::mul(a[i], b[j], p), p);
  }
  trim(r);
  return r;
}

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint64_t p) {
  const int db = degree(b);
  if (db < 0) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  Poly r = a;
  trim(r);
  const int da = degree(r);
  if (da < db) return {Poly{}, r};
  Poly q(static_cast<std::size_t>(da - db + 1), 0);
  const std::uint64_t lead_inv = modp::inv(b[static_cast<std::size_t>(db)], p);
  for (int k = da; k >= db; --k) {
    const std::uint64_t c = modp::mul(r[static_cast<std::size_t>(k)], lead_inv, p);
    if (c == 0) continue;
    q[static_cast<std::size_t>(k - db)] = c;
    for (int i = 0; i <= db; ++i) {
      auto& slot = r[static_cast<std::size_t>(k - db + i)];
      slot = modp::sub(slot, modp::mul(c, b[static_cast<std::size_t>(i)], p), p);
    }
  }
  trim(q);
  trim(r);
  return {q, r};
}

inline Poly mod(const Poly& a, const Poly& b, std::uint64_t p) { return divmod(a, b, p).second; }

inline Poly monic(const Poly& a, std::uint64_t p) {
  const int d = degree(a);
  if (d < 0) return {};
  return scale(a, modp::inv(a[static_cast<std::size_t>(d)], p), p);
}

/// Monic gcd (zero if both are zero).
inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!is_zero(b)) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

inline std::uint64_t eval(const Poly& f, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (std::size_t i = f.size(); i > 0; --i) acc = modp::add(modp::mul(acc, x, p), f[i - 1], p);
  return acc;
}

/// Monic polynomial of the given degree whose lower coefficients are the base-p digits of `code`.
inline Poly monic_from_code(std::uint64_t code, int deg, std::uint64_t p) {
  Poly f(static_cast<std::size_t>(deg) + 1, 0);
  for (int i = 0; i < deg; ++i) {
    f[static_cast<std::size_t>(i)] = code % p;
    code /= p;
  }
  f[static_cast<std::size_t>(deg)] = 1;
  return f;
}

inline std::uint64_t count_monic(int deg, std::uint64_t p) {
  std::uint64_t n = 1;
  for (int i = 0; i < deg; ++i) n *= p;
  return n;
}

/// Irreducibility over F_p by trial division against every monic divisor of degree <= deg/2.
inline bool is_irreducible(const Poly& f_in, std::uint64_t p) {
  Poly f = f_in;
  for (auto& c : f) c %= p;
  trim(f);
  const int d = degree(f);
  if (d < 1) return false;
  for (int k = 1; 2 * k <= d; ++k) {
    const std::uint64_t n = count_monic(k, p);
    for (std::uint64_t code = 0; code < n; ++code) {
      if (is_zero(mod(f, monic_from_code(code, k, p), p))) return false;
    }
  }
  return true;
}

}  // namespace poly
}  // namespace sl2
