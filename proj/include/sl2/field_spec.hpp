#pragma once

// The coefficient field K of sl_2(K): the rationals, a prime field F_p, or F_{p^e} = F_p[t]/(f).
// Elements of F_{p^e} are coordinate vectors over the fixed basis 1, t, ..., t^{e-1}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sl2/error.hpp"
#include "sl2/poly.hpp"

namespace sl2 {

using ExtElement = std::vector<std::uint64_t>;

class FieldSpec {
 public:
  /// The rationals.
  FieldSpec() = default;

  /// Validating constructor. `modulus` lists e+1 coefficients, constant term first, leading 1.
  /// When e > 1 and no modulus is given, the least monic irreducible polynomial is taken, ordering
  /// candidates by the integer whose base-p digits are the coefficients below the leading one.
  static FieldSpec make(std::uint64_t p, unsigned e = 1, std::optional<Poly> modulus = std::nullopt) {
    FieldSpec f;
    if (p == 0) {
      if (e != 1) throw Error(Errc::Malformed, "the rationals admit no extension degree other than 1");
      if (modulus && !modulus->empty()) throw Error(Errc::Malformed, "modulus given for the rationals");
      return f;
    }
    if (p == 2) throw Error(Errc::CharTwoUnsupported, "characteristic 2 is not supported");
    if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (p >= (1ULL << 31)) throw Error(Errc::Malformed, "characteristic must be below 2^31");
    if (e == 0) throw Error(Errc::Malformed, "extension degree must be positive");
    f.p_ = p;
    f.e_ = e;
    if (e == 1) {
      if (modulus && poly::degree(*modulus) > 1) throw Error(Errc::Malformed, "modulus degree must equal e");
      f.modulus_ = Poly{0, 1};
      return f;
    }
    if (modulus) {
      Poly m = *modulus;
      for (auto c : m)
        if (c >= p) throw Error(Errc::Malformed, "modulus coefficients must lie in [0,p)");
      if (m.size() != e + 1 || m.back() != 1) throw Error(Errc::Malformed, "modulus must be monic of degree e");
      if (!poly::is_irreducible(m, p)) throw Error(Errc::ReducibleModulus, "modulus is reducible over F_p");
      f.modulus_ = m;
    } else {
      const std::uint64_t n = poly::count_monic(static_cast<int>(e), p);
      for (std::uint64_t code = 0; code < n; ++code) {
        Poly m = poly::monic_from_code(code, static_cast<int>(e), p);
        if (poly::is_irreducible(m, p)) {
          f.modulus_ = m;
          break;
        }
      }
    }
    return f;
  }

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  bool is_rational() const { return p_ == 0; }
  /// Modulus polynomial (t for a prime field, empty for Q).
  const Poly& modulus() const { return modulus_; }

  /// Number of elements of K; nullopt for Q or when it exceeds `cap`.
  std::optional<std::uint64_t> order(std::uint64_t cap = ~0ULL) const {
    if (p_ == 0) return std::nullopt;
    std::uint64_t q = 1;
    for (unsigned i = 0; i < e_; ++i) {
      if (q > cap / p_) return std::nullopt;
      q *= p_;
    }
    return q;
  }

  bool operator==(const FieldSpec& o) const { return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_; }

  std::string name() const {
    if (p_ == 0) return "Q";
    if (e_ == 1) return "F_" + std::to_string(p_);
    return "F_" + std::to_string(p_) + "^" + std::to_string(e_);
  }

  // --- arithmetic in K for p > 0 -------------------------------------------------------------

  ExtElement zero() const { return ExtElement(e_, 0); }
  ExtElement basis(unsigned j) const {
    ExtElement b(e_, 0);
    b[j] = 1;
    return b;
  }
  ExtElement from_int(long long v) const {
    ExtElement r = zero();
    if (p_ == 0) throw Error(Errc::CharZeroUnsupported, "extension arithmetic needs p > 0");
    r[0] = modp::reduce(v, p_);
    return r;
  }

  ExtElement add(const ExtElement& a, const ExtElement& b) const {
    ExtElement r(e_);
    for (unsigned i = 0; i < e_; ++i) r[i] = modp::add(a[i], b[i], p_);
    return r;
  }
  ExtElement sub(const ExtElement& a, const ExtElement& b) const {
    ExtElement r(e_);
    for (unsigned i = 0; i < e_; ++i) r[i] = modp::sub(a[i], b[i], p_);
    return r;
  }
  ExtElement mul(const ExtElement& a, const ExtElement& b) const {
    if (e_ == 1) return {modp::mul(a[0], b[0], p_)};
    Poly prod = poly::mod(poly::mul(a, b, p_), modulus_, p_);
    prod.resize(e_, 0);
    return prod;
  }
  ExtElement pow(ExtElement a, std::uint64_t k) const {
    ExtElement r = from_int(1);
    while (k > 0) {
      if (k & 1U) r = mul(r, a);
      a = mul(a, a);
      k >>= 1U;
    }
    return r;
  }
  /// a -> a^(p^k).
  ExtElement frobenius(const ExtElement& a, unsigned k = 1) const {
    ExtElement r = a;
    for (unsigned i = 0; i < k % e_; ++i) r = pow(r, p_);
    return r;
  }
  ExtElement inv(const ExtElement& a) const {
    if (is_zero(a)) throw Error(Errc::DivisionByZero, "inverse of zero in K");
    return pow(a, *order() - 2);
  }
  bool is_zero(const ExtElement& a) const {
    for (auto c : a)
      if (c != 0) return false;
    return true;
  }

  /// Coordinates of b_i * b_j where b_k = t^k; always {1} for Q.
  ExtElement basis_product(unsigned i, unsigned j) const {
    if (p_ == 0) return {1};
    return mul(basis(i), basis(j));
  }

  /// Matrix (over F_p, entries in [0,p)) of multiplication by `a` on coordinate columns.
  std::vector<std::vector<long long>> mult_matrix(const ExtElement& a) const {
    std::vector<std::vector<long long>> m(e_, std::vector<long long>(e_, 0));
    if (p_ == 0) {
      m[0][0] = 1;
      return m;
    }
    for (unsigned c = 0; c < e_; ++c) {
      const ExtElement col = mul(a, basis(c));
      for (unsigned r = 0; r < e_; ++r) m[r][c] = static_cast<long long>(col[r]);
    }
    return m;
  }

  /// Element with index `code` in the base-p enumeration of K (coordinate 0 varies fastest).
  ExtElement element(std::uint64_t code) const {
    ExtElement r(e_);
    for (unsigned i = 0; i < e_; ++i) {
      r[i] = code % p_;
      code /= p_;
    }
    return r;
  }

 private:
  std::uint64_t p_ = 0;
  unsigned e_ = 1;
  Poly modulus_{};
};

}  // namespace sl2
