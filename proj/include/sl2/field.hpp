#pragma once

// Scalar fields for module carriers. A carrier always lives over the prime field of K
// (F_p or Q); elements are plain values and all arithmetic goes through the field object.

#include <boost/multiprecision/cpp_int.hpp>
#include <concepts>
#include <cstdint>
#include <string>

#include "sl2/error.hpp"
#include "sl2/field_spec.hpp"
#include "sl2/poly.hpp"

namespace sl2 {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

template <class F>
concept ScalarField = requires(const F& f, const typename F::Element& a, long long k, const BigInt& big) {
  { f.zero() } -> std::same_as<typename F::Element>;
  { f.one() } -> std::same_as<typename F::Element>;
  { f.add(a, a) } -> std::same_as<typename F::Element>;
  { f.sub(a, a) } -> std::same_as<typename F::Element>;
  { f.mul(a, a) } -> std::same_as<typename F::Element>;
  { f.neg(a) } -> std::same_as<typename F::Element>;
  { f.inv(a) } -> std::same_as<typename F::Element>;
  { f.from_int(k) } -> std::same_as<typename F::Element>;
  { f.from_bigint(big) } -> std::same_as<typename F::Element>;
  { f.is_zero(a) } -> std::same_as<bool>;
  { f.equal(a, a) } -> std::same_as<bool>;
  { f.characteristic() } -> std::same_as<std::uint64_t>;
  { f.to_string(a) } -> std::same_as<std::string>;
};

class PrimeField {
 public:
  using Element = std::uint64_t;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  }
  static PrimeField from_spec(const FieldSpec& spec) {
    if (spec.is_rational()) throw Error(Errc::FieldMismatch, "rational spec given to F_p carrier");
    return PrimeField(spec.characteristic());
  }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element add(Element a, Element b) const { return modp::add(a, b, p_); }
  Element sub(Element a, Element b) const { return modp::sub(a, b, p_); }
  Element mul(Element a, Element b) const { return modp::mul(a, b, p_); }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element inv(Element a) const { return modp::inv(a, p_); }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element from_int(long long v) const { return modp::reduce(v, p_); }
  Element from_bigint(const BigInt& v) const {
    BigInt r = v % p_;
    if (r < 0) r += p_;
    return static_cast<Element>(r);
  }
  bool is_zero(Element a) const { return a == 0; }
  bool equal(Element a, Element b) const { return a == b; }
  std::uint64_t characteristic() const { return p_; }
  std::string to_string(Element a) const { return std::to_string(a); }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_ = 3;
};

class RationalField {
 public:
  using Element = BigRational;

  static RationalField from_spec(const FieldSpec& spec) {
    if (!spec.is_rational()) throw Error(Errc::FieldMismatch, "F_p spec given to rational carrier");
    return {};
  }

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element neg(const Element& a) const { return -a; }
  Element inv(const Element& a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero rational");
    return Element(1) / a;
  }
  Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }
  Element from_int(long long v) const { return Element(v); }
  Element from_bigint(const BigInt& v) const { return Element(v); }
  bool is_zero(const Element& a) const { return a == 0; }
  bool equal(const Element& a, const Element& b) const { return a == b; }
  std::uint64_t characteristic() const { return 0; }
  std::string to_string(const Element& a) const {
    return boost::multiprecision::numerator(a).str() + "/" + boost::multiprecision::denominator(a).str();
  }

  bool operator==(const RationalField&) const { return true; }
};

static_assert(ScalarField<PrimeField>);
static_assert(ScalarField<RationalField>);

}  // namespace sl2
