#pragma once

// Enveloping-ring identities checked as End(V) identities, and the u-length results.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sl2/error.hpp"
#include "sl2/matrix.hpp"
#include "sl2/module.hpp"

namespace sl2 {

/// Coordinates of a*b in K; for Q every K-basis product is 1.
inline ExtElement k_mul(const FieldSpec& spec, const ExtElement& a, const ExtElement& b) {
  if (spec.is_rational()) return {1};
  return spec.mul(a, b);
}

inline ExtElement k_basis(const FieldSpec& spec, unsigned j) {
  if (spec.is_rational()) return {1};
  return spec.basis(j);
}

struct IdentityRecord {
  std::string identity;  // "1" .. "6"
  unsigned i = 0;
  unsigned j = 0;
  std::vector<unsigned> lambdas;  // K-basis indices of the x factors, for (5) and (6)
  int mu = -1;                    // K-basis index of mu, for (4), (5), (6)
  bool pass = false;
};

/// Every tuple in {0..e-1}^len, first slot most significant.
inline std::vector<std::vector<unsigned>> basis_tuples(unsigned e, unsigned len) {
  std::vector<std::vector<unsigned>> out{{}};
  for (unsigned s = 0; s < len; ++s) {
    std::vector<std::vector<unsigned>> next;
    for (const auto& t : out)
      for (unsigned j = 0; j < e; ++j) {
        auto u = t;
        u.push_back(j);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

namespace detail {

inline long long binom(unsigned n, unsigned k) {
  if (k > n) return 0;
  long long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Products of commuting x_{b_j}'s, memoized by sorted index multiset.
template <ScalarField F>
class XProducts {
 public:
  explicit XProducts(const SL2Module<F>& v) : v_(v) {}
  const Matrix<F>& get(std::vector<unsigned> idx) {
    std::sort(idx.begin(), idx.end());
    auto it = cache_.find(idx);
    if (it != cache_.end()) return it->second;
    Matrix<F> m = Matrix<F>::identity(v_.field(), v_.dim());
    if (!idx.empty()) {
      const unsigned last = idx.back();
      auto rest = idx;
      rest.pop_back();
      m = get(rest) * v_.X(last);
    }
    return cache_.emplace(idx, std::move(m)).first->second;
  }

 private:
  const SL2Module<F>& v_;
  std::map<std::vector<unsigned>, Matrix<F>> cache_;
};

}  // namespace detail

/// Checks identities (1)-(6) for 1 <= i <= i_max and 1 <= j <= j_max over all K-basis tuples.
template <ScalarField F>
std::vector<IdentityRecord> verify_identities(const SL2Module<F>& v, unsigned i_max, unsigned j_max) {
  using Mat = Matrix<F>;
  const F& f = v.field();
  const std::size_t d = v.dim();
  const unsigned e = v.degree();
  const FieldSpec& spec = v.spec();
  const Mat I = Mat::identity(f, d);
  const Mat &h = v.H(), &x = v.X(), &y = v.Y();
  auto shift = [&](long long c) { return h + Mat::scalar(f, d, f.from_int(c)); };
  std::vector<Mat> xp{I}, yp{I};
  for (unsigned k = 1; k <= std::max(i_max, j_max); ++k) {
    xp.push_back(xp.back() * x);
    yp.push_back(yp.back() * y);
  }
  std::vector<IdentityRecord> out;

  for (unsigned i = 1; i <= i_max; ++i) {
    const Mat rhs = y * xp[i] + (shift(1 - static_cast<long long>(i)) * xp[i - 1]).scaled(static_cast<long long>(i));
    out.push_back({"1", i, 0, {}, -1, xp[i] * y == rhs});
  }
  for (unsigned j = 1; j <= j_max; ++j) {
    const Mat rhs = x * yp[j] - (shift(static_cast<long long>(j) - 1) * yp[j - 1]).scaled(static_cast<long long>(j));
    out.push_back({"2", 0, j, {}, -1, yp[j] * x == rhs});
  }
  for (unsigned i = 1; i <= i_max; ++i)
    for (unsigned j = 1; j <= j_max; ++j) {
      Mat forward(f, d, d), backward(f, d, d);
      for (unsigned k = 0; k <= std::min(i, j); ++k) {
        long long c = detail::binom(i, k) * detail::binom(j, k);
        for (unsigned t = 2; t <= k; ++t) c *= t;
        if (k % 2) c = -c;
        const long long base = static_cast<long long>(j) - static_cast<long long>(i);
        Mat left = I, right = I;
        for (unsigned l = 0; l < k; ++l) left = left * shift(base + l);
        for (unsigned l = k; l > 0; --l) right = right * shift(base + l - 1);
        const Mat tail = xp[i - k] * yp[j - k];
        forward += (left * tail).scaled(c);
        backward += (right * tail).scaled(c);
      }
      const Mat lhs = yp[j] * xp[i];
      out.push_back({"3", i, j, {}, -1, lhs == forward && lhs == backward});
    }
  for (unsigned mu = 0; mu < e; ++mu)
    for (unsigned i = 1; i <= i_max; ++i) {
      const Mat rhs = v.H(mu) * xp[i] - (v.X(mu) * xp[i - 1]).scaled(2 * static_cast<long long>(i));
      out.push_back({"4", i, 0, {}, static_cast<int>(mu), xp[i] * v.H(mu) == rhs});
    }

  detail::XProducts<F> prod(v);
  for (unsigned i = 1; i <= i_max; ++i)
    for (const auto& lam : basis_tuples(e, i))
      for (unsigned mu = 0; mu < e; ++mu) {
        const Mat& P = prod.get(lam);
        const Mat& Ymu = v.Y(mu);
        Mat hs5(f, d, d), hs6(f, d, d), xs5(f, d, d), xs6(f, d, d);
        for (unsigned k = 0; k < i; ++k) {
          auto rest = lam;
          rest.erase(rest.begin() + k);
          const ExtElement ml = k_mul(spec, k_basis(spec, mu), k_basis(spec, lam[k]));
          const Mat hm = v.act(Gen::H, ml);
          const Mat& Pk = prod.get(rest);
          hs5 += hm * Pk;
          hs6 += Pk * hm;
          for (unsigned l = 0; l < i; ++l) {
            if (l == k) continue;
            auto rest2 = lam;
            rest2.erase(rest2.begin() + std::max(k, l));
            rest2.erase(rest2.begin() + std::min(k, l));
            const Mat xm = v.act(Gen::X, k_mul(spec, ml, k_basis(spec, lam[l])));
            const Mat& Pkl = prod.get(rest2);
            xs5 += xm * Pkl;
            xs6 += Pkl * xm;
          }
        }
        out.push_back({"5", i, 0, lam, static_cast<int>(mu), P * Ymu == Ymu * P + hs5 - xs5});
        out.push_back({"6", i, 0, lam, static_cast<int>(mu), Ymu * P == P * Ymu - hs6 - xs6});
      }
  return out;
}

inline std::vector<IdentityRecord> identity_failures(const std::vector<IdentityRecord>& records) {
  std::vector<IdentityRecord> bad;
  for (const auto& r : records)
    if (!r.pass) bad.push_back(r);
  return bad;
}

/// u^n . V as a subspace, via u^n V = sum_j x_{b_j} (u^{n-1} V).
template <ScalarField F>
Subspace<F> u_power_image(const SL2Module<F>& v, unsigned n) {
  Subspace<F> cur = Subspace<F>::full(v.field(), v.dim());
  for (unsigned s = 0; s < n && !cur.is_zero(); ++s) {
    Subspace<F> next(v.field(), v.dim());
    for (unsigned j = 0; j < v.degree(); ++j) next = next.sum(cur.image_under(v.X(j)));
    cur = std::move(next);
  }
  return cur;
}

/// Least n >= 1 with X_0^n = 0.
template <ScalarField F>
unsigned x_nilpotency(const SL2Module<F>& v) {
  Matrix<F> p = v.X();
  for (unsigned n = 1; n <= v.dim() + 1; ++n) {
    if (p.is_zero()) return n;
    p = p * v.X();
  }
  throw Error(Errc::Unbounded, "x is not nilpotent");
}

/// Least n >= 1 with u^n V = 0.
template <ScalarField F>
unsigned u_length(const SL2Module<F>& v) {
  x_nilpotency(v);
  Subspace<F> cur = Subspace<F>::full(v.field(), v.dim());
  for (unsigned n = 1; n <= v.dim() + 1; ++n) {
    Subspace<F> next(v.field(), v.dim());
    for (unsigned j = 0; j < v.degree(); ++j) next = next.sum(cur.image_under(v.X(j)));
    if (next.is_zero()) return n;
    cur = std::move(next);
  }
  throw Error(Errc::Unbounded, "u does not act nilpotently");
}

struct Verdict {
  bool hypothesis = false;
  bool conclusion = false;
  bool respected() const { return !hypothesis || conclusion; }
};

inline constexpr std::uint64_t kExhaustiveFieldCap = 729;  // 3^6

namespace detail {
inline void require_char_at_least(const FieldSpec& spec, unsigned n, const char* what) {
  const auto p = spec.characteristic();
  if (p != 0 && p < n + 1)
    throw Error(Errc::CharTooSmall, std::string(what) + " needs characteristic 0 or >= n+1");
}
}  // namespace detail

/// Hypothesis: x_lambda^n = 0 for every lambda in K (exhaustive); conclusion: u^n V = 0.
template <ScalarField F>
Verdict check_uniform_length_bound(const SL2Module<F>& v, unsigned n, std::uint64_t cap = kExhaustiveFieldCap) {
  detail::require_char_at_least(v.spec(), n, "length bound from x_lambda^n = 0");
  Verdict out;
  if (v.spec().is_rational()) {
    // x_lambda = lambda x over Q
    out.hypothesis = v.X().pow(n).is_zero();
  } else {
    const auto q = v.spec().order(cap);
    if (!q) throw Error(Errc::FieldTooLargeForExhaustiveCheck, "K has more than " + std::to_string(cap) + " elements");
    out.hypothesis = true;
    for (std::uint64_t code = 1; code < *q && out.hypothesis; ++code)
      out.hypothesis = v.act(Gen::X, v.spec().element(code)).pow(n).is_zero();
  }
  out.conclusion = u_power_image(v, n).is_zero();
  return out;
}

/// Hypothesis: x^n = 0; conclusion: u^n V = 0.
template <ScalarField F>
Verdict check_length_bound(const SL2Module<F>& v, unsigned n) {
  detail::require_char_at_least(v.spec(), n, "length bound from x^n = 0");
  Verdict out;
  out.hypothesis = v.X().pow(n).is_zero();
  out.conclusion = u_power_image(v, n).is_zero();
  return out;
}

}  // namespace sl2
