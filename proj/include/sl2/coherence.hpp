#pragma once

// Coherence degrees kappa, iota and the Casimir nilpotence height.

#include <optional>
#include <vector>

#include "sl2/error.hpp"
#include "sl2/identities.hpp"
#include "sl2/matrix.hpp"
#include "sl2/module.hpp"

namespace sl2 {

namespace detail {

/// True when every product over n K-basis x's, applied as step(M, j) from `start`, is zero.
/// Each slot of the product is additive in its scalar, so basis tuples suffice.
template <ScalarField F, class Step>
bool all_tuples_vanish(const Matrix<F>& start, unsigned e, unsigned n, Step step) {
  if (start.is_zero()) return true;
  if (n == 0) return false;
  for (unsigned j = 0; j < e; ++j)
    if (!all_tuples_vanish(step(start, j), e, n - 1, step)) return false;
  return true;
}

template <ScalarField F, class Holds>
unsigned least_degree(const SL2Module<F>& v, Holds holds) {
  const unsigned l = x_nilpotency(v);
  for (unsigned n = 1; n <= l; ++n)
    if (holds(n)) return n;
  throw Error(Errc::BoundViolated, "no coherence degree up to the nilpotency index of x");
}

}  // namespace detail

/// Least n with ker x^n <= ker x_{l1} ... x_{ln} for all scalars.
template <ScalarField F>
unsigned kappa(const SL2Module<F>& v) {
  return detail::least_degree(v, [&](unsigned n) {
    const auto k = kernel(v.X().pow(n)).basis_columns();
    return detail::all_tuples_vanish(k, v.degree(), n,
                                     [&](const Matrix<F>& m, unsigned j) { return v.X(j) * m; });
  });
}

/// Least n with im x_{l1} ... x_{ln} <= im x^n for all scalars.
template <ScalarField F>
unsigned iota(const SL2Module<F>& v) {
  return detail::least_degree(v, [&](unsigned n) {
    const auto q = image(v.X().pow(n)).quotient_map();
    return detail::all_tuples_vanish(q, v.degree(), n,
                                     [&](const Matrix<F>& m, unsigned j) { return m * v.X(j); });
  });
}

struct CoherenceVerdict {
  unsigned length = 0;  // u-length
  unsigned kappa = 0;
  unsigned iota = 0;
  bool applicable = false;  // the bound length - 1 is vacuous when length = 1
  bool holds() const { return !applicable || (kappa + 1 <= length && iota + 1 <= length); }
};

/// kappa(V), iota(V) <= length(V) - 1, for characteristic 0 or >= length + 1.
template <ScalarField F>
CoherenceVerdict check_coherence_bound(const SL2Module<F>& v) {
  const unsigned l = u_length(v);
  detail::require_char_at_least(v.spec(), l, "coherence bound");
  CoherenceVerdict out;
  out.length = l;
  out.kappa = kappa(v);
  out.iota = iota(v);
  out.applicable = l >= 2;
  return out;
}

struct CasimirHeight {
  std::optional<unsigned> height;  // least n >= 1 with L_n = 0
  unsigned lower_bound = 1;        // when height is absent: L_k != 0 for all k < lower_bound
  bool stabilized = false;         // L_{k+1} = L_k != 0 was reached, so the height is infinite
};

/// L_0 = span{c}, L_{k+1} = span{[G, M]}; stops after dim^2 steps or on stabilization.
template <ScalarField F>
CasimirHeight casimir_height_report(const SL2Module<F>& v) {
  const auto& f = v.field();
  const std::size_t d = v.dim();
  const std::size_t amb = d * d;
  auto flatten = [&](const Matrix<F>& m) {
    std::vector<typename F::Element> out;
    out.reserve(amb);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out.push_back(m(i, j));
    return out;
  };
  auto unflatten = [&](const std::vector<typename F::Element>& u) {
    Matrix<F> m(f, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = u[i * d + j];
    return m;
  };
  auto level = Subspace<F>::span(f, amb, {flatten(casimir(v))});
  const std::size_t cap = std::max<std::size_t>(amb, 1);
  for (unsigned k = 1; k <= cap; ++k) {
    std::vector<std::vector<typename F::Element>> next;
    for (std::size_t b = 0; b < level.dim(); ++b) {
      const auto m = unflatten(level.vector(b));
      for (const auto* g : v.generators()) next.push_back(flatten(commutator(*g, m)));
    }
    auto nl = Subspace<F>::span(f, amb, next);
    if (nl.is_zero()) return {k, k, false};
    if (nl == level) return {std::nullopt, k + 1, true};
    level = std::move(nl);
  }
  return {std::nullopt, static_cast<unsigned>(cap) + 1, false};
}

template <ScalarField F>
unsigned casimir_height(const SL2Module<F>& v) {
  const auto r = casimir_height_report(v);
  if (!r.height)
    throw Error(Errc::HeightUnboundedWithinCap,
                "iterated brackets with c stay nonzero for " + std::to_string(r.lower_bound - 1) + " steps");
  return *r.height;
}

}  // namespace sl2
