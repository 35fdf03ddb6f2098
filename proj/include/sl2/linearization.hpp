#pragma once

// Recovering a K-vector-space structure on a g-module from the action of g alone,
// the kernel/image composition series, and the separation V = Ann_V(g) + g.V.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sl2/decomposition.hpp"
#include "sl2/error.hpp"
#include "sl2/identities.hpp"
#include "sl2/matrix.hpp"
#include "sl2/module.hpp"

namespace sl2 {

/// Multiplication by each K-basis element b_j on the carrier.
template <ScalarField F>
struct ScalarAction {
  FieldSpec spec;
  std::vector<Matrix<F>> S;

  Matrix<F> act(const ExtElement& lambda) const {
    Matrix<F> acc(S.front().field(), S.front().rows(), S.front().cols());
    for (std::size_t j = 0; j < lambda.size() && j < S.size(); ++j)
      if (lambda[j] != 0) acc += S[j].scaled(S[j].field().from_int(static_cast<long long>(lambda[j])));
    return acc;
  }
};

/// A K-structure together with a K-linear isomorphism from the model over K.
template <ScalarField F>
struct Linearization {
  ScalarAction<F> action;
  std::map<unsigned, std::size_t> multiplicities;  // k -> number of Sym^k Nat g summands over K
  ModuleMap<F> witness;                            // model over K -> module
};

/// d_i = (i-1)! (n-1)! / (n-i)!, i = 1..n.
inline std::vector<BigInt> d_coefficients(unsigned n) {
  if (n < 1) throw Error(Errc::HypothesisViolated, "n must be positive");
  std::vector<BigInt> d{1};
  for (unsigned i = 1; i < n; ++i) d.push_back(d.back() * i * (n - i));
  return d;
}

template <ScalarField F>
bool kernel_coherent(const SL2Module<F>& v) {
  const auto k = kernel(v.X()).basis_columns();
  for (unsigned j = 1; j < v.degree(); ++j)
    if (!(v.X(j) * k).is_zero()) return false;
  return true;
}

template <ScalarField F>
bool image_coherent(const SL2Module<F>& v) {
  const auto im = image(v.X());
  for (unsigned j = 1; j < v.degree(); ++j)
    if (!im.contains(image(v.X(j)))) return false;
  return true;
}

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(Errc::HypothesisViolated, what); }

/// Calls fn on every nonzero scalar of K when |K| <= cap, otherwise on the K-basis.
inline void for_each_scalar(const FieldSpec& spec, std::uint64_t cap, const std::function<void(const ExtElement&)>& fn) {
  const auto q = spec.is_rational() ? std::nullopt : spec.order(cap);
  if (q) {
    for (std::uint64_t code = 1; code < *q; ++code) fn(spec.element(code));
  } else {
    for (unsigned j = 0; j < spec.degree(); ++j) fn(k_basis(spec, j));
  }
}

/// Checks the K-vector-space axioms for S and the K-linearity of every generator.
template <ScalarField F>
void verify_scalar_action(const SL2Module<F>& v, const ScalarAction<F>& s) {
  const auto& spec = v.spec();
  const unsigned e = v.degree();
  if (s.S.size() != e) fail("scalar action has the wrong number of matrices");
  if (!(s.S[0] == Matrix<F>::identity(v.field(), v.dim()))) fail("multiplication by 1 is not the identity");
  for (unsigned i = 0; i < e; ++i)
    for (unsigned j = 0; j < e; ++j)
      if (!(s.S[i] * s.S[j] == s.act(k_mul(spec, k_basis(spec, i), k_basis(spec, j)))))
        fail("scalar action is not multiplicative");
  for (unsigned j = 0; j < e; ++j) {
    for (const auto* g : v.generators())
      if (!(*g * s.S[j] == s.S[j] * *g)) fail("a generator is not K-linear");
    if (!(v.H(j) == s.S[j] * v.H()) || !(v.X(j) == s.S[j] * v.X()) || !(v.Y(j) == s.S[j] * v.Y()))
      fail("g_lambda differs from lambda . g_1");
  }
}

/// Greedy K-basis of a K-stable subspace w: vectors whose S-orbits are independent.
template <ScalarField F>
std::vector<std::vector<typename F::Element>> k_basis_of(const ScalarAction<F>& s, const Subspace<F>& w) {
  IncrementalBasis<F> span(w.field(), w.ambient_dim());
  std::vector<std::vector<typename F::Element>> out;
  for (const auto& u : w.vectors()) {
    if (!span.insert(u)) continue;
    out.push_back(u);
    for (std::size_t c = 1; c < s.S.size(); ++c) span.insert(s.S[c].apply(u));
  }
  return out;
}

/// Witness columns for one Sym^k summand over K: t^c X^i Y^{k-i} -> S_c Y^{k-i} top * i!/k!.
template <ScalarField F>
void append_sym_columns(const SL2Module<F>& v, const ScalarAction<F>& s, unsigned k,
                        const std::vector<typename F::Element>& top,
                        std::vector<std::vector<typename F::Element>>& cols) {
  const F& f = v.field();
  const auto kinv = f.inv(factorial(f, k));
  std::vector<std::vector<typename F::Element>> chain(k + 1);
  chain[k] = top;
  for (unsigned i = k; i > 0; --i) chain[i - 1] = v.Y().apply(chain[i]);
  for (unsigned i = 0; i <= k; ++i) {
    auto base = chain[i];
    const auto sc = f.mul(factorial(f, i), kinv);
    for (auto& z : base) z = f.mul(z, sc);
    for (std::size_t c = 0; c < s.S.size(); ++c) cols.push_back(s.S[c].apply(base));
  }
}

template <ScalarField F>
SL2Module<F> k_model(const std::map<unsigned, std::size_t>& mult, const FieldSpec& spec) {
  std::vector<SL2Module<F>> parts;
  for (const auto& [k, count] : mult)
    for (std::size_t c = 0; c < count; ++c) parts.push_back(sym_power<F>(k, spec));
  return direct_sum<F>(parts, spec);
}

template <ScalarField F>
void check_kernel_image_uniform(const SL2Module<F>& v) {
  const auto k0 = kernel(v.X());
  const auto i0 = image(v.X());
  for_each_scalar(v.spec(), kExhaustiveFieldCap, [&](const ExtElement& lam) {
    const auto xl = v.act(Gen::X, lam);
    if (!(kernel(xl) == k0) || !(image(xl) == i0)) fail("ker x_lambda or im x_lambda differs from lambda = 1");
  });
}

}  // namespace detail

/// Builds the K-structure on a module whose restriction to g_1 is Sym^{n-1}-isotypic.
template <ScalarField F>
Linearization<F> linearize(const SL2Module<F>& v, unsigned n) {
  using Vec = std::vector<typename F::Element>;
  const auto& spec = v.spec();
  const auto& f = v.field();
  const std::uint64_t p = spec.characteristic();
  const std::size_t dim = v.dim();
  const unsigned e = v.degree();
  if (n < 1) detail::fail("n must be positive");
  if (p != 0 && p < n) detail::fail("linearization needs characteristic 0 or >= n");
  if (dim == 0) {
    const Matrix<F> empty(f, 0, 0);
    SL2Module<F> model(spec, 0, std::vector<GeneratorTriple<F>>(e, {empty, empty, empty}));
    return {{spec, std::vector<Matrix<F>>(e, empty)}, {}, {std::move(model), v, empty}};
  }
  if (n == 1) detail::fail("a nonzero module cannot be Sym^0-isotypic without trivial summands");
  if (!validate(v).ok()) detail::fail("generators violate the sl2 relations");

  ClassificationReport<F> base;
  try {
    base = classify(restrict_to_prime_field(v), n, Route::XOnly);
  } catch (const Error&) {
    detail::fail("restriction to g_1 is not a sum of Sym^" + std::to_string(n - 1));
  }
  if (base.ann_dim != 0 || base.multiplicities.size() != 1 || !base.multiplicities.count(n - 1))
    detail::fail("restriction to g_1 is not Sym^" + std::to_string(n - 1) + "-isotypic");

  // V = E_{n-1} + E_{n-3} + ... + E_{1-n}
  std::vector<Subspace<F>> es;
  std::vector<long long> labels;
  std::vector<Vec> cols;
  for (unsigned i = 1; i <= n; ++i) {
    const long long w = static_cast<long long>(n) + 1 - 2 * static_cast<long long>(i);
    labels.push_back(weight_label(w, p));
    es.push_back(weight_space(v, w));
    for (const auto& u : es.back().vectors()) cols.push_back(u);
  }
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b)
      if (labels[a] == labels[b]) detail::fail("weight labels collide modulo p");
  if (cols.size() != dim) detail::fail("weight spaces do not span");
  const auto basis = Matrix<F>::from_columns(f, cols, dim);
  const auto basis_inv = *inverse(basis);
  std::vector<Matrix<F>> proj;
  std::size_t off = 0;
  for (const auto& s : es) {
    Matrix<F> d(f, dim, dim);
    for (std::size_t t = 0; t < s.dim(); ++t) d(off + t, off + t) = f.one();
    off += s.dim();
    proj.push_back(basis * d * basis_inv);
  }

  const auto d = d_coefficients(n);
  std::vector<Matrix<F>> xp{Matrix<F>::identity(f, dim)}, yp{Matrix<F>::identity(f, dim)};
  for (unsigned i = 1; i < n; ++i) {
    xp.push_back(xp.back() * v.X());
    yp.push_back(yp.back() * v.Y());
  }
  ScalarAction<F> action{spec, {}};
  for (unsigned j = 0; j < e; ++j) {
    Matrix<F> s(f, dim, dim);
    for (unsigned i = 1; i <= n; ++i) {
      const auto denom = f.mul(f.from_int(static_cast<long long>(n) - 1), f.from_bigint(d[i - 1]));
      if (f.is_zero(denom)) throw Error(Errc::DivisionUnavailable, "(n-1) d_i is not invertible");
      s += (yp[i - 1] * v.H(j) * xp[i - 1] * proj[i - 1]).scaled(f.inv(denom));
    }
    action.S.push_back(std::move(s));
  }
  detail::verify_scalar_action(v, action);
  for (const auto& s : es)
    for (const auto& m : action.S)
      if (!s.contains(s.image_under(m))) detail::fail("scalar action does not preserve a weight space");
  detail::check_kernel_image_uniform(v);

  const auto tops = detail::k_basis_of(action, es.front());
  if (tops.size() * e * n != dim) detail::fail("K-dimension does not divide evenly");
  std::vector<Vec> wcols;
  for (const auto& t : tops) detail::append_sym_columns(v, action, n - 1, t, wcols);
  std::map<unsigned, std::size_t> mult{{n - 1, tops.size()}};
  ModuleMap<F> w{detail::k_model<F>(mult, spec), v, Matrix<F>::from_columns(f, wcols, dim)};
  if (!w.is_isomorphism()) detail::fail("K-linear witness does not verify");
  return {std::move(action), std::move(mult), std::move(w)};
}

template <ScalarField F>
struct SeriesStep {
  unsigned k = 0;             // the quotient is Sym^k Nat g-isotypic over K
  SL2Module<F> quotient;      // V_i / V_{i-1}
  Linearization<F> structure;
};

template <ScalarField F>
struct SeriesReport {
  std::vector<Subspace<F>> terms;  // ascending V_0 <= ... <= V_{n-1}
  std::vector<SeriesStep<F>> steps;  // steps[i] describes terms[i+1] / terms[i]
};

namespace detail {

template <ScalarField F>
bool large_characteristic(const SL2Module<F>& v, unsigned n) {
  const std::uint64_t p = v.spec().characteristic();
  return p == 0 || p >= 2 * static_cast<std::uint64_t>(n) + 1;
}

/// x^n = 0 with p = 0 or p >= 2n+1, or x^n = y^n = 0 with p >= n+1.
template <ScalarField F>
void require_length_alternatives(const SL2Module<F>& v, unsigned n) {
  const std::uint64_t p = v.spec().characteristic();
  if (!v.X().pow(n).is_zero()) fail("x^n is not zero");
  if (large_characteristic(v, n)) return;
  if (p < static_cast<std::uint64_t>(n) + 1) fail("characteristic below n+1");
  if (!v.Y().pow(n).is_zero()) fail("y^n is not zero and p < 2n+1");
}

template <ScalarField F>
Subspace<F> embed(const Subspace<F>& inner, const Subspace<F>& w) {
  std::vector<std::vector<typename F::Element>> vs;
  for (const auto& u : inner.vectors()) vs.push_back(w.combine(u));
  return Subspace<F>::span(w.field(), w.ambient_dim(), vs);
}

template <ScalarField F>
Subspace<F> preimage(const Subspace<F>& inner, const Subspace<F>& w) {
  std::vector<std::vector<typename F::Element>> vs = w.vectors();
  for (const auto& u : inner.vectors()) vs.push_back(lift_from_quotient(w, u));
  return Subspace<F>::span(w.field(), w.ambient_dim(), vs);
}

}  // namespace detail

/// (E_{n-2} + E_{n-4} + ...) + sum_i (E_{n+1-2i} cap ker x^{i-1}), for p = 0 or p >= 2n+1.
template <ScalarField F>
Subspace<F> kernel_series_term(const SL2Module<F>& v, unsigned n) {
  Subspace<F> out(v.field(), v.dim());
  const long long nn = n;
  for (long long i = 1; i <= nn - 1; ++i) out = out.sum(weight_space(v, nn - 2 * i));
  for (long long i = 1; i <= nn; ++i)
    out = out.sum(weight_space(v, nn + 1 - 2 * i).intersect(kernel(v.X().pow(static_cast<unsigned>(i - 1)))));
  return out;
}

/// sum_i (E_{n+1-2i} cap im x^{n-i}), for p = 0 or p >= 2n+1.
template <ScalarField F>
Subspace<F> image_series_term(const SL2Module<F>& v, unsigned n) {
  Subspace<F> out(v.field(), v.dim());
  const long long nn = n;
  for (long long i = 1; i <= nn; ++i)
    out = out.sum(weight_space(v, nn + 1 - 2 * i).intersect(image(v.X().pow(static_cast<unsigned>(nn - i)))));
  return out;
}

/// Ann_V(g) = V_0 <= ... <= V_{n-1} = V with V_k / V_{k-1} Sym^k-isotypic over K.
template <ScalarField F>
SeriesReport<F> series_ker(const SL2Module<F>& v, unsigned n) {
  if (n < 1) detail::fail("n must be positive");
  if (!validate(v).ok()) detail::fail("generators violate the sl2 relations");
  if (!kernel_coherent(v)) detail::fail("kernel coherence fails");
  detail::require_length_alternatives(v, n);
  if (n == 1) {
    if (!annihilator(v).is_full()) detail::fail("x = 0 but g does not act trivially");
    return {{Subspace<F>::full(v.field(), v.dim())}, {}};
  }
  Subspace<F> low = detail::large_characteristic(v, n) ? kernel_series_term(v, n)
                                                       : invariant_core(v, kernel(v.X().pow(n - 1)));
  if (!is_invariant(v, low)) detail::fail("kernel series term is not invariant");
  auto q = quotient(v, low);
  auto lin = linearize(q, n);
  auto inner = series_ker(restrict(v, low), n - 1);
  SeriesReport<F> out;
  for (const auto& t : inner.terms) out.terms.push_back(detail::embed(t, low));
  out.terms.push_back(Subspace<F>::full(v.field(), v.dim()));
  out.steps = std::move(inner.steps);
  out.steps.push_back({n - 1, std::move(q), std::move(lin)});
  return out;
}

/// 0 = V_0 <= ... <= V_{n-1} = g.V with V_k / V_{k-1} Sym^{n-k}-isotypic over K.
template <ScalarField F>
SeriesReport<F> series_im(const SL2Module<F>& v, unsigned n) {
  if (n < 1) detail::fail("n must be positive");
  if (!validate(v).ok()) detail::fail("generators violate the sl2 relations");
  if (!image_coherent(v)) detail::fail("image coherence fails");
  detail::require_length_alternatives(v, n);
  if (n == 1) {
    if (!g_dot_V(v).is_zero()) detail::fail("x = 0 but g does not act trivially");
    return {{Subspace<F>(v.field(), v.dim())}, {}};
  }
  std::vector<std::vector<typename F::Element>> seeds = image(v.X().pow(n - 1)).vectors();
  Subspace<F> high = detail::large_characteristic(v, n) ? image_series_term(v, n) : submodule_closure(v, seeds);
  if (!is_invariant(v, high)) detail::fail("image series term is not invariant");
  auto sub = restrict(v, high);
  auto lin = linearize(sub, n);
  auto inner = series_im(quotient(v, high), n - 1);
  SeriesReport<F> out;
  out.terms.push_back(Subspace<F>(v.field(), v.dim()));
  for (const auto& t : inner.terms) out.terms.push_back(detail::preimage(t, high));
  out.steps.push_back({n - 1, std::move(sub), std::move(lin)});
  for (auto& s : inner.steps) out.steps.push_back(std::move(s));
  return out;
}

template <ScalarField F>
struct Separation {
  Subspace<F> ann;
  Subspace<F> gv;
  SL2Module<F> gv_module;     // restrict(V, g.V)
  Linearization<F> structure;  // on gv_module
};

/// V = Ann_V(g) + g.V with a single K-structure on g.V.
template <ScalarField F>
Separation<F> separate(const SL2Module<F>& v, unsigned n) {
  using Vec = std::vector<typename F::Element>;
  if (n < 1) detail::fail("n must be positive");
  if (!validate(v).ok()) detail::fail("generators violate the sl2 relations");
  if (!kernel_coherent(v)) detail::fail("kernel coherence fails");
  if (!image_coherent(v)) detail::fail("image coherence fails");
  detail::require_length_alternatives(v, n);
  const auto& f = v.field();
  auto ann = annihilator(v);
  auto gv = g_dot_V(v);
  if (!ann.intersect(gv).is_zero() || ann.dim() + gv.dim() != v.dim())
    throw Error(Errc::NotDirect, "Ann_V(g) and g.V do not split V");
  auto w = restrict(v, gv);
  const std::size_t dim = w.dim();

  ClassificationReport<F> base;
  try {
    base = classify(restrict_to_prime_field(w), n, Route::XOnly);
  } catch (const Error&) {
    detail::fail("g.V does not decompose over g_1");
  }
  if (base.ann_dim != 0) throw Error(Errc::NotDirect, "g.V has trivial g_1-summands");

  // g_1-isotypic pieces, read off the witness columns.
  std::vector<Vec> basis_cols;
  std::vector<Vec> w_cols;
  std::map<unsigned, std::size_t> mult;
  std::vector<std::vector<Vec>> image_cols(v.degree());
  std::size_t col = 0;
  for (const auto& [k, count] : base.multiplicities) {
    std::vector<Vec> piece;
    for (std::size_t c = 0; c < count * (k + 1); ++c) piece.push_back(base.witness.matrix.column(col++));
    const auto space = Subspace<F>::span(f, dim, piece);
    auto sub = restrict(w, space);
    auto lin = linearize(sub, k + 1);
    mult[k] = lin.multiplicities.at(k);
    for (std::size_t b = 0; b < space.dim(); ++b) {
      basis_cols.push_back(space.vector(b));
      for (unsigned j = 0; j < v.degree(); ++j) image_cols[j].push_back(space.combine(lin.action.S[j].column(b)));
    }
    for (std::size_t c = 0; c < lin.witness.matrix.cols(); ++c)
      w_cols.push_back(space.combine(lin.witness.matrix.column(c)));
  }
  const auto b = Matrix<F>::from_columns(f, basis_cols, dim);
  const auto binv = inverse(b);
  if (!binv) throw Error(Errc::NotDirect, "isotypic pieces do not span g.V");
  ScalarAction<F> action{v.spec(), {}};
  for (unsigned j = 0; j < v.degree(); ++j)
    action.S.push_back(Matrix<F>::from_columns(f, image_cols[j], dim) * *binv);
  detail::verify_scalar_action(w, action);
  ModuleMap<F> wit{detail::k_model<F>(mult, v.spec()), w, Matrix<F>::from_columns(f, w_cols, dim)};
  if (!wit.is_isomorphism()) detail::fail("K-linear witness on g.V does not verify");
  return {std::move(ann), std::move(gv), std::move(w), {std::move(action), std::move(mult), std::move(wit)}};
}

}  // namespace sl2
