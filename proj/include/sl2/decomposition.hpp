#pragma once

// Classification of g_1-modules into trivial and Sym^k Nat summands, and the
// analysis of the two-row modules S_{alpha,beta} of the window n < p < 2n.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sl2/canonical_form.hpp"
#include "sl2/error.hpp"
#include "sl2/matrix.hpp"
#include "sl2/module.hpp"
#include "sl2/poly.hpp"

namespace sl2 {

enum class Route { Auto, LargeChar, TwoSided, Char3, XOnly };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::Auto: return "auto";
    case Route::LargeChar: return "large-char";
    case Route::TwoSided: return "two-sided";
    case Route::Char3: return "char3";
    case Route::XOnly: return "x-only";
  }
  return "?";
}

inline std::optional<Route> parse_route(const std::string& s) {
  for (Route r : {Route::Auto, Route::LargeChar, Route::TwoSided, Route::Char3, Route::XOnly})
    if (s == route_name(r)) return r;
  return std::nullopt;
}

template <ScalarField F>
struct ClassificationReport {
  std::size_t ann_dim = 0;
  std::map<unsigned, std::size_t> multiplicities;  // k -> I_k, only k >= 1 with I_k > 0
  ModuleMap<F> witness;  // model -> V
  Route route = Route::Auto;
};

/// direct_sum(trivial^ann, Sym^k x I_k for k ascending).
template <ScalarField F>
SL2Module<F> classification_model(std::size_t ann, const std::map<unsigned, std::size_t>& mult,
                                  const FieldSpec& spec) {
  std::vector<SL2Module<F>> parts;
  if (ann > 0) parts.push_back(trivial<F>(ann, spec));
  for (const auto& [k, count] : mult)
    for (std::size_t c = 0; c < count; ++c) parts.push_back(sym_power<F>(k, spec));
  return direct_sum<F>(parts, spec);
}

/// (h - n + 1)(h - n + 2) ... (h + n - 1) = 0.
template <ScalarField F>
bool h_polynomial_check(const SL2Module<F>& v, unsigned n) {
  const auto& f = v.field();
  auto acc = Matrix<F>::identity(f, v.dim());
  for (long long l = 1 - static_cast<long long>(n); l <= static_cast<long long>(n) - 1; ++l)
    acc = acc * (v.H() - Matrix<F>::scalar(f, v.dim(), f.from_int(l)));
  return acc.is_zero();
}

template <ScalarField F>
struct CasimirSplit {
  Subspace<F> bottom;       // im(c - n^2 + 1)
  Subspace<F> top;          // ker(c - n^2 + 1)
  Subspace<F> bottom_sq;    // im(c - n^2 + 1)^2
  Subspace<F> top_sq;       // ker(c - n^2 + 1)^2
};

template <ScalarField F>
CasimirSplit<F> casimir_split(const SL2Module<F>& v, unsigned n) {
  const auto& f = v.field();
  const long long nn = n;
  const auto c = casimir(v) - Matrix<F>::scalar(f, v.dim(), f.from_int(nn * nn - 1));
  const auto c2 = c * c;
  return {image(c), kernel(c), image(c2), kernel(c2)};
}

namespace detail {

template <ScalarField F>
Route choose_route(const SL2Module<F>& v, unsigned n, Route route) {
  const std::uint64_t p = v.spec().characteristic();
  const bool large = p == 0 || p >= 2 * static_cast<std::uint64_t>(n) + 1;
  const bool y_nil = v.Y().pow(n).is_zero();
  const bool two_sided = (p == 0 || n < p) && y_nil;
  const bool char3 = p == 3 && n == 2 && y_nil;
  switch (route) {
    case Route::Auto:
      if (large) return Route::LargeChar;
      if (char3) return Route::Char3;
      if (two_sided) return Route::TwoSided;
      throw Error(Errc::HypothesisViolated,
                  "no route applies: need p = 0 or p >= 2n+1, or y^n = 0 with n < p");
    case Route::LargeChar:
      if (!large) throw Error(Errc::HypothesisViolated, "large-char route needs p = 0 or p >= 2n+1");
      return route;
    case Route::TwoSided:
      if (!(p == 0 || n < p)) throw Error(Errc::HypothesisViolated, "two-sided route needs n < p");
      if (!y_nil) throw Error(Errc::HypothesisViolated, "two-sided route needs y^n = 0");
      return route;
    case Route::Char3:
      if (p != 3 || n != 2) throw Error(Errc::HypothesisViolated, "char3 route needs p = 3 and n = 2");
      if (!y_nil) throw Error(Errc::HypothesisViolated, "char3 route needs y^2 = 0");
      return route;
    case Route::XOnly:
      return route;
  }
  return route;
}

}  // namespace detail

/// Decomposes a g_1-module with x^n = 0 and builds a verified isomorphism from the model.
template <ScalarField F>
ClassificationReport<F> classify(const SL2Module<F>& v, unsigned n, Route route = Route::Auto) {
  using Vec = std::vector<typename F::Element>;
  if (v.degree() != 1) throw Error(Errc::HypothesisViolated, "classification needs a module over the prime field");
  if (n < 1) throw Error(Errc::HypothesisViolated, "n must be positive");
  if (!validate(v).ok()) throw Error(Errc::HypothesisViolated, "generators violate the sl2 relations");
  if (!v.X().pow(n).is_zero()) throw Error(Errc::HypothesisViolated, "x^n is not zero");
  const Route used = detail::choose_route(v, n, route);
  const auto& f = v.field();
  const std::size_t dim = v.dim();

  std::vector<std::size_t> r(n + 2, 0);
  r[0] = dim;
  Matrix<F> xp = Matrix<F>::identity(f, dim);
  std::vector<Matrix<F>> xpow{xp};
  for (unsigned k = 1; k <= n + 1; ++k) {
    xp = xp * v.X();
    xpow.push_back(xp);
    r[k] = rank(xp);
  }
  std::map<unsigned, std::size_t> mult;
  std::size_t used_dim = 0;
  for (unsigned k = 1; k + 1 <= n; ++k) {
    const long long ik = static_cast<long long>(r[k]) - 2 * static_cast<long long>(r[k + 1]) +
                         static_cast<long long>(r[k + 2]);
    if (ik < 0) throw Error(Errc::WitnessConstructionFailed, "negative Jordan count");
    if (ik > 0) mult[k] = static_cast<std::size_t>(ik);
    used_dim += static_cast<std::size_t>(ik) * (k + 1);
  }
  if (used_dim > dim) throw Error(Errc::WitnessConstructionFailed, "Jordan profile exceeds dimension");
  const std::size_t ann = dim - used_dim;
  const auto ann_space = annihilator(v);
  if (ann_space.dim() != ann)
    throw Error(Errc::WitnessConstructionFailed, "annihilator has dimension " + std::to_string(ann_space.dim()) +
                                                     ", Jordan profile predicts " + std::to_string(ann));

  std::vector<Vec> cols = ann_space.vectors();
  const auto ker_x = kernel(v.X());
  for (const auto& [k, count] : mult) {
    const auto ek = weight_space(v, static_cast<long long>(k));
    const auto a = ker_x.intersect(image(xpow[k])).intersect(ek);
    const auto b = ker_x.intersect(image(xpow[k + 1])).intersect(ek);
    IncrementalBasis<F> grow(f, dim);
    for (const auto& u : b.vectors()) grow.insert(u);
    std::vector<Vec> tops;
    for (const auto& u : a.vectors())
      if (grow.insert(u)) tops.push_back(u);
    if (tops.size() != count)
      throw Error(Errc::WitnessConstructionFailed, "found " + std::to_string(tops.size()) +
                                                       " highest-weight vectors of weight " + std::to_string(k) +
                                                       ", expected " + std::to_string(count));
    const auto kfact_inv = f.inv(detail::factorial(f, k));
    for (const auto& top : tops) {
      std::vector<Vec> chain(k + 1);
      chain[k] = top;
      for (unsigned i = k; i > 0; --i) chain[i - 1] = v.Y().apply(chain[i]);
      for (unsigned i = 0; i <= k; ++i) {
        Vec c = chain[i];
        const auto s = f.mul(detail::factorial(f, i), kfact_inv);
        for (auto& z : c) z = f.mul(z, s);
        cols.push_back(std::move(c));
      }
    }
  }
  auto model = classification_model<F>(ann, mult, v.spec());
  ModuleMap<F> w{std::move(model), v, Matrix<F>::from_columns(f, cols, dim)};
  if (!w.is_isomorphism()) throw Error(Errc::WitnessConstructionFailed, "constructed map is not an isomorphism");
  return {ann, std::move(mult), std::move(w), used};
}

template <ScalarField F>
ClassificationReport<F> classify_quadratic_char3(const SL2Module<F>& v) {
  if (v.spec().characteristic() != 3) throw Error(Errc::HypothesisViolated, "needs characteristic 3");
  if (!v.X().pow(2).is_zero() || !v.Y().pow(2).is_zero())
    throw Error(Errc::HypothesisViolated, "needs x^2 = y^2 = 0");
  return classify(v, 2, Route::Char3);
}

struct SabReport {
  unsigned n = 0;
  unsigned m = 0;
  std::uint64_t p = 0;
  Matrix<PrimeField> alpha;  // dim V2 x dim V1
  Matrix<PrimeField> beta;   // dim V1 x dim V2
  Poly beta_alpha_charpoly;  // constant term first
  bool simple = false;
  std::optional<Subspace<PrimeField>> proper_submodule;  // in the coordinates of the input, when not simple
  ModuleMap<PrimeField> witness;                         // s_alpha_beta(n, p, alpha, beta) -> V
};

/// The simplicity criterion: alpha, beta invertible and charpoly(beta alpha) irreducible.
inline bool sab_criterion(const Matrix<PrimeField>& alpha, const Matrix<PrimeField>& beta) {
  if (!alpha.is_square() || !beta.is_square() || alpha.rows() == 0) return false;
  if (!is_invertible(alpha) || !is_invertible(beta)) return false;
  return poly::is_irreducible(char_poly(beta * alpha), alpha.field().characteristic());
}

/// Smallest-degree monic irreducible factor of f (deg f >= 1).
inline Poly smallest_irreducible_factor(const Poly& f, std::uint64_t p) {
  const int d = poly::degree(f);
  for (int k = 1; 2 * k <= d; ++k)
    for (std::uint64_t code = 0; code < poly::count_monic(k, p); ++code) {
      const Poly g = poly::monic_from_code(code, k, p);
      if (poly::is_zero(poly::mod(f, g, p)) && poly::is_irreducible(g, p)) return g;
    }
  return poly::monic(f, p);
}

namespace detail {

inline Matrix<PrimeField> coordinate_matrix(const SL2Module<PrimeField>& v, const Matrix<PrimeField>& op,
                                            const Subspace<PrimeField>& from, const Subspace<PrimeField>& to,
                                            std::uint64_t scale_inv) {
  const auto& f = v.field();
  Matrix<PrimeField> out(f, to.dim(), from.dim());
  for (std::size_t c = 0; c < from.dim(); ++c) {
    const auto img = op.apply(from.vector(c));
    if (!to.contains(img)) throw Error(Errc::NotAnSab, "y-power leaves the expected weight space");
    const auto co = to.coordinates(img);
    for (std::size_t r = 0; r < to.dim(); ++r) out(r, c) = f.mul(co[r], scale_inv);
  }
  return out;
}

}  // namespace detail

/// Reads off alpha and beta from a module in the window n < p < 2n and re-synthesizes it.
inline SabReport extract_alpha_beta(const SL2Module<PrimeField>& v, unsigned n) {
  using Vec = std::vector<std::uint64_t>;
  const std::uint64_t p = v.spec().characteristic();
  if (v.degree() != 1) throw Error(Errc::HypothesisViolated, "needs a module over the prime field");
  if (n < 2 || !(n < p && p < 2 * static_cast<std::uint64_t>(n)))
    throw Error(Errc::HypothesisViolated, "needs n < p < 2n");
  if (!validate(v).ok()) throw Error(Errc::HypothesisViolated, "generators violate the sl2 relations");
  if (!v.X().pow(n).is_zero()) throw Error(Errc::HypothesisViolated, "x^n is not zero");
  const auto& f = v.field();
  const unsigned m = static_cast<unsigned>(p) - n;
  const auto v1 = weight_space(v, 1 - static_cast<long long>(m));
  const auto v2 = weight_space(v, 1 - static_cast<long long>(n));
  if (v1.is_zero() || v2.is_zero()) throw Error(Errc::NotAnSab, "a bottom weight space is zero");
  if (v.dim() != m * v1.dim() + n * v2.dim()) throw Error(Errc::NotAnSab, "dimension does not match two rows");
  const auto alpha = detail::coordinate_matrix(v, v.Y().pow(n), v1, v2, f.inv(detail::factorial(f, n - 1)));
  const auto beta = detail::coordinate_matrix(v, v.Y().pow(m), v2, v1, f.inv(detail::factorial(f, m - 1)));

  auto model = s_alpha_beta(n, p, alpha, beta);
  std::vector<Vec> cols;
  auto add_row = [&](const Subspace<PrimeField>& bottom, unsigned len) {
    // e_{j,b} -> ((j-1)!/(len-1)!) X^{len-j} b, rows j = 1..len
    const auto last_inv = f.inv(detail::factorial(f, len - 1));
    for (unsigned j = 1; j <= len; ++j) {
      const auto op = v.X().pow(len - j);
      const auto s = f.mul(detail::factorial(f, j - 1), last_inv);
      for (std::size_t b = 0; b < bottom.dim(); ++b) {
        auto c = op.apply(bottom.vector(b));
        for (auto& z : c) z = f.mul(z, s);
        cols.push_back(std::move(c));
      }
    }
  };
  add_row(v1, m);
  add_row(v2, n);
  ModuleMap<PrimeField> w{std::move(model), v, Matrix<PrimeField>::from_columns(f, cols, v.dim())};
  if (!w.is_isomorphism()) throw Error(Errc::NotAnSab, "re-synthesized module is not isomorphic");

  SabReport rep{n, m, p, alpha, beta, {}, false, std::nullopt, std::move(w)};
  const bool square = alpha.is_square();
  if (square) {
    const auto cp = char_poly(beta * alpha);
    rep.beta_alpha_charpoly.assign(cp.begin(), cp.end());
  }
  rep.simple = sab_criterion(alpha, beta);
  if (!rep.simple) {
    std::vector<Vec> seeds;
    for (const auto& z : kernel(v.Y().pow(n)).intersect(v1).vectors()) seeds.push_back(z);
    for (const auto& z : kernel(v.Y().pow(m)).intersect(v2).vectors()) seeds.push_back(z);
    if (seeds.empty() && square) {
      const auto g = smallest_irreducible_factor(rep.beta_alpha_charpoly, p);
      const auto ba = beta * alpha;
      const auto ker = kernel(eval_poly<PrimeField>(Vec(g.begin(), g.end()), ba));
      for (std::size_t b = 0; b < ker.dim(); ++b) seeds.push_back(v1.combine(ker.vector(b)));
    }
    for (const auto& s : seeds) {
      auto sub = submodule_closure(v, {s});
      if (!sub.is_zero() && !sub.is_full()) {
        rep.proper_submodule = std::move(sub);
        break;
      }
    }
  }
  return rep;
}

/// Isomorphism of S_{alpha,beta} modules with invertible alpha, beta: similarity of beta alpha.
inline bool sab_isomorphic(const SabReport& a, const SabReport& b) {
  for (const auto* r : {&a, &b})
    if (!r->alpha.is_square() || !r->beta.is_square() || !is_invertible(r->alpha) || !is_invertible(r->beta))
      throw Error(Errc::NonInvertibleUnsupported, "pair equivalence needs alpha and beta invertible");
  if (a.n != b.n || a.p != b.p || a.alpha.rows() != b.alpha.rows()) return false;
  return similar(a.beta * a.alpha, b.beta * b.alpha);
}

}  // namespace sl2
