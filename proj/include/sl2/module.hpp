#pragma once

// sl_2(K)-modules in additive-basis presentation: one (H, X, Y) triple over the prime field
// (or Q) per basis element t^j of K.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "sl2/error.hpp"
#include "sl2/field.hpp"
#include "sl2/field_spec.hpp"
#include "sl2/matrix.hpp"

namespace sl2 {

template <ScalarField F>
struct GeneratorTriple {
  Matrix<F> H, X, Y;
};

enum class Gen { H, X, Y };

template <ScalarField F>
F field_for(const FieldSpec& spec) {
  return F::from_spec(spec);
}

template <ScalarField F>
class SL2Module {
 public:
  using Mat = Matrix<F>;

  SL2Module() = default;
  SL2Module(FieldSpec spec, std::size_t dim, std::vector<GeneratorTriple<F>> gens)
      : spec_(std::move(spec)), field_(field_for<F>(spec_)), dim_(dim), gens_(std::move(gens)) {
    if (gens_.size() != spec_.degree())
      throw Error(Errc::Malformed, "expected one generator triple per basis element of K");
    for (const auto& g : gens_)
      for (const Mat* m : {&g.H, &g.X, &g.Y})
        if (m->rows() != dim_ || m->cols() != dim_)
          throw Error(Errc::DimensionMismatch, "generator matrices must be dim x dim");
  }

  const FieldSpec& spec() const { return spec_; }
  const F& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  unsigned degree() const { return spec_.degree(); }
  const std::vector<GeneratorTriple<F>>& triples() const { return gens_; }
  std::vector<GeneratorTriple<F>>& triples() { return gens_; }

  const Mat& H(unsigned j = 0) const { return gens_.at(j).H; }
  const Mat& X(unsigned j = 0) const { return gens_.at(j).X; }
  const Mat& Y(unsigned j = 0) const { return gens_.at(j).Y; }
  const Mat& gen(Gen g, unsigned j) const {
    switch (g) {
      case Gen::H: return H(j);
      case Gen::X: return X(j);
      default: return Y(j);
    }
  }

  /// All 3e generator matrices, ordered H_0, X_0, Y_0, H_1, ...
  std::vector<const Mat*> generators() const {
    std::vector<const Mat*> out;
    for (const auto& g : gens_) {
      out.push_back(&g.H);
      out.push_back(&g.X);
      out.push_back(&g.Y);
    }
    return out;
  }

  /// g_lambda for lambda given by integer coordinates over the K-basis.
  Mat act(Gen g, const ExtElement& lambda) const {
    Mat acc(field_, dim_, dim_);
    for (unsigned j = 0; j < lambda.size() && j < gens_.size(); ++j) {
      if (lambda[j] == 0) continue;
      acc += gen(g, j).scaled(field_.from_int(static_cast<long long>(lambda[j])));
    }
    return acc;
  }

  /// Coordinates of b_i * b_j over the K-basis.
  ExtElement product(unsigned i, unsigned j) const { return spec_.basis_product(i, j); }

 private:
  FieldSpec spec_{};
  F field_{};
  std::size_t dim_ = 0;
  std::vector<GeneratorTriple<F>> gens_{};
};

template <ScalarField F>
struct ModuleMap {
  SL2Module<F> source;
  SL2Module<F> target;
  Matrix<F> matrix;

  bool intertwines() const {
    if (!(source.spec() == target.spec())) return false;
    if (matrix.rows() != target.dim() || matrix.cols() != source.dim()) return false;
    const auto gs = source.generators();
    const auto gt = target.generators();
    for (std::size_t i = 0; i < gs.size(); ++i)
      if (!(matrix * *gs[i] == *gt[i] * matrix)) return false;
    return true;
  }
  bool is_isomorphism() const { return intertwines() && is_invertible(matrix); }
};

namespace detail {

template <ScalarField F>
Matrix<F> from_int_matrix(const F& f, const std::vector<std::vector<long long>>& m) {
  return Matrix<F>::from_ints(f, m);
}

/// The K-multiplication matrix of b_j on coordinates (1x1 identity for Q).
template <ScalarField F>
Matrix<F> scalar_matrix(const F& f, const FieldSpec& spec, const ExtElement& lambda) {
  if (spec.is_rational()) return Matrix<F>::identity(f, 1);
  return Matrix<F>::from_ints(f, spec.mult_matrix(lambda));
}

inline unsigned long long factorial_u(unsigned k) {
  unsigned long long r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

template <ScalarField F>
typename F::Element factorial(const F& f, unsigned k) {
  auto r = f.one();
  for (unsigned i = 2; i <= k; ++i) r = f.mul(r, f.from_int(i));
  return r;
}

}  // namespace detail

template <ScalarField F>
SL2Module<F> trivial(std::size_t dim, const FieldSpec& spec = FieldSpec{}) {
  const F f = field_for<F>(spec);
  std::vector<GeneratorTriple<F>> gens(spec.degree(),
                                       GeneratorTriple<F>{Matrix<F>(f, dim, dim), Matrix<F>(f, dim, dim),
                                                          Matrix<F>(f, dim, dim)});
  return SL2Module<F>(spec, dim, std::move(gens));
}

/// Sym^k Nat sl_2(K) on the K-basis Y^k, XY^{k-1}, ..., X^k; carrier index i*e + c is t^c X^i Y^{k-i}.
template <ScalarField F>
SL2Module<F> sym_power(unsigned k, const FieldSpec& spec = FieldSpec{}) {
  const std::uint64_t p = spec.characteristic();
  if (p != 0 && p < k + 1)
    throw Error(Errc::CharTooSmall, "Sym^" + std::to_string(k) + " needs characteristic 0 or >= k+1");
  const F f = field_for<F>(spec);
  const std::size_t n = k + 1;
  Matrix<F> h(f, n, n), x(f, n, n), y(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = f.from_int(2 * static_cast<long long>(i) - k);
    if (i < k) x(i + 1, i) = f.from_int(static_cast<long long>(k - i));
    if (i > 0) y(i - 1, i) = f.from_int(static_cast<long long>(i));
  }
  std::vector<GeneratorTriple<F>> gens;
  for (unsigned j = 0; j < spec.degree(); ++j) {
    const ExtElement b = spec.is_rational() ? ExtElement{1} : spec.basis(j);
    const auto L = detail::scalar_matrix(f, spec, b);
    gens.push_back({kron(h, L), kron(x, L), kron(y, L)});
  }
  return SL2Module<F>(spec, n * spec.degree(), std::move(gens));
}

/// The two-row module of the low-characteristic window n < p < 2n, m = p - n.
/// `alpha` is dim V2 x dim V1 and `beta` is dim V1 x dim V2.
inline SL2Module<PrimeField> s_alpha_beta(unsigned n, std::uint64_t p, const Matrix<PrimeField>& alpha,
                                          const Matrix<PrimeField>& beta) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (n < 2 || !(n < p && p < 2 * n))
    throw Error(Errc::BadCharacteristicWindow, "need n < p < 2n");
  const FieldSpec spec = FieldSpec::make(p);
  const PrimeField f(p);
  const std::size_t d1 = alpha.cols();
  const std::size_t d2 = alpha.rows();
  if (beta.rows() != d1 || beta.cols() != d2)
    throw Error(Errc::DimensionMismatch, "alpha: V1 -> V2 and beta: V2 -> V1 have incompatible shapes");
  const unsigned m = static_cast<unsigned>(p) - n;
  const std::size_t dim = m * d1 + n * d2;
  auto off1 = [&](unsigned j) { return (j - 1) * d1; };
  auto off2 = [&](unsigned i) { return m * d1 + (i - 1) * d2; };
  Matrix<PrimeField> h(f, dim, dim), x(f, dim, dim), y(f, dim, dim);
  const auto I1 = Matrix<PrimeField>::identity(f, d1);
  const auto I2 = Matrix<PrimeField>::identity(f, d2);
  const long long mm = m, nn = n;
  for (unsigned j = 1; j <= m; ++j) {
    h.set_block(off1(j), off1(j), I1.scaled(mm + 1 - 2LL * j));
    if (j > 1) x.set_block(off1(j - 1), off1(j), I1.scaled(static_cast<long long>(j) - 1));
    if (j < m) y.set_block(off1(j + 1), off1(j), I1.scaled(mm - j));
  }
  y.set_block(off2(1), off1(m), alpha);
  for (unsigned i = 1; i <= n; ++i) {
    h.set_block(off2(i), off2(i), I2.scaled(nn + 1 - 2LL * i));
    if (i > 1) x.set_block(off2(i - 1), off2(i), I2.scaled(static_cast<long long>(i) - 1));
    if (i < n) y.set_block(off2(i + 1), off2(i), I2.scaled(nn - i));
  }
  y.set_block(off1(1), off2(n), beta);
  return SL2Module<PrimeField>(spec, dim, {GeneratorTriple<PrimeField>{h, x, y}});
}

/// Tensor product over K of Frobenius twists of Nat; tensor index e_{i1...in} has i1 most significant.
inline SL2Module<PrimeField> twisted_tensor_nat(const FieldSpec& spec, const std::vector<unsigned>& exponents) {
  if (spec.is_rational()) throw Error(Errc::CharZeroUnsupported, "twisted tensors need a finite field");
  if (exponents.empty()) throw Error(Errc::Malformed, "need at least one tensor factor");
  for (auto a : exponents)
    if (a >= spec.degree()) throw Error(Errc::Malformed, "Frobenius exponents must lie in [0,e)");
  const PrimeField f = PrimeField::from_spec(spec);
  const std::size_t n = exponents.size();
  // natural module on (e1, e2): x e2 = e1, h e1 = e1, h e2 = -e2, y e1 = e2
  const auto nat_h = Matrix<PrimeField>::from_ints(f, {{1, 0}, {0, -1}});
  const auto nat_x = Matrix<PrimeField>::from_ints(f, {{0, 1}, {0, 0}});
  const auto nat_y = Matrix<PrimeField>::from_ints(f, {{0, 0}, {1, 0}});
  const auto I2 = Matrix<PrimeField>::identity(f, 2);
  auto factor_op = [&](std::size_t slot, const Matrix<PrimeField>& op) {
    Matrix<PrimeField> acc = Matrix<PrimeField>::identity(f, 1);
    for (std::size_t s = 0; s < n; ++s) acc = kron(acc, s == slot ? op : I2);
    return acc;
  };
  std::vector<GeneratorTriple<PrimeField>> gens;
  const std::size_t tdim = std::size_t{1} << n;
  for (unsigned j = 0; j < spec.degree(); ++j) {
    GeneratorTriple<PrimeField> g{Matrix<PrimeField>(f, tdim * spec.degree(), tdim * spec.degree()),
                                  Matrix<PrimeField>(f, tdim * spec.degree(), tdim * spec.degree()),
                                  Matrix<PrimeField>(f, tdim * spec.degree(), tdim * spec.degree())};
    for (std::size_t s = 0; s < n; ++s) {
      const auto L = Matrix<PrimeField>::from_ints(f, spec.mult_matrix(spec.frobenius(spec.basis(j), exponents[s])));
      g.H += kron(factor_op(s, nat_h), L);
      g.X += kron(factor_op(s, nat_x), L);
      g.Y += kron(factor_op(s, nat_y), L);
    }
    gens.push_back(std::move(g));
  }
  return SL2Module<PrimeField>(spec, tdim * spec.degree(), std::move(gens));
}

template <ScalarField F>
SL2Module<F> direct_sum(const std::vector<SL2Module<F>>& parts, const FieldSpec& spec_if_empty = FieldSpec{}) {
  const FieldSpec spec = parts.empty() ? spec_if_empty : parts.front().spec();
  for (const auto& v : parts)
    if (!(v.spec() == spec)) throw Error(Errc::FieldMismatch, "direct summands over different fields");
  const F f = field_for<F>(spec);
  std::size_t dim = 0;
  for (const auto& v : parts) dim += v.dim();
  std::vector<GeneratorTriple<F>> gens;
  for (unsigned j = 0; j < spec.degree(); ++j) {
    std::vector<Matrix<F>> hs, xs, ys;
    for (const auto& v : parts) {
      hs.push_back(v.H(j));
      xs.push_back(v.X(j));
      ys.push_back(v.Y(j));
    }
    gens.push_back({block_diagonal(f, hs), block_diagonal(f, xs), block_diagonal(f, ys)});
  }
  return SL2Module<F>(spec, dim, std::move(gens));
}

/// Conjugate every generator: G' = P^{-1} G P. The returned map P goes from the new module to V.
/// The contragredient module: every generator G acts as -G^T.
template <ScalarField F>
SL2Module<F> dual(const SL2Module<F>& v) {
  std::vector<GeneratorTriple<F>> gens;
  for (const auto& g : v.triples()) gens.push_back({-g.H.transpose(), -g.X.transpose(), -g.Y.transpose()});
  return SL2Module<F>(v.spec(), v.dim(), std::move(gens));
}

template <ScalarField F>
Matrix<F> random_invertible(const F& f, std::size_t n, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    const std::uint64_t p = f.characteristic();
    for (;;) {
      Matrix<F> m(f, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng() % p;
      if (is_invertible(m)) return m;
    }
  } else {
    // unit lower times unit upper triangular, small integer entries
    Matrix<F> lo = Matrix<F>::identity(f, n), up = Matrix<F>::identity(f, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        lo(i, j) = f.from_int(static_cast<long long>(rng() % 5) - 2);
        up(j, i) = f.from_int(static_cast<long long>(rng() % 5) - 2);
      }
    return lo * up;
  }
}

template <ScalarField F>
ModuleMap<F> scramble_with_map(const SL2Module<F>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto P = random_invertible(v.field(), v.dim(), rng);
  const auto Pinv = *inverse(P);
  std::vector<GeneratorTriple<F>> gens;
  for (const auto& g : v.triples()) gens.push_back({Pinv * g.H * P, Pinv * g.X * P, Pinv * g.Y * P});
  SL2Module<F> w(v.spec(), v.dim(), std::move(gens));
  return ModuleMap<F>{w, v, P};
}

template <ScalarField F>
SL2Module<F> scramble(const SL2Module<F>& v, std::uint64_t seed) {
  return scramble_with_map(v, seed).source;
}

/// A single bracket relation failing on a pair of K-basis indices.
struct RelationFailure {
  std::string relation;
  unsigned i = 0;
  unsigned j = 0;
};

struct ValidationReport {
  std::vector<RelationFailure> failures;
  bool ok() const { return failures.empty(); }
};

template <ScalarField F>
ValidationReport validate(const SL2Module<F>& v) {
  ValidationReport rep;
  const unsigned e = v.degree();
  for (unsigned i = 0; i < e; ++i)
    for (unsigned j = 0; j < e; ++j) {
      const ExtElement b = v.product(i, j);
      auto check = [&](bool ok, const char* name) {
        if (!ok) rep.failures.push_back({name, i, j});
      };
      check(commutator(v.H(i), v.X(j)) == v.act(Gen::X, b).scaled(2), "[H_i,X_j]=2X_{b_i b_j}");
      check(commutator(v.H(i), v.Y(j)) == v.act(Gen::Y, b).scaled(-2), "[H_i,Y_j]=-2Y_{b_i b_j}");
      check(commutator(v.X(i), v.Y(j)) == v.act(Gen::H, b), "[X_i,Y_j]=H_{b_i b_j}");
      check(commutator(v.H(i), v.H(j)).is_zero(), "[H_i,H_j]=0");
      check(commutator(v.X(i), v.X(j)).is_zero(), "[X_i,X_j]=0");
      check(commutator(v.Y(i), v.Y(j)).is_zero(), "[Y_i,Y_j]=0");
    }
  return rep;
}

template <ScalarField F>
bool is_invariant(const SL2Module<F>& v, const Subspace<F>& w) {
  if (w.ambient_dim() != v.dim()) throw Error(Errc::DimensionMismatch, "subspace of another carrier");
  for (const auto* g : v.generators())
    if (!w.contains(w.image_under(*g))) return false;
  return true;
}

template <ScalarField F>
Subspace<F> annihilator(const SL2Module<F>& v) {
  const auto gens = v.generators();
  Matrix<F> stacked(v.field(), gens.size() * v.dim(), v.dim());
  for (std::size_t k = 0; k < gens.size(); ++k) stacked.set_block(k * v.dim(), 0, *gens[k]);
  return kernel(stacked);
}

template <ScalarField F>
Subspace<F> g_dot_V(const SL2Module<F>& v) {
  const auto gens = v.generators();
  Matrix<F> wide(v.field(), v.dim(), gens.size() * v.dim());
  for (std::size_t k = 0; k < gens.size(); ++k) wide.set_block(0, k * v.dim(), *gens[k]);
  return image(wide);
}

/// E_i = ker(H_0 - i).
template <ScalarField F>
Subspace<F> weight_space(const SL2Module<F>& v, long long i) {
  const auto& f = v.field();
  return kernel(v.H() - Matrix<F>::scalar(f, v.dim(), f.from_int(i)));
}

/// F_i = ker(H_0 - i)^2.
template <ScalarField F>
Subspace<F> generalized_weight_space(const SL2Module<F>& v, long long i) {
  const auto& f = v.field();
  const auto m = v.H() - Matrix<F>::scalar(f, v.dim(), f.from_int(i));
  return kernel(m * m);
}

/// Canonical weight label: residue in [0,p) for p > 0, the integer itself for Q.
inline long long weight_label(long long i, std::uint64_t p) {
  if (p == 0) return i;
  return static_cast<long long>(modp::reduce(i, p));
}

/// Lift a residue to the representative in {1-n, ..., n-1} with the same class, if one exists.
inline std::optional<long long> lift_weight(long long residue, std::uint64_t p, unsigned n) {
  for (long long w = 1 - static_cast<long long>(n); w <= static_cast<long long>(n) - 1; ++w)
    if (weight_label(w, p) == weight_label(residue, p)) return w;
  return std::nullopt;
}

namespace detail {
template <ScalarField F, class Fn>
std::map<long long, Subspace<F>> collect_weights(const SL2Module<F>& v, Fn space) {
  std::map<long long, Subspace<F>> out;
  const std::uint64_t p = v.spec().characteristic();
  const long long lo = p == 0 ? -static_cast<long long>(v.dim()) : 0;
  const long long hi = p == 0 ? static_cast<long long>(v.dim()) : static_cast<long long>(p) - 1;
  for (long long i = lo; i <= hi; ++i) {
    auto s = space(v, i);
    if (!s.is_zero()) out.emplace(i, std::move(s));
  }
  return out;
}
}  // namespace detail

/// Nonzero weight spaces keyed by canonical label.
template <ScalarField F>
std::map<long long, Subspace<F>> weight_spaces(const SL2Module<F>& v) {
  return detail::collect_weights(v, [](const SL2Module<F>& m, long long i) { return weight_space(m, i); });
}

template <ScalarField F>
std::map<long long, Subspace<F>> generalized_weight_spaces(const SL2Module<F>& v) {
  return detail::collect_weights(v,
                                 [](const SL2Module<F>& m, long long i) { return generalized_weight_space(m, i); });
}

/// True when H_0 is diagonalizable with eigenvalues in the prime field.
template <ScalarField F>
bool weight_diagonalizable(const SL2Module<F>& v) {
  std::size_t total = 0;
  for (const auto& [i, s] : weight_spaces(v)) total += s.dim();
  return total == v.dim();
}

/// c_1 = 2XY + 2YX + H^2 for the generator of basis element 1.
template <ScalarField F>
Matrix<F> casimir(const SL2Module<F>& v) {
  return (v.X() * v.Y()).scaled(2) + (v.Y() * v.X()).scaled(2) + v.H() * v.H();
}

/// Row-reduced basis that grows one vector at a time.
template <ScalarField F>
class IncrementalBasis {
 public:
  using Vector = std::vector<typename F::Element>;
  IncrementalBasis(F f, std::size_t n) : f_(std::move(f)), n_(n) {}

  /// Adds v if independent; returns the reduced, normalized vector or nullopt.
  std::optional<Vector> insert(Vector v) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto c = v[piv_[r]];
      if (f_.is_zero(c)) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (!f_.is_zero(rows_[r][j])) v[j] = f_.sub(v[j], f_.mul(c, rows_[r][j]));
    }
    std::size_t pc = 0;
    while (pc < n_ && f_.is_zero(v[pc])) ++pc;
    if (pc == n_) return std::nullopt;
    const auto inv = f_.inv(v[pc]);
    for (auto& a : v) a = f_.mul(a, inv);
    rows_.push_back(v);
    piv_.push_back(pc);
    return v;
  }
  std::size_t size() const { return rows_.size(); }
  const std::vector<Vector>& rows() const { return rows_; }

 private:
  F f_;
  std::size_t n_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> piv_;
};

namespace detail {
/// Dimension of the invariant closure of `seeds`, stopping early once it reaches `stop_at`.
template <ScalarField F>
std::size_t closure_dim(const SL2Module<F>& v, const std::vector<std::vector<typename F::Element>>& seeds,
                        std::size_t stop_at, std::vector<std::vector<typename F::Element>>* out = nullptr) {
  IncrementalBasis<F> basis(v.field(), v.dim());
  std::vector<std::vector<typename F::Element>> queue;
  for (const auto& s : seeds)
    if (auto r = basis.insert(s)) queue.push_back(*r);
  const auto gens = v.generators();
  for (std::size_t q = 0; q < queue.size() && basis.size() < stop_at; ++q) {
    for (const auto* g : gens) {
      if (auto r = basis.insert(g->apply(queue[q]))) queue.push_back(*r);
      if (basis.size() >= stop_at) break;
    }
  }
  if (out) *out = basis.rows();
  return basis.size();
}
}  // namespace detail

/// Smallest invariant subspace containing the given vectors.
template <ScalarField F>
Subspace<F> submodule_closure(const SL2Module<F>& v, const std::vector<std::vector<typename F::Element>>& vectors) {
  std::vector<std::vector<typename F::Element>> rows;
  detail::closure_dim(v, vectors, v.dim() + 1, &rows);
  return Subspace<F>::span(v.field(), v.dim(), rows);
}

/// Largest invariant subspace contained in w.
template <ScalarField F>
Subspace<F> invariant_core(const SL2Module<F>& v, Subspace<F> w) {
  for (;;) {
    Subspace<F> next = w;
    const auto q = w.quotient_map();
    for (const auto* g : v.generators()) next = next.intersect(kernel(q * *g));
    if (next.dim() == w.dim()) return w;
    w = std::move(next);
  }
}

/// Matrix of an operator preserving w, in the echelon coordinates of w.
template <ScalarField F>
Matrix<F> restrict_operator(const Matrix<F>& m, const Subspace<F>& w) {
  const auto img = m * w.basis_columns();
  Matrix<F> r(m.field(), w.dim(), w.dim());
  for (std::size_t s = 0; s < w.dim(); ++s) {
    const auto col = img.column(s);
    if (!w.contains(col)) throw Error(Errc::NotInvariant, "operator does not preserve the subspace");
    for (std::size_t t = 0; t < w.dim(); ++t) r(t, s) = col[w.pivots()[t]];
  }
  return r;
}

/// Operator induced on ambient / w, in the coordinates of w.complement_indices().
template <ScalarField F>
Matrix<F> quotient_operator(const Matrix<F>& m, const Subspace<F>& w) {
  const auto comp = w.complement_indices();
  Matrix<F> lift(m.field(), m.cols(), comp.size());
  for (std::size_t s = 0; s < comp.size(); ++s) lift(comp[s], s) = m.field().one();
  return w.quotient_map() * m * lift;
}

template <ScalarField F>
SL2Module<F> restrict(const SL2Module<F>& v, const Subspace<F>& w) {
  if (!is_invariant(v, w)) throw Error(Errc::NotInvariant, "subspace is not a submodule");
  std::vector<GeneratorTriple<F>> gens;
  for (const auto& g : v.triples())
    gens.push_back({restrict_operator(g.H, w), restrict_operator(g.X, w), restrict_operator(g.Y, w)});
  return SL2Module<F>(v.spec(), w.dim(), std::move(gens));
}

template <ScalarField F>
SL2Module<F> quotient(const SL2Module<F>& v, const Subspace<F>& w) {
  if (!is_invariant(v, w)) throw Error(Errc::NotInvariant, "subspace is not a submodule");
  std::vector<GeneratorTriple<F>> gens;
  for (const auto& g : v.triples())
    gens.push_back({quotient_operator(g.H, w), quotient_operator(g.X, w), quotient_operator(g.Y, w)});
  return SL2Module<F>(v.spec(), v.dim() - w.dim(), std::move(gens));
}

/// The g_1-module obtained by keeping only the generator triple of basis element 1.
template <ScalarField F>
SL2Module<F> restrict_to_prime_field(const SL2Module<F>& v) {
  const FieldSpec prime = v.spec().is_rational() ? FieldSpec{} : FieldSpec::make(v.spec().characteristic());
  return SL2Module<F>(prime, v.dim(), {v.triples().front()});
}

/// Vector in the ambient space from coordinates along the complement indices of w.
template <ScalarField F>
std::vector<typename F::Element> lift_from_quotient(const Subspace<F>& w, const std::vector<typename F::Element>& q) {
  const auto comp = w.complement_indices();
  std::vector<typename F::Element> v(w.ambient_dim(), w.field().zero());
  for (std::size_t s = 0; s < comp.size(); ++s) v[comp[s]] = q[s];
  return v;
}

enum class SimplicityMode { Full, WeightVectors, Auto };

/// Number of projective points of F_p^d (saturating at the given cap + 1).
inline std::uint64_t projective_points(std::uint64_t p, std::size_t d, std::uint64_t cap) {
  std::uint64_t total = 0, pk = 1;
  for (std::size_t k = 0; k < d; ++k) {
    total += pk;
    if (total > cap) return cap + 1;
    if (pk > cap / p + 1) pk = cap + 1;
    else pk *= p;
  }
  return total;
}

namespace detail {
/// Calls fn on one representative per projective point of span(rows) (first nonzero coordinate 1).
template <class Fn>
bool for_each_projective(const PrimeField& f, const std::vector<std::vector<std::uint64_t>>& rows, Fn fn) {
  const std::size_t d = rows.size();
  if (d == 0) return true;
  const std::size_t n = rows.front().size();
  const std::uint64_t p = f.characteristic();
  for (std::size_t lead = 0; lead < d; ++lead) {
    std::vector<std::uint64_t> coeff(d - lead - 1, 0);
    for (;;) {
      std::vector<std::uint64_t> v = rows[lead];
      for (std::size_t t = 0; t < coeff.size(); ++t) {
        if (coeff[t] == 0) continue;
        const auto& r = rows[lead + 1 + t];
        for (std::size_t j = 0; j < n; ++j) v[j] = f.add(v[j], f.mul(coeff[t], r[j]));
      }
      if (!fn(v)) return false;
      std::size_t t = 0;
      while (t < coeff.size() && ++coeff[t] == p) coeff[t++] = 0;
      if (t == coeff.size()) break;
    }
  }
  return true;
}
}  // namespace detail

/// Brute-force simplicity: every nonzero vector (or, when H_0 is split semisimple, every weight
/// vector) must generate the whole module. The zero module is not simple.
inline bool is_simple_bruteforce(const SL2Module<PrimeField>& v, std::uint64_t budget,
                                 SimplicityMode mode = SimplicityMode::Auto) {
  if (v.dim() == 0) return false;
  const std::uint64_t p = v.spec().characteristic();
  std::vector<Subspace<PrimeField>> spaces;
  if (mode == SimplicityMode::Auto)
    mode = weight_diagonalizable(v) ? SimplicityMode::WeightVectors : SimplicityMode::Full;
  if (mode == SimplicityMode::WeightVectors) {
    if (!weight_diagonalizable(v))
      throw Error(Errc::HypothesisViolated, "weight-vector search needs H_0 split semisimple");
    for (auto& [i, s] : weight_spaces(v)) spaces.push_back(s);
  } else {
    spaces.push_back(Subspace<PrimeField>::full(v.field(), v.dim()));
  }
  std::uint64_t count = 0;
  for (const auto& s : spaces) {
    count += projective_points(p, s.dim(), budget);
    if (count > budget)
      throw Error(Errc::BudgetExceeded, "brute-force simplicity check exceeds budget " + std::to_string(budget));
  }
  for (const auto& s : spaces) {
    const bool all_full = detail::for_each_projective(v.field(), s.vectors(), [&](const std::vector<std::uint64_t>& x) {
      return detail::closure_dim(v, {x}, v.dim()) == v.dim();
    });
    if (!all_full) return false;
  }
  return true;
}

/// Basis of Hom_g(V, W) as dim W x dim V matrices.
template <ScalarField F>
std::vector<Matrix<F>> hom_space(const SL2Module<F>& v, const SL2Module<F>& w) {
  if (!(v.spec() == w.spec())) throw Error(Errc::FieldMismatch, "modules over different fields");
  const std::size_t dv = v.dim(), dw = w.dim();
  const auto gv = v.generators();
  const auto gw = w.generators();
  const F& f = v.field();
  // unknown M(r,c) at index r*dv + c; equation M G_v - G_w M = 0
  Matrix<F> sys(f, gv.size() * dw * dv, dw * dv);
  for (std::size_t g = 0; g < gv.size(); ++g)
    for (std::size_t r = 0; r < dw; ++r)
      for (std::size_t c = 0; c < dv; ++c) {
        const std::size_t row = (g * dw + r) * dv + c;
        for (std::size_t k = 0; k < dv; ++k)
          sys(row, r * dv + k) = f.add(sys(row, r * dv + k), (*gv[g])(k, c));
        for (std::size_t k = 0; k < dw; ++k)
          sys(row, k * dv + c) = f.sub(sys(row, k * dv + c), (*gw[g])(r, k));
      }
  std::vector<Matrix<F>> out;
  const auto ker = kernel(sys);
  for (std::size_t b = 0; b < ker.dim(); ++b) {
    const auto vec = ker.vector(b);
    Matrix<F> m(f, dw, dv);
    for (std::size_t r = 0; r < dw; ++r)
      for (std::size_t c = 0; c < dv; ++c) m(r, c) = vec[r * dv + c];
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace sl2
