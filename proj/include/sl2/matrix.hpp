#pragma once

// Dense exact matrices and echelonized subspaces over a ScalarField.
//
// Matrices act on column vectors. A Subspace stores a basis as the rows of a matrix in reduced
// row-echelon form with zero rows dropped, so two subspaces are equal iff their bases are equal.

#include <concepts>
#include <cstddef>
#include <optional>
#include <ostream>
#include <type_traits>
#include <utility>
#include <vector>

#include "sl2/error.hpp"
#include "sl2/field.hpp"

namespace sl2 {

template <ScalarField F>
class Matrix {
 public:
  using Element = typename F::Element;
  using Vector = std::vector<Element>;

  Matrix() = default;
  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  static Matrix scalar(const F& field, std::size_t n, const Element& c) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
    return m;
  }

  static Matrix from_ints(const F& field, const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    Matrix m(field, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw Error(Errc::DimensionMismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = field.from_int(rows[i][j]);
    }
    return m;
  }

  static Matrix from_rows(const F& field, const std::vector<Vector>& rows, std::size_t cols) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error(Errc::DimensionMismatch, "row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const F& field, const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw Error(Errc::DimensionMismatch, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Element& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const { return Vector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }
  Vector column(std::size_t c) const {
    Vector v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
  }

  bool is_zero() const {
    for (const auto& a : data_)
      if (!field_.is_zero(a)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_.add(data_[i], o.data_[i]);
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_.sub(data_[i], o.data_[i]);
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = a.field_.neg(x);
    return a;
  }

  Matrix scaled(const Element& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = field_.mul(x, c);
    return r;
  }
  template <std::integral I>
    requires(!std::is_same_v<I, Element>)
  Matrix scaled(I c) const {
    return scaled(field_.from_int(static_cast<long long>(c)));
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
    const F& f = a.field_;
    Matrix r(f, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Element& aik = a(i, k);
        if (f.is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = f.add(r(i, j), f.mul(aik, b(k, j)));
      }
    }
    return r;
  }

  Vector apply(const Vector& v) const {
    if (v.size() != cols_) throw Error(Errc::DimensionMismatch, "matrix-vector shape mismatch");
    Vector r(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k)
        if (!field_.is_zero(v[k])) r[i] = field_.add(r[i], field_.mul((*this)(i, k), v[k]));
    return r;
  }

  Matrix pow(unsigned k) const {
    if (!is_square()) throw Error(Errc::NonSquare, "power of a non-square matrix");
    Matrix r = identity(field_, rows_);
    for (unsigned i = 0; i < k; ++i) r = r * (*this);
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      if (!a.field_.equal(a.data_[i], b.data_[i])) return false;
    return true;
  }

  /// Rows r0.., columns c0.. block of the given shape.
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::DimensionMismatch, "matrix shape mismatch");
  }

  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

template <ScalarField F>
Matrix<F> commutator(const Matrix<F>& a, const Matrix<F>& b) {
  return a * b - b * a;
}

/// Kronecker product of an integer pattern with a matrix.
template <ScalarField F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
  const F& f = a.field();
  Matrix<F> r(f, a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (f.is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = f.mul(a(i, j), b(k, l));
    }
  return r;
}

template <ScalarField F>
Matrix<F> block_diagonal(const F& f, const std::vector<Matrix<F>>& blocks) {
  std::size_t n = 0, m = 0;
  for (const auto& b : blocks) {
    n += b.rows();
    m += b.cols();
  }
  Matrix<F> r(f, n, m);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    r.set_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return r;
}

/// In-place reduced row-echelon form; returns pivot columns.
template <ScalarField F>
std::vector<std::size_t> rref_in_place(Matrix<F>& m) {
  const F& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && f.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
    const auto inv = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      const auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <ScalarField F>
std::size_t rank(Matrix<F> m) {
  return rref_in_place(m).size();
}

template <ScalarField F>
typename F::Element determinant(Matrix<F> m) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "determinant of a non-square matrix");
  const F& f = m.field();
  auto det = f.one();
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && f.is_zero(m(piv, c))) ++piv;
    if (piv == n) return f.zero();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = f.neg(det);
    }
    det = f.mul(det, m(c, c));
    const auto inv = f.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (f.is_zero(m(i, c))) continue;
      const auto factor = f.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(c, j)));
    }
  }
  return det;
}

template <ScalarField F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<F> aug(m.field(), n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix<F>::identity(m.field(), n));
  const auto piv = rref_in_place(aug);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) return std::nullopt;
  return aug.block(0, n, n, n);
}

template <ScalarField F>
bool is_invertible(const Matrix<F>& m) {
  return m.is_square() && rank(m) == m.rows();
}

template <ScalarField F>
class Subspace {
 public:
  using Element = typename F::Element;
  using Vector = std::vector<Element>;

  Subspace() = default;
  /// The zero subspace of F^n.
  Subspace(F field, std::size_t ambient) : field_(field), ambient_(ambient), basis_(field, 0, ambient) {}

  static Subspace full(const F& field, std::size_t n) {
    Subspace s(field, n);
    s.basis_ = Matrix<F>::identity(field, n);
    s.pivots_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.pivots_[i] = i;
    return s;
  }

  /// Span of the rows of `m`.
  static Subspace row_span(Matrix<F> m) {
    Subspace s(m.field(), m.cols());
    s.pivots_ = rref_in_place(m);
    s.basis_ = m.block(0, 0, s.pivots_.size(), m.cols());
    return s;
  }
  /// Span of the columns of `m`.
  static Subspace column_span(const Matrix<F>& m) { return row_span(m.transpose()); }

  static Subspace span(const F& field, std::size_t ambient, const std::vector<Vector>& vectors) {
    return row_span(Matrix<F>::from_rows(field, vectors, ambient));
  }

  const F& field() const { return field_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return pivots_.size(); }
  bool is_zero() const { return pivots_.empty(); }
  bool is_full() const { return pivots_.size() == ambient_; }
  const Matrix<F>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Vector vector(std::size_t i) const { return basis_.row(i); }
  std::vector<Vector> vectors() const {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
    return out;
  }
  /// Basis vectors as the columns of an ambient x dim matrix.
  Matrix<F> basis_columns() const { return basis_.transpose(); }

  /// Representative of v modulo this subspace, vanishing on every pivot column.
  Vector reduce(Vector v) const {
    check_len(v);
    for (std::size_t r = 0; r < dim(); ++r) {
      const auto c = v[pivots_[r]];
      if (field_.is_zero(c)) continue;
      for (std::size_t j = 0; j < ambient_; ++j) v[j] = field_.sub(v[j], field_.mul(c, basis_(r, j)));
    }
    return v;
  }

  bool contains(const Vector& v) const {
    for (const auto& x : reduce(v))
      if (!field_.is_zero(x)) return false;
    return true;
  }

  bool contains(const Subspace& o) const {
    if (o.ambient_ != ambient_) throw Error(Errc::DimensionMismatch, "subspaces of different spaces");
    for (std::size_t i = 0; i < o.dim(); ++i)
      if (!contains(o.basis_.row(i))) return false;
    return true;
  }

  /// Coordinates of v (which must lie in the subspace) in the echelon basis.
  Vector coordinates(const Vector& v) const {
    check_len(v);
    if (!contains(v)) throw Error(Errc::DimensionMismatch, "vector outside subspace");
    Vector c(dim());
    for (std::size_t r = 0; r < dim(); ++r) c[r] = v[pivots_[r]];
    return c;
  }

  /// Linear combination of basis vectors.
  Vector combine(const Vector& coords) const {
    Vector v(ambient_, field_.zero());
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t j = 0; j < ambient_; ++j) v[j] = field_.add(v[j], field_.mul(coords[r], basis_(r, j)));
    return v;
  }

  /// Ambient coordinates that are not pivots: the standard complement basis.
  std::vector<std::size_t> complement_indices() const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t j = 0; j < ambient_; ++j) {
      if (k < pivots_.size() && pivots_[k] == j) {
        ++k;
        continue;
      }
      out.push_back(j);
    }
    return out;
  }

  /// The projection F^n -> F^n / S in the coordinates given by complement_indices().
  Matrix<F> quotient_map() const {
    const auto comp = complement_indices();
    Matrix<F> q(field_, comp.size(), ambient_);
    for (std::size_t j = 0; j < ambient_; ++j) {
      Vector e(ambient_, field_.zero());
      e[j] = field_.one();
      const auto red = reduce(e);
      for (std::size_t i = 0; i < comp.size(); ++i) q(i, j) = red[comp[i]];
    }
    return q;
  }

  /// Vectors annihilated by every basis vector under the standard pairing.
  Subspace orthogonal() const;

  Subspace sum(const Subspace& o) const {
    if (o.ambient_ != ambient_) throw Error(Errc::DimensionMismatch, "subspaces of different spaces");
    Matrix<F> m(field_, dim() + o.dim(), ambient_);
    m.set_block(0, 0, basis_);
    m.set_block(dim(), 0, o.basis_);
    return row_span(std::move(m));
  }

  Subspace intersect(const Subspace& o) const {
    if (o.ambient_ != ambient_) throw Error(Errc::DimensionMismatch, "subspaces of different spaces");
    return orthogonal().sum(o.orthogonal()).orthogonal();
  }

  /// Image under a linear map.
  Subspace image_under(const Matrix<F>& m) const {
    if (m.cols() != ambient_) throw Error(Errc::DimensionMismatch, "map does not act on this space");
    return row_span(basis_ * m.transpose());
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.pivots_ == b.pivots_ && a.basis_ == b.basis_;
  }

 private:
  void check_len(const Vector& v) const {
    if (v.size() != ambient_) throw Error(Errc::DimensionMismatch, "vector length mismatch");
  }

  F field_{};
  std::size_t ambient_ = 0;
  Matrix<F> basis_{};
  std::vector<std::size_t> pivots_{};
};

/// Null space {v : M v = 0}.
template <ScalarField F>
Subspace<F> kernel(const Matrix<F>& m) {
  Matrix<F> r = m;
  const auto piv = rref_in_place(r);
  const F& f = m.field();
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<typename F::Element> zero(m.cols(), f.zero());
  std::vector<std::vector<typename F::Element>> vecs;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_piv[free]) continue;
    auto v = zero;
    v[free] = f.one();
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = f.neg(r(k, free));
    vecs.push_back(std::move(v));
  }
  auto ker = Subspace<F>::span(f, m.cols(), vecs);
  if (ker.dim() + piv.size() != m.cols()) throw Error(Errc::DimensionMismatch, "rank-nullity violated");
  return ker;
}

/// Column space of M.
template <ScalarField F>
Subspace<F> image(const Matrix<F>& m) {
  return Subspace<F>::column_span(m);
}

template <ScalarField F>
Subspace<F> Subspace<F>::orthogonal() const {
  return kernel(basis_);
}

/// Some solution of M x = b, if any.
template <ScalarField F>
std::optional<std::vector<typename F::Element>> solve(const Matrix<F>& m, const std::vector<typename F::Element>& b) {
  if (b.size() != m.rows()) throw Error(Errc::DimensionMismatch, "right-hand side length mismatch");
  const F& f = m.field();
  Matrix<F> aug(f, m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  const auto piv = rref_in_place(aug);
  std::vector<typename F::Element> x(m.cols(), f.zero());
  for (std::size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] == m.cols()) return std::nullopt;
    x[piv[k]] = aug(k, m.cols());
  }
  return x;
}

/// Characteristic polynomial det(X - M), constant term first, via Hessenberg reduction.
template <ScalarField F>
std::vector<typename F::Element> char_poly(const Matrix<F>& m) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "characteristic polynomial of a non-square matrix");
  const F& f = m.field();
  const std::size_t n = m.rows();
  Matrix<F> h = m;
  for (std::size_t c = 1; c + 1 < n; ++c) {
    std::size_t piv = c;
    while (piv < n && f.is_zero(h(piv, c - 1))) ++piv;
    if (piv == n) continue;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(c, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, c));
    }
    const auto inv = f.inv(h(c, c - 1));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (f.is_zero(h(i, c - 1))) continue;
      const auto u = f.mul(h(i, c - 1), inv);
      for (std::size_t j = 0; j < n; ++j) h(i, j) = f.sub(h(i, j), f.mul(u, h(c, j)));
      for (std::size_t r = 0; r < n; ++r) h(r, c) = f.add(h(r, c), f.mul(u, h(r, i)));
    }
  }
  using Elem = typename F::Element;
  auto poly_sub_scaled = [&](std::vector<Elem>& acc, const std::vector<Elem>& q, const Elem& c) {
    for (std::size_t i = 0; i < q.size(); ++i) acc[i] = f.sub(acc[i], f.mul(c, q[i]));
  };
  // polys[k] = characteristic polynomial of the leading k x k block
  std::vector<std::vector<Elem>> polys(n + 1);
  polys[0] = {f.one()};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Elem> pk(k + 1, f.zero());
    const auto& prev = polys[k - 1];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      pk[i + 1] = f.add(pk[i + 1], prev[i]);
      pk[i] = f.sub(pk[i], f.mul(h(k - 1, k - 1), prev[i]));
    }
    Elem t = f.one();
    for (std::size_t i = 1; i < k; ++i) {
      t = f.mul(t, h(k - i, k - i - 1));
      poly_sub_scaled(pk, polys[k - i - 1], f.mul(t, h(k - i - 1, k - 1)));
    }
    polys[k] = std::move(pk);
  }
  return polys[n];
}

/// Evaluate a polynomial (constant term first) at a square matrix.
template <ScalarField F>
Matrix<F> eval_poly(const std::vector<typename F::Element>& coeffs, const Matrix<F>& m) {
  const F& f = m.field();
  Matrix<F> acc(f, m.rows(), m.cols());
  for (std::size_t i = coeffs.size(); i > 0; --i) acc = acc * m + Matrix<F>::scalar(f, m.rows(), coeffs[i - 1]);
  return acc;
}

template <ScalarField F>
std::ostream& operator<<(std::ostream& os, const Matrix<F>& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? " [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m.field().to_string(m(i, j));
    os << ']';
  }
  return os << ']';
}

}  // namespace sl2
