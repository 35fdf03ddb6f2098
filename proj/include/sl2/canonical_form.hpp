#pragma once

// Invariant factors over F_p, via the Smith form of xI - A over F_p[x].

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "sl2/error.hpp"
#include "sl2/field.hpp"
#include "sl2/matrix.hpp"
#include "sl2/poly.hpp"

namespace sl2 {

/// Monic invariant factors f_1 | f_2 | ... of A, constants dropped.
inline std::vector<Poly> invariant_factors(const Matrix<PrimeField>& a) {
  if (!a.is_square()) throw Error(Errc::NonSquare, "invariant factors of a non-square matrix");
  const std::uint64_t p = a.field().characteristic();
  const std::size_t n = a.rows();
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i][j] = {modp::sub(0, a(i, j), p)};
      if (i == j) m[i][j].push_back(1);
      poly::trim(m[i][j]);
    }

  auto row_axpy = [&](std::size_t dst, std::size_t src, const Poly& q, std::size_t from) {
    for (std::size_t c = from; c < n; ++c) m[dst][c] = poly::sub(m[dst][c], poly::mul(q, m[src][c], p), p);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const Poly& q, std::size_t from) {
    for (std::size_t r = from; r < n; ++r) m[r][dst] = poly::sub(m[r][dst], poly::mul(q, m[r][src], p), p);
  };

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t br = n, bc = n;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (!poly::is_zero(m[i][j]) &&
              (br == n || poly::degree(m[i][j]) < poly::degree(m[br][bc]))) {
            br = i;
            bc = j;
          }
      if (br == n) break;
      std::swap(m[t], m[br]);
      for (auto& row : m) std::swap(row[t], row[bc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        row_axpy(i, t, poly::divmod(m[i][t], m[t][t], p).first, t);
        if (!poly::is_zero(m[i][t])) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        col_axpy(j, t, poly::divmod(m[t][j], m[t][t], p).first, t);
        if (!poly::is_zero(m[t][j])) clean = false;
      }
      if (!clean) continue;
      std::size_t bad = n;
      for (std::size_t i = t + 1; i < n && bad == n; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!poly::is_zero(poly::mod(m[i][j], m[t][t], p))) {
            bad = i;
            break;
          }
      if (bad == n) break;
      for (std::size_t c = t; c < n; ++c) m[t][c] = poly::add(m[t][c], m[bad][c], p);
    }
  }
  std::vector<Poly> out;
  for (std::size_t t = 0; t < n; ++t)
    if (poly::degree(m[t][t]) > 0) out.push_back(poly::monic(m[t][t], p));
  std::sort(out.begin(), out.end(), [](const Poly& x, const Poly& y) { return poly::degree(x) < poly::degree(y); });
  return out;
}

inline bool similar(const Matrix<PrimeField>& a, const Matrix<PrimeField>& b) {
  if (a.rows() != b.rows() || !(a.field() == b.field())) return false;
  return invariant_factors(a) == invariant_factors(b);
}

}  // namespace sl2
