#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "qinv/exactnum.hpp"

namespace qinv {

template <class F>
using MatrixT = std::vector<std::vector<F>>;
using Matrix = MatrixT<CycNumber>;

template <class F>
struct RowEchelon {
  MatrixT<F> rows;          // reduced rows, pivot entries equal to one
  std::vector<int> pivots;  // pivot column of each row
};

inline void add_mul(Rational& x, const Rational& a, const Rational& b) {
  thread_local Rational t;
  mpq_mul(t.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
  mpq_add(x.get_mpq_t(), x.get_mpq_t(), t.get_mpq_t());
}
inline void add_mul(CycNumber& x, const CycNumber& a, const CycNumber& b) { x.add_product(a, b); }

// Reduced row echelon form of m (ncols columns).
template <class F>
RowEchelon<F> rref(MatrixT<F> m, int ncols) {
  RowEchelon<F> out;
  int nrows = static_cast<int>(m.size());
  int r = 0;
  for (int c = 0; c < ncols && r < nrows; ++c) {
    int piv = -1;
    for (int i = r; i < nrows; ++i) {
      if (!is_zero(m[i][c])) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    F inv = F(1) / m[r][c];
    for (int j = c; j < ncols; ++j) {
      if (!is_zero(m[r][j])) m[r][j] *= inv;
    }
    std::vector<int> nz;
    for (int j = c + 1; j < ncols; ++j) {
      if (!is_zero(m[r][j])) nz.push_back(j);
    }
    for (int i = 0; i < nrows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      F f = -m[i][c];
      for (int j : nz) add_mul(m[i][j], f, m[r][j]);
      m[i][c] = F(0);
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

template <class F>
int rank(const MatrixT<F>& m, int ncols) {
  return static_cast<int>(rref(m, ncols).pivots.size());
}

// Basis of {v : m v = 0}, one vector per free column.
template <class F>
MatrixT<F> kernel(const MatrixT<F>& m, int ncols) {
  RowEchelon<F> e = rref(m, ncols);
  std::vector<char> is_pivot(ncols, 0);
  for (int p : e.pivots) is_pivot[p] = 1;
  MatrixT<F> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<F> v(ncols, F(0));
    v[f] = F(1);
    for (size_t i = 0; i < e.pivots.size(); ++i) {
      if (!is_zero(e.rows[i][f])) v[e.pivots[i]] = -e.rows[i][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves a x = b for square or overdetermined consistent systems; throws otherwise.
template <class F>
std::vector<F> solve(const MatrixT<F>& a, const std::vector<F>& b, int ncols) {
  MatrixT<F> aug = a;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  RowEchelon<F> e = rref(aug, ncols + 1);
  std::vector<F> x(ncols, F(0));
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == ncols) throw std::domain_error("inconsistent linear system");
    x[e.pivots[i]] = e.rows[i][ncols];
  }
  if (static_cast<int>(e.pivots.size()) < ncols) throw std::domain_error("underdetermined linear system");
  return x;
}

template <class F>
MatrixT<F> identity_matrix(int n) {
  MatrixT<F> m(n, std::vector<F>(n, F(0)));
  for (int i = 0; i < n; ++i) m[i][i] = F(1);
  return m;
}

template <class F>
MatrixT<F> matmul(const MatrixT<F>& a, const MatrixT<F>& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  MatrixT<F> c(n, std::vector<F>(m, F(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t l = 0; l < k; ++l) {
      if (is_zero(a[i][l])) continue;
      for (size_t j = 0; j < m; ++j) {
        if (!is_zero(b[l][j])) c[i][j] += a[i][l] * b[l][j];
      }
    }
  }
  return c;
}

template <class F>
std::vector<F> matvec(const MatrixT<F>& a, const std::vector<F>& v) {
  std::vector<F> out(a.size(), F(0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < v.size(); ++j) {
      if (!is_zero(a[i][j]) && !is_zero(v[j])) out[i] += a[i][j] * v[j];
    }
  }
  return out;
}

template <class F>
MatrixT<F> inverse(const MatrixT<F>& a) {
  int n = static_cast<int>(a.size());
  MatrixT<F> aug = a;
  for (int i = 0; i < n; ++i) {
    aug[i].resize(2 * n, F(0));
    aug[i][n + i] = F(1);
  }
  RowEchelon<F> e = rref(aug, 2 * n);
  if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1) {
    throw std::domain_error("singular matrix");
  }
  MatrixT<F> inv(n, std::vector<F>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  }
  return inv;
}

template <class F>
MatrixT<F> conj_transpose(const MatrixT<F>& a) {
  size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
  MatrixT<F> t(m, std::vector<F>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) t[j][i] = conj(a[i][j]);
  }
  return t;
}

template <class F>
F trace(const MatrixT<F>& a) {
  F t(0);
  for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

}  // namespace qinv
