#pragma once

// Dense vectors and matrices over W_n, with the elimination routines a local
// principal ideal ring supports: minimal-valuation pivoting keeps every
// elimination step exact.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/padic.hpp"

namespace k3lift {

using Vec = std::vector<Scalar>;

inline Vec zero_vec(const Ring& r, std::size_t n) { return Vec(n, Scalar::zero(r)); }

inline Vec unit_vec(const Ring& r, std::size_t n, std::size_t i) {
  Vec v = zero_vec(r, n);
  v.at(i) = Scalar::one(r);
  return v;
}

inline Vec vec_from_ints(const Ring& r, const std::vector<std::int64_t>& xs) {
  Vec v;
  v.reserve(xs.size());
  for (auto x : xs) v.push_back(Scalar::from_int(r, x));
  return v;
}

inline void check_dims(std::size_t a, std::size_t b, const char* what) {
  require(a == b, ErrorCode::InvalidInput,
          std::string("dimension mismatch in ") + what + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

inline Vec operator+(const Vec& a, const Vec& b) {
  check_dims(a.size(), b.size(), "vector add");
  Vec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  check_dims(a.size(), b.size(), "vector sub");
  Vec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

inline Vec operator*(const Scalar& s, const Vec& v) {
  Vec r(v);
  for (auto& x : r) x = s * x;
  return r;
}

inline bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// Minimum coordinate valuation; n for the zero vector.
inline int valuation(const Vec& v) {
  int best = v.empty() ? 0 : v.front().ring()->n();
  for (const auto& x : v) best = std::min(best, x.valuation());
  return best;
}

inline Vec vec_in(const Vec& v, const Ring& target) {
  Vec r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x.in(target));
  return r;
}

/// Index of the first unit coordinate, if any.
inline std::optional<std::size_t> first_unit(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].is_unit()) return i;
  return std::nullopt;
}

class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(ring_)) {}

  static Matrix identity(const Ring& r, std::size_t n) {
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(r);
    return m;
  }
  static Matrix from_ints(const Ring& r, const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t nr = rows.size(), nc = nr ? rows[0].size() : 0;
    Matrix m(r, nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
      check_dims(rows[i].size(), nc, "matrix rows");
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = Scalar::from_int(r, rows[i][j]);
    }
    return m;
  }
  static Matrix from_columns(const Ring& r, std::size_t nrows, const std::vector<Vec>& cols) {
    Matrix m(r, nrows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
    return m;
  }
  static Matrix diagonal(const Ring& r, const Vec& d) {
    Matrix m(r, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const { return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)); }
  Vec column(std::size_t j) const {
    Vec v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }
  std::vector<Vec> columns() const {
    std::vector<Vec> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }
  void set_column(std::size_t j, const Vec& v) {
    check_dims(v.size(), rows_, "set_column");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    check_dims(cols_, o.rows_, "matrix product");
    Matrix r(ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Scalar& a = (*this)(i, k);
        if (a.is_zero()) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  Vec operator*(const Vec& v) const {
    check_dims(cols_, v.size(), "matrix-vector product");
    Vec r = zero_vec(ring_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const Scalar& a = (*this)(i, j);
        if (!a.is_zero()) r[i] += a * v[j];
      }
    return r;
  }
  Matrix operator+(const Matrix& o) const {
    check_dims(rows_, o.rows_, "matrix add");
    check_dims(cols_, o.cols_, "matrix add");
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_dims(rows_, o.rows_, "matrix sub");
    check_dims(cols_, o.cols_, "matrix sub");
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
  }
  friend Matrix operator*(const Scalar& s, const Matrix& m) {
    Matrix r(m);
    for (auto& x : r.data_) x = s * x;
    return r;
  }
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix pow(std::uint64_t e) const {
    require(square(), ErrorCode::InvalidInput, "power of a non-square matrix");
    Matrix r = identity(ring_, rows_), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  bool is_identity() const { return square() && *this == identity(ring_, rows_); }
  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  Matrix in(const Ring& target) const {
    Matrix r(target, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k].in(target);
    return r;
  }

 private:
  Ring ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

/// Bilinear evaluation v^T G w.
inline Scalar bilinear(const Matrix& g, const Vec& v, const Vec& w) {
  const Vec gw = g * w;
  check_dims(v.size(), gw.size(), "bilinear form");
  Scalar acc = Scalar::zero(g.ring());
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * gw[i];
  return acc;
}

/// Smith form over the local ring: U * A * V = D with U, V invertible and D
/// diagonal, its nonzero entries sorted by increasing valuation.
struct SmithForm {
  Matrix u, v, d;
  std::vector<int> diag_valuations;  // one per nonzero diagonal entry

  /// Number of unit diagonal entries.
  std::size_t unit_rank() const {
    std::size_t k = 0;
    while (k < diag_valuations.size() && diag_valuations[k] == 0) ++k;
    return k;
  }
};

inline SmithForm smith_form(const Matrix& a) {
  const Ring& r = a.ring();
  const std::size_t nr = a.rows(), nc = a.cols();
  Matrix d = a, u = Matrix::identity(r, nr), v = Matrix::identity(r, nc);
  std::vector<int> vals;
  const int n = r->n();
  for (std::size_t k = 0; k < std::min(nr, nc); ++k) {
    int best = n;
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < nr && best > 0; ++i)
      for (std::size_t j = k; j < nc; ++j) {
        const int e = d(i, j).valuation();
        if (e < best) {
          best = e;
          bi = i;
          bj = j;
          if (e == 0) break;
        }
      }
    if (best >= n) break;
    if (bi != k) {
      for (std::size_t j = 0; j < nc; ++j) std::swap(d(k, j), d(bi, j));
      for (std::size_t j = 0; j < nr; ++j) std::swap(u(k, j), u(bi, j));
    }
    if (bj != k) {
      for (std::size_t i = 0; i < nr; ++i) std::swap(d(i, k), d(i, bj));
      for (std::size_t i = 0; i < nc; ++i) std::swap(v(i, k), v(i, bj));
    }
    // Normalize the pivot to p^best.
    const Scalar unit_inv = d(k, k).div_p_power(best).inverse();
    for (std::size_t j = 0; j < nc; ++j) d(k, j) = unit_inv * d(k, j);
    for (std::size_t j = 0; j < nr; ++j) u(k, j) = unit_inv * u(k, j);
    for (std::size_t i = k + 1; i < nr; ++i) {
      if (d(i, k).is_zero()) continue;
      const Scalar f = d(i, k).div_p_power(best);
      for (std::size_t j = 0; j < nc; ++j) d(i, j) -= f * d(k, j);
      for (std::size_t j = 0; j < nr; ++j) u(i, j) -= f * u(k, j);
    }
    for (std::size_t j = k + 1; j < nc; ++j) {
      if (d(k, j).is_zero()) continue;
      const Scalar f = d(k, j).div_p_power(best);
      for (std::size_t i = 0; i < nr; ++i) d(i, j) -= f * d(i, k);
      for (std::size_t i = 0; i < nc; ++i) v(i, j) -= f * v(i, k);
    }
    vals.push_back(best);
  }
  return {std::move(u), std::move(v), std::move(d), std::move(vals)};
}

/// Determinant by row elimination with minimal-valuation pivots.
inline Scalar determinant(const Matrix& a) {
  require(a.square(), ErrorCode::InvalidInput, "determinant of non-square matrix");
  const Ring& r = a.ring();
  const std::size_t n = a.rows();
  Matrix m = a;
  Scalar det = Scalar::one(r);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t bi = k;
    int best = r->n();
    for (std::size_t i = k; i < n; ++i) {
      const int e = m(i, k).valuation();
      if (e < best) {
        best = e;
        bi = i;
      }
    }
    if (best >= r->n()) return Scalar::zero(r);
    if (bi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(bi, j));
      det = -det;
    }
    const Scalar pivot_unit_inv = m(k, k).div_p_power(best).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k).is_zero()) continue;
      const Scalar f = m(i, k).div_p_power(best) * pivot_unit_inv;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
    det *= m(k, k);
  }
  return det;
}

/// Inverse of a matrix with unit determinant.
inline Matrix inverse(const Matrix& a) {
  require(a.square(), ErrorCode::InvalidInput, "inverse of non-square matrix");
  const Ring& r = a.ring();
  const std::size_t n = a.rows();
  Matrix m = a, inv = Matrix::identity(r, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (m(i, k).is_unit()) {
        piv = i;
        break;
      }
    if (piv == n) fail(ErrorCode::NonUnit, "matrix is not invertible over W_n (determinant is not a unit)");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(k, j), m(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    const Scalar s = m(k, k).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) = s * m(k, j);
      inv(k, j) = s * inv(k, j);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k).is_zero()) continue;
      const Scalar f = m(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// Basis of the free part of ker(A). Throws PrecisionLoss when the kernel
/// has a torsion part, i.e. when its rank depends on the precision.
inline std::vector<Vec> kernel(const Matrix& a) {
  const SmithForm s = smith_form(a);
  for (int e : s.diag_valuations)
    if (e > 0)
      fail(ErrorCode::PrecisionLoss, "kernel rank is precision-dependent (elementary divisor p^" +
                                         std::to_string(e) + ")");
  std::vector<Vec> out;
  for (std::size_t j = s.diag_valuations.size(); j < a.cols(); ++j) out.push_back(s.v.column(j));
  return out;
}

/// Coefficients y with B y = x where the columns of B span a direct summand;
/// nullopt when x is not in their span.
inline std::optional<Vec> solve_in_span(const Matrix& b, const Vec& x) {
  check_dims(b.rows(), x.size(), "solve_in_span");
  const SmithForm s = smith_form(b);
  const Vec ux = s.u * x;
  const std::size_t k = s.diag_valuations.size();
  Vec y = zero_vec(b.ring(), b.cols());
  for (std::size_t i = 0; i < k; ++i) {
    const int e = s.diag_valuations[i];
    if (ux[i].valuation() < e) return std::nullopt;
    y[i] = ux[i].div_p_power(e);
  }
  for (std::size_t i = k; i < ux.size(); ++i)
    if (!ux[i].is_zero()) return std::nullopt;
  Vec sol = s.v * y;
  if (b * sol != x) return std::nullopt;  // non-unit divisors leave the top digits ambiguous
  return sol;
}

/// Indices of columns whose reductions mod p form a basis of the column
/// space of A mod p (leftmost choice).
inline std::vector<std::size_t> pivot_columns_mod_p(const Matrix& a) {
  const Ring res = a.ring()->residue();
  Matrix m = a.in(res);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t j = 0; j < m.cols() && row < m.rows(); ++j) {
    std::size_t piv = m.rows();
    for (std::size_t i = row; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) {
        piv = i;
        break;
      }
    if (piv == m.rows()) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(piv, c));
    const Scalar s = m(row, j).inverse();
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      if (m(i, j).is_zero()) continue;
      const Scalar f = m(i, j) * s;
      for (std::size_t c = j; c < m.cols(); ++c) m(i, c) -= f * m(row, c);
    }
    pivots.push_back(j);
    ++row;
  }
  return pivots;
}

inline std::size_t rank_mod_p(const Matrix& a) { return pivot_columns_mod_p(a).size(); }

inline std::size_t rank_mod_p(const Ring& r, std::size_t dim, const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  return rank_mod_p(Matrix::from_columns(r, dim, vs));
}

/// Some solution of A x = b over the residue field, or nullopt.
inline std::optional<Vec> solve_mod_p(const Matrix& a, const Vec& b) {
  const Ring res = a.ring()->residue();
  const std::size_t nr = a.rows(), nc = a.cols();
  Matrix m(res, nr, nc + 1);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = a(i, j).in(res);
    m(i, nc) = b.at(i).in(res);
  }
  std::vector<std::size_t> pivcols;
  std::size_t row = 0;
  for (std::size_t j = 0; j < nc && row < nr; ++j) {
    std::size_t piv = nr;
    for (std::size_t i = row; i < nr; ++i)
      if (!m(i, j).is_zero()) {
        piv = i;
        break;
      }
    if (piv == nr) continue;
    for (std::size_t c = 0; c <= nc; ++c) std::swap(m(row, c), m(piv, c));
    const Scalar s = m(row, j).inverse();
    for (std::size_t c = 0; c <= nc; ++c) m(row, c) = s * m(row, c);
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == row || m(i, j).is_zero()) continue;
      const Scalar f = m(i, j);
      for (std::size_t c = 0; c <= nc; ++c) m(i, c) -= f * m(row, c);
    }
    pivcols.push_back(j);
    ++row;
  }
  for (std::size_t i = row; i < nr; ++i)
    if (!m(i, nc).is_zero()) return std::nullopt;
  Vec x = zero_vec(res, nc);
  for (std::size_t k = 0; k < pivcols.size(); ++k) x[pivcols[k]] = m(k, nc);
  return x;
}

/// Characteristic polynomial det(tI - A), coefficients low to high degree.
/// Berkowitz's algorithm is division-free, so it is exact over W_n.
inline Vec char_poly(const Matrix& a) {
  require(a.square(), ErrorCode::InvalidInput, "characteristic polynomial of non-square matrix");
  const Ring& r = a.ring();
  const std::size_t n = a.rows();
  Vec prev{Scalar::one(r)};  // high to low degree
  for (std::size_t k = 0; k < n; ++k) {
    // Leading (k+1)x(k+1) block split as [[A_k, S], [R, a_kk]].
    Vec col(k + 2, Scalar::zero(r));
    col[0] = Scalar::one(r);
    col[1] = -a(k, k);
    Vec s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = a(i, k);
    for (std::size_t j = 2; j < k + 2; ++j) {
      Scalar rs = Scalar::zero(r);
      for (std::size_t i = 0; i < k; ++i) rs += a(k, i) * s[i];
      col[j] = -rs;
      Vec next = zero_vec(r, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t t = 0; t < k; ++t) next[i] += a(i, t) * s[t];
      s = std::move(next);
    }
    Vec cur = zero_vec(r, k + 2);
    for (std::size_t i = 0; i < k + 2; ++i)
      for (std::size_t j = 0; j < prev.size() && j <= i; ++j) cur[i] += col[i - j] * prev[j];
    prev = std::move(cur);
  }
  return Vec(prev.rbegin(), prev.rend());
}

}  // namespace k3lift
