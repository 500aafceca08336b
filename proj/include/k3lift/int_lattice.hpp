#pragma once

// Integral quadratic lattices: the K3-relevant standard lattices, discriminant
// groups via Smith normal form, signatures, and saturated orthogonal
// complements. Intermediate arithmetic uses arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/errors.hpp"

namespace k3lift {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using IntVec = std::vector<std::int64_t>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

enum class StandardLattice { U, E8, K3 };

class IntLattice {
 public:
  IntLattice() = default;
  explicit IntLattice(IntMatrix gram) : gram_(std::move(gram)) {
    const std::size_t n = gram_.size();
    require(n > 0, ErrorCode::InvalidInput, "lattice rank must be positive");
    for (std::size_t i = 0; i < n; ++i) {
      require(gram_[i].size() == n, ErrorCode::InvalidInput, "Gram matrix must be square");
      for (std::size_t j = 0; j < i; ++j)
        require(gram_[i][j] == gram_[j][i], ErrorCode::InvalidInput, "Gram matrix must be symmetric");
    }
  }

  std::size_t rank() const { return gram_.size(); }
  const IntMatrix& gram() const { return gram_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return gram_[i][j]; }

  bool is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram_[i][i] % 2 != 0) return false;
    return true;
  }

  BigInt pairing(const IntVec& v, const IntVec& w) const {
    require(v.size() == rank() && w.size() == rank(), ErrorCode::InvalidInput, "vector length != rank");
    BigInt acc = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) acc += BigInt(v[i]) * gram_[i][j] * w[j];
    }
    return acc;
  }
  bool is_isotropic(const IntVec& v) const { return pairing(v, v) == 0; }

  friend IntLattice direct_sum(const IntLattice& a, const IntLattice& b) {
    const std::size_t n = a.rank() + b.rank();
    IntMatrix g(n, IntVec(n, 0));
    for (std::size_t i = 0; i < a.rank(); ++i)
      for (std::size_t j = 0; j < a.rank(); ++j) g[i][j] = a(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
      for (std::size_t j = 0; j < b.rank(); ++j) g[a.rank() + i][a.rank() + j] = b(i, j);
    return IntLattice(std::move(g));
  }

 private:
  IntMatrix gram_;
};

inline IntLattice diagonal_lattice(const IntVec& d) {
  IntMatrix g(d.size(), IntVec(d.size(), 0));
  for (std::size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
  return IntLattice(std::move(g));
}

/// U is the hyperbolic plane, E8 the negative definite root lattice (Bourbaki
/// labelling), K3 = U^3 + E8^2.
inline IntLattice standard_lattice(StandardLattice which) {
  switch (which) {
    case StandardLattice::U:
      return IntLattice({{0, 1}, {1, 0}});
    case StandardLattice::E8: {
      IntMatrix g(8, IntVec(8, 0));
      for (int i = 0; i < 8; ++i) g[i][i] = -2;
      const int edges[7][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
      for (const auto& e : edges) g[e[0]][e[1]] = g[e[1]][e[0]] = 1;
      return IntLattice(std::move(g));
    }
    case StandardLattice::K3: {
      const IntLattice u = standard_lattice(StandardLattice::U);
      const IntLattice e8 = standard_lattice(StandardLattice::E8);
      return direct_sum(direct_sum(direct_sum(u, u), direct_sum(u, e8)), e8);
    }
  }
  fail(ErrorCode::InvalidInput, "unknown standard lattice");
}

namespace detail {

using BigMatrix = std::vector<std::vector<BigInt>>;

inline BigMatrix to_big(const IntMatrix& m) {
  BigMatrix b(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto x : m[i]) b[i].push_back(BigInt(x));
  return b;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Extended gcd with g >= 0: s*a + t*b = g.
inline void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& s, BigInt& t) {
  BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const BigInt q = floor_div(r0, r1);
    BigInt tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  g = r0;
  s = s0;
  t = t0;
}

/// Row-style Hermite normal form (rows are the generators), zero rows removed.
inline BigMatrix hermite_rows(BigMatrix m) {
  const std::size_t nr = m.size();
  if (nr == 0) return m;
  const std::size_t nc = m[0].size();
  std::size_t row = 0;
  for (std::size_t j = 0; j < nc && row < nr; ++j) {
    for (std::size_t i = row + 1; i < nr; ++i) {
      if (m[i][j] == 0) continue;
      BigInt g, s, t;
      ext_gcd(m[row][j], m[i][j], g, s, t);
      const BigInt a = m[row][j] / g, b = m[i][j] / g;
      for (std::size_t c = 0; c < nc; ++c) {
        const BigInt x = m[row][c], y = m[i][c];
        m[row][c] = s * x + t * y;
        m[i][c] = -b * x + a * y;
      }
    }
    if (m[row][j] == 0) continue;
    if (m[row][j] < 0)
      for (auto& x : m[row]) x = -x;
    for (std::size_t i = 0; i < row; ++i) {
      const BigInt q = floor_div(m[i][j], m[row][j]);
      if (q != 0)
        for (std::size_t c = 0; c < nc; ++c) m[i][c] -= q * m[row][c];
    }
    ++row;
  }
  m.resize(row);
  return m;
}

}  // namespace detail

/// Finite abelian group (Z/d_1) x ... x (Z/d_k) with d_1 | d_2 | ... .
struct DiscriminantGroup {
  std::vector<BigInt> elementary_divisors;  // unit divisors dropped

  bool trivial() const { return elementary_divisors.empty(); }
  /// Group order.
  BigInt order() const {
    BigInt o = 1;
    for (const auto& d : elementary_divisors) o *= d;
    return o;
  }
  /// sigma when the group is (Z/p)^{2 sigma}; -1 otherwise.
  int artin_invariant(std::int64_t p) const {
    if (elementary_divisors.size() % 2 != 0) return -1;
    for (const auto& d : elementary_divisors)
      if (d != p) return -1;
    return static_cast<int>(elementary_divisors.size() / 2);
  }
};

/// Absolute elementary divisors (Smith normal form diagonal) of an integer
/// matrix, including zeros for rank deficiency.
inline std::vector<BigInt> smith_diagonal(const IntMatrix& a) {
  detail::BigMatrix m = detail::to_big(a);
  const std::size_t nr = m.size(), nc = nr ? m[0].size() : 0;
  std::vector<BigInt> diag;
  for (std::size_t k = 0; k < std::min(nr, nc); ++k) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t bi = nr, bj = nc;
      for (std::size_t i = k; i < nr; ++i)
        for (std::size_t j = k; j < nc; ++j)
          if (m[i][j] != 0 && (bi == nr || abs(m[i][j]) < abs(m[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == nr) {
        for (std::size_t t = k; t < std::min(nr, nc); ++t) diag.push_back(0);
        return diag;
      }
      std::swap(m[k], m[bi]);
      for (auto& r : m) std::swap(r[k], r[bj]);
      bool clean = true;
      for (std::size_t i = k + 1; i < nr; ++i) {
        const BigInt q = detail::floor_div(m[i][k], m[k][k]);
        if (q != 0)
          for (std::size_t j = k; j < nc; ++j) m[i][j] -= q * m[k][j];
        if (m[i][k] != 0) clean = false;
      }
      for (std::size_t j = k + 1; j < nc; ++j) {
        const BigInt q = detail::floor_div(m[k][j], m[k][k]);
        if (q != 0)
          for (std::size_t i = k; i < nr; ++i) m[i][j] -= q * m[i][k];
        if (m[k][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Enforce the divisibility chain: fold a non-divisible row into row k.
      std::size_t bad = nr;
      for (std::size_t i = k + 1; i < nr && bad == nr; ++i)
        for (std::size_t j = k + 1; j < nc; ++j)
          if (m[i][j] % m[k][k] != 0) {
            bad = i;
            break;
          }
      if (bad == nr) break;
      for (std::size_t j = k; j < nc; ++j) m[k][j] += m[bad][j];
    }
    diag.push_back(abs(m[k][k]));
  }
  return diag;
}

inline DiscriminantGroup discriminant_group(const IntLattice& l) {
  DiscriminantGroup g;
  for (const auto& d : smith_diagonal(l.gram())) {
    if (d == 0) fail(ErrorCode::DegenerateForm, "Gram matrix is singular");
    if (d != 1) g.elementary_divisors.push_back(d);
  }
  return g;
}

inline BigInt determinant(const IntLattice& l) {
  // Fraction-free Bareiss elimination.
  detail::BigMatrix m = detail::to_big(l.gram());
  const std::size_t n = m.size();
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[k], m[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

struct Signature {
  std::size_t positive = 0, negative = 0, zero = 0;
  bool operator==(const Signature&) const = default;
};

/// Sylvester signature by symmetric elimination over Q.
inline Signature signature(const IntLattice& l) {
  const std::size_t n = l.rank();
  std::vector<std::vector<BigRational>> a(n, std::vector<BigRational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = l(i, j);
  std::vector<bool> done(n, false);
  Signature sig;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && a[i][i] != 0) {
        piv = i;
        break;
      }
    if (piv == n) {
      // All remaining diagonal entries vanish: e_i += e_j makes a_ii = 2 a_ij.
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) break;
      for (std::size_t k = 0; k < n; ++k) a[pi][k] += a[pj][k];
      for (std::size_t k = 0; k < n; ++k) a[k][pi] += a[k][pj];
      piv = pi;
    }
    const BigRational d = a[piv][piv];
    (d > 0 ? sig.positive : sig.negative)++;
    done[piv] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || a[i][piv] == 0) continue;
      const BigRational f = a[i][piv] / d;
      for (std::size_t k = 0; k < n; ++k) a[i][k] -= f * a[piv][k];
      for (std::size_t k = 0; k < n; ++k) a[k][i] -= f * a[k][piv];
    }
  }
  sig.zero = n - sig.positive - sig.negative;
  return sig;
}

/// Saturated basis of {x : x.s = 0 for all s in S}, in Hermite normal form.
inline std::vector<IntVec> orthogonal_complement(const IntLattice& l, const std::vector<IntVec>& s) {
  const std::size_t r = l.rank();
  // Rows of M are s^T G.
  detail::BigMatrix m;
  for (const auto& v : s) {
    require(v.size() == r, ErrorCode::InvalidInput, "vector length != rank");
    std::vector<BigInt> row(r, 0);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) row[j] += BigInt(v[i]) * l(i, j);
    m.push_back(std::move(row));
  }
  // Unimodular column operations: M V = [H | 0]; trailing columns of V span
  // the kernel and, V being unimodular, do so saturatedly.
  detail::BigMatrix v(r, std::vector<BigInt>(r, 0));
  for (std::size_t i = 0; i < r; ++i) v[i][i] = 1;
  std::size_t c = 0;
  for (std::size_t i = 0; i < m.size() && c < r; ++i) {
    for (std::size_t j = c + 1; j < r; ++j) {
      if (m[i][j] == 0) continue;
      BigInt g, s1, t1;
      detail::ext_gcd(m[i][c], m[i][j], g, s1, t1);
      const BigInt a = m[i][c] / g, b = m[i][j] / g;
      auto combine = [&](detail::BigMatrix& x) {
        for (auto& row : x) {
          const BigInt xc = row[c], xj = row[j];
          row[c] = s1 * xc + t1 * xj;
          row[j] = -b * xc + a * xj;
        }
      };
      combine(m);
      combine(v);
    }
    if (m[i][c] != 0) ++c;
  }
  detail::BigMatrix basis;
  for (std::size_t j = c; j < r; ++j) {
    std::vector<BigInt> col(r);
    for (std::size_t i = 0; i < r; ++i) col[i] = v[i][j];
    basis.push_back(std::move(col));
  }
  basis = detail::hermite_rows(std::move(basis));
  std::vector<IntVec> out;
  for (const auto& b : basis) {
    IntVec x;
    for (const auto& e : b) {
      require(e <= INT64_MAX && e >= INT64_MIN, ErrorCode::InvalidInput, "complement basis overflows int64");
      x.push_back(static_cast<std::int64_t>(e));
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace k3lift
