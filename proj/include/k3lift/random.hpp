#pragma once

// Seeded generators for lattices, isometries, frames and connections. Used by
// the property tests and by the CLI demos; std::mt19937_64 keeps the output
// reproducible for a fixed seed.

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "k3lift/crystal_family.hpp"
#include "k3lift/errors.hpp"
#include "k3lift/isometry.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"
#include "k3lift/period_domain.hpp"

namespace k3lift::random {

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

/// Uniform element of p^k W_n.
inline Scalar scalar(const Ring& r, Rng& rng, int min_valuation = 0) {
  if (min_valuation >= r->n()) return Scalar::zero(r);
  std::vector<std::int64_t> c;
  const std::uint64_t pk = r->p_power(min_valuation);
  for (int i = 0; i < r->m(); ++i)
    c.push_back(static_cast<std::int64_t>(uniform(rng, r->pn() / pk) * pk));
  return Scalar::from_coeffs(r, c);
}

inline Scalar unit(const Ring& r, Rng& rng) {
  for (;;) {
    Scalar s = scalar(r, rng);
    if (s.is_unit()) return s;
  }
}

inline Vec vector(const Ring& r, std::size_t dim, Rng& rng, int min_valuation = 0) {
  Vec v;
  for (std::size_t i = 0; i < dim; ++i) v.push_back(scalar(r, rng, min_valuation));
  return v;
}

inline Matrix matrix(const Ring& r, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scalar(r, rng);
  return m;
}

/// Uniform invertible matrix (rejection sampling on the determinant).
inline Matrix invertible(const Ring& r, std::size_t dim, Rng& rng) {
  for (;;) {
    Matrix m = matrix(r, dim, dim, rng);
    if (determinant(m).is_unit()) return m;
  }
}

inline Matrix symmetric_unimodular(const Ring& r, std::size_t dim, Rng& rng) {
  for (;;) {
    Matrix m(r, dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) m(i, j) = m(j, i) = scalar(r, rng);
    if (determinant(m).is_unit()) return m;
  }
}

struct TameIsometry {
  QuadLattice lattice;
  Matrix matrix;
  std::uint64_t order;
};

/// A perfect lattice of the given rank with an isometry A satisfying A^N = 1.
/// Built as an orthogonal sum of hyperbolic planes carrying diag(z, z^-1) and
/// rank-1 blocks carrying +-1, then moved to a random basis.
/// Requires N | p^m - 1.
inline TameIsometry tame_isometry(const Ring& r, std::size_t rank, std::uint64_t n, Rng& rng) {
  require(rank >= 1, ErrorCode::InvalidInput, "rank must be positive");
  const std::vector<Scalar> roots = nth_roots_of_unity(r, n);
  const Scalar minus_one = -Scalar::one(r);
  Matrix g0(r, rank, rank), a0(r, rank, rank);
  std::size_t i = 0;
  while (i < rank) {
    const bool plane = rank - i >= 2 && uniform(rng, 4) != 0;
    if (plane) {
      const Scalar z = roots[uniform(rng, roots.size())];
      g0(i, i + 1) = g0(i + 1, i) = Scalar::one(r);
      a0(i, i) = z;
      a0(i + 1, i + 1) = z.inverse();
      i += 2;
    } else {
      g0(i, i) = unit(r, rng);
      a0(i, i) = (n % 2 == 0 && uniform(rng, 2) == 0) ? minus_one : Scalar::one(r);
      i += 1;
    }
  }
  const Matrix p = invertible(r, rank, rng);
  const Matrix pinv = inverse(p);
  return {QuadLattice(p.transpose() * g0 * p), pinv * a0 * p, n};
}

/// Frame with Gram matrix [[0,0,1],[0,H,b],[1,b^T,c]] in frame coordinates,
/// expressed in a random ambient basis.
inline FrameRef period_frame(const Ring& r, std::size_t rank, Rng& rng) {
  require(rank >= 3, ErrorCode::InvalidInput, "frame rank must be at least 3");
  const std::size_t d = rank - 2;
  const Matrix h = symmetric_unimodular(r, d, rng);
  Matrix gf(r, rank, rank);
  gf(0, rank - 1) = gf(rank - 1, 0) = Scalar::one(r);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) gf(i + 1, j + 1) = h(i, j);
    gf(i + 1, rank - 1) = gf(rank - 1, i + 1) = scalar(r, rng);
  }
  gf(rank - 1, rank - 1) = scalar(r, rng);
  // Ambient basis e, frame basis v = e B: ambient Gram is B^-T Gf B^-1.
  const Matrix b = invertible(r, rank, rng);
  const Matrix binv = inverse(b);
  return std::make_shared<const PeriodFrame>(QuadLattice(binv.transpose() * gf * binv), b);
}

/// Commuting D_i = Q^-1 C_i Q with C_i diagonal. The columns of Q are
/// w, C_1 w + p y_1, ..., C_d w + p y_d, z, so D_i v_1 = v_{i+1} mod p.
inline ConnectionData connection(const FrameRef& frame, Rng& rng) {
  const Ring& r = frame->ring();
  const std::size_t rank = frame->rank(), d = frame->dimension();
  const Scalar p = Scalar::from_int(r, static_cast<std::int64_t>(r->p()));
  for (;;) {
    std::vector<Matrix> cs;
    for (std::size_t i = 0; i < d; ++i) cs.push_back(Matrix::diagonal(r, vector(r, rank, rng)));
    const Vec w = vector(r, rank, rng);
    std::vector<Vec> cols{w};
    for (const auto& c : cs) cols.push_back(c * w + p * vector(r, rank, rng));
    cols.push_back(vector(r, rank, rng));
    const Matrix q = Matrix::from_columns(r, rank, cols);
    if (!determinant(q).is_unit()) continue;
    const Matrix qinv = inverse(q);
    ConnectionData conn{frame, {}};
    for (const auto& c : cs) conn.differentials.push_back(qinv * c * q);
    return conn;
  }
}

}  // namespace k3lift::random
