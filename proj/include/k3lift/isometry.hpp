#pragma once

// Finite-order isometries over W_n and their eigenspace decompositions.
//
// For an automorphism A with A^N = 1 and p not dividing N, the averaging
// operators e_z = N^{-1} sum_i z^{-i} A^i over the N-th roots of unity z are
// orthogonal idempotents summing to the identity, and e_z projects onto the
// z-eigenspace. Since idempotents have free images over a local ring, each
// eigenspace is a direct summand and the module splits as their sum.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"

namespace k3lift {

struct Isometry {
  QuadLattice lattice;
  Matrix matrix;
  std::optional<std::uint64_t> order;
};

/// A^T G A == G.
inline bool verify_isometry(const QuadLattice& l, const Matrix& a) {
  require(a.square() && a.rows() == l.rank(), ErrorCode::InvalidInput, "isometry dimension does not match lattice");
  return a.transpose() * l.gram() * a == l.gram();
}

/// Least N <= bound with A^N = 1, or nullopt if it exceeds the bound.
inline std::optional<std::uint64_t> order(const Matrix& a, std::uint64_t bound) {
  require(bound >= 1, ErrorCode::InvalidInput, "order bound must be >= 1");
  Matrix cur = a;
  for (std::uint64_t k = 1; k <= bound; ++k) {
    if (cur.is_identity()) return k;
    cur = cur * a;
  }
  return std::nullopt;
}

struct CharPolyReport {
  Vec coeffs;                                          // low to high degree
  std::vector<std::vector<std::int64_t>> integer_reps;  // centered representatives
};

/// Characteristic polynomial together with centered integer representatives.
/// The representatives are candidates only: integrality cannot be certified
/// at finite precision.
inline CharPolyReport char_poly_report(const Matrix& a) {
  CharPolyReport rep;
  rep.coeffs = char_poly(a);
  for (const auto& c : rep.coeffs) rep.integer_reps.push_back(c.centered());
  return rep;
}

struct EigenComponent {
  Scalar zeta;
  std::vector<Vec> basis;
  Matrix projector;
};

struct EigenSplit {
  std::uint64_t order = 1;
  std::vector<EigenComponent> components;

  const EigenComponent* find(const Scalar& z) const {
    for (const auto& c : components)
      if (c.zeta == z) return &c;
    return nullptr;
  }
  /// Concatenated component bases as matrix columns.
  Matrix basis_matrix(const Ring& r, std::size_t dim) const {
    std::vector<Vec> all;
    for (const auto& c : components)
      for (const auto& b : c.basis) all.push_back(b);
    return Matrix::from_columns(r, dim, all);
  }
};

namespace detail {

inline void check_tame_order(const Matrix& a, std::uint64_t n) {
  const Ring& r = a.ring();
  require(n >= 1, ErrorCode::InvalidInput, "order must be positive");
  if (n % r->p() == 0)
    fail(ErrorCode::NotTame, "order " + std::to_string(n) + " is divisible by p = " + std::to_string(r->p()));
  if ((r->residue_size() - 1) % n != 0)
    fail(ErrorCode::InsufficientResidueField,
         std::to_string(n) + " does not divide p^m - 1 = " + std::to_string(r->residue_size() - 1) + "; enlarge m");
  require(a.square(), ErrorCode::InvalidInput, "isometry matrix must be square");
  require(a.pow(n).is_identity(), ErrorCode::InvalidInput, "A^N is not the identity for N = " + std::to_string(n));
}

inline std::vector<Matrix> powers(const Matrix& a, std::uint64_t n) {
  std::vector<Matrix> out{Matrix::identity(a.ring(), a.rows())};
  for (std::uint64_t i = 1; i < n; ++i) out.push_back(out.back() * a);
  return out;
}

inline Matrix projector_from_powers(const std::vector<Matrix>& pw, const Scalar& zeta) {
  const Ring& r = zeta.ring();
  const std::uint64_t n = pw.size();
  Matrix e(r, pw[0].rows(), pw[0].cols());
  const Scalar zinv = zeta.inverse();
  Scalar c = Scalar::one(r);
  for (std::uint64_t i = 0; i < n; ++i) {
    e = e + c * pw[i];
    c *= zinv;
  }
  return Scalar::from_int(r, static_cast<std::int64_t>(n)).inverse() * e;
}

}  // namespace detail

/// The idempotent e_z = N^{-1} sum_i z^{-i} A^i.
inline Matrix eigen_projector(const Matrix& a, std::uint64_t n, const Scalar& zeta) {
  detail::check_tame_order(a, n);
  return detail::projector_from_powers(detail::powers(a, n), zeta);
}

/// Splits the module into eigenspaces of A, which must satisfy A^N = 1 with
/// p not dividing N and N | p^m - 1. Components with zero image are omitted;
/// the rest are listed in the order of `nth_roots_of_unity`.
inline EigenSplit eigen_split(const Matrix& a, std::uint64_t n) {
  detail::check_tame_order(a, n);
  const Ring& r = a.ring();
  const auto pw = detail::powers(a, n);
  EigenSplit split;
  split.order = n;
  for (const Scalar& z : nth_roots_of_unity(r, n)) {
    Matrix e = detail::projector_from_powers(pw, z);
    if (e.is_zero()) continue;
    EigenComponent comp{z, {}, e};
    for (std::size_t j : pivot_columns_mod_p(e)) comp.basis.push_back(e.column(j));
    split.components.push_back(std::move(comp));
  }
  return split;
}

inline EigenSplit eigen_split(const Isometry& iso) {
  require(iso.order.has_value(), ErrorCode::InvalidInput, "isometry order not declared");
  return eigen_split(iso.matrix, *iso.order);
}

struct SplitChecks {
  bool idempotent = true;    // e_z^2 = e_z
  bool orthogonal = true;    // e_z e_w = 0 for z != w
  bool sum_identity = true;  // sum of e_z is the identity
  bool eigen = true;         // A b = z b on every basis vector
  bool direct_sum = true;    // concatenated bases form a basis
  bool ok() const { return idempotent && orthogonal && sum_identity && eigen && direct_sum; }
};

inline SplitChecks check_split(const Matrix& a, const EigenSplit& s) {
  const Ring& r = a.ring();
  const std::size_t dim = a.rows();
  SplitChecks c;
  Matrix sum(r, dim, dim);
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    const EigenComponent& ci = s.components[i];
    sum = sum + ci.projector;
    c.idempotent = c.idempotent && ci.projector * ci.projector == ci.projector;
    for (std::size_t j = 0; j < s.components.size(); ++j)
      if (i != j) c.orthogonal = c.orthogonal && (ci.projector * s.components[j].projector).is_zero();
    for (const auto& b : ci.basis) c.eigen = c.eigen && a * b == ci.zeta * b;
  }
  c.sum_identity = sum.is_identity();
  const Matrix b = s.basis_matrix(r, dim);
  c.direct_sum = b.cols() == dim && determinant(b).is_unit();
  return c;
}

struct LiftedEigenvector {
  Vec vector;
  Scalar eigenvalue;
};

/// Eigenvalue of A mod p on the nonzero residue vector vbar, or nullopt if
/// vbar is not an eigenvector. Both live in the residue ring.
inline std::optional<Scalar> residue_eigenvalue(const Matrix& a, const Vec& vbar) {
  const Ring res = a.ring()->residue();
  const Matrix ab = a.in(res);
  const Vec v = vec_in(vbar, res);
  if (is_zero(v)) return std::nullopt;
  const Vec av = ab * v;
  std::size_t j = 0;
  while (v[j].is_zero()) ++j;
  const Scalar z = av[j] * v[j].inverse();
  if (av != z * v) return std::nullopt;
  return z;
}

/// Lifts an eigenvector of A mod p to an exact eigenvector over W_n with the
/// same reduction, by applying the projector of the Teichmüller eigenvalue.
inline LiftedEigenvector lift_eigenvector(const Matrix& a, std::uint64_t n, const Vec& vbar) {
  detail::check_tame_order(a, n);
  const Ring& r = a.ring();
  check_dims(vbar.size(), a.rows(), "lift_eigenvector");
  const auto zbar = residue_eigenvalue(a, vbar);
  if (!zbar) fail(ErrorCode::NotEigenvector, "vector is not an eigenvector of A mod p");
  const Scalar zeta = teichmuller(zbar->in(r));
  const Vec lift = vec_in(vec_in(vbar, r->residue()), r);
  const Vec w = eigen_projector(a, n, zeta) * lift;
  if (valuation(w) > 0) fail(ErrorCode::ProjectionCollapse, "projected lift vanishes mod p");
  if (vec_in(w, r->residue()) != vec_in(lift, r->residue()))
    fail(ErrorCode::ProjectionCollapse, "projected lift changed the residue vector");
  return {w, zeta};
}

}  // namespace k3lift
