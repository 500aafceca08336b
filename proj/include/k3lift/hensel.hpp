#pragma once

// Hensel/Newton solvers: simple roots of polynomials over W_n, the
// near-isotropic correction w = u + p a v, and single-step
// orthogonalization against a class.

#include <cstdint>
#include <string>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"

namespace k3lift {

/// Polynomial with coefficients low to high degree.
using Poly = std::vector<Scalar>;

inline Scalar poly_eval(const Poly& f, const Scalar& x) {
  Scalar acc = Scalar::zero(x.ring());
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

inline Poly poly_derivative(const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(Scalar::from_int(f[i].ring(), static_cast<std::int64_t>(i)) * f[i]);
  if (d.empty() && !f.empty()) d.push_back(Scalar::zero(f[0].ring()));
  return d;
}

struct HenselRoot {
  Scalar root;
  int steps = 0;
};

inline int newton_step_bound(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k + 1;
}

/// Newton iteration from a simple root x0 of f mod p. The returned root is
/// the unique one congruent to x0 mod p.
inline HenselRoot hensel_root(const Poly& f, const Scalar& x0) {
  require(!f.empty(), ErrorCode::InvalidInput, "empty polynomial");
  const Poly df = poly_derivative(f);
  if (poly_eval(f, x0).valuation() < 1) fail(ErrorCode::NotApproximateRoot, "f(x0) is not divisible by p");
  if (!poly_eval(df, x0).is_unit()) fail(ErrorCode::NonSimpleRoot, "f'(x0) is not a unit");
  Scalar x = x0;
  const int bound = newton_step_bound(x0.ring()->n());
  int steps = 0;
  while (!poly_eval(f, x).is_zero()) {
    if (steps == bound) fail(ErrorCode::NoConvergence, "Newton iteration exceeded its step bound");
    x = x - poly_eval(f, x) * poly_eval(df, x).inverse();
    ++steps;
  }
  return {x, steps};
}

struct IsotropicCombination {
  Scalar a;  // canonical representative modulo p^{n-1}
  Vec w;     // u + p a v
};

/// Given u.u = 0 mod p and u.v a unit, finds a with (u + p a v)^2 = 0 mod p^n.
/// Dividing the norm by p gives (u.u)/p + 2a(u.v) + p a^2 (v.v) = 0, whose
/// derivative 2(u.v) is a unit since p is odd; Newton starts at the root of
/// the linear part, a = -(u.u)/(2p(u.v)).
inline IsotropicCombination isotropic_combination(const QuadLattice& l, const Vec& u, const Vec& v) {
  const Ring& r = l.ring();
  const Scalar uu = l.norm(u), uv = l.pairing(u, v), vv = l.norm(v);
  if (!uv.is_unit()) fail(ErrorCode::BadPairing, "u.v = " + uv.to_string() + " is not a unit");
  if (uu.valuation() < 1) fail(ErrorCode::NotNearIsotropic, "u.u = " + uu.to_string() + " is not divisible by p");
  const Scalar p = Scalar::from_int(r, static_cast<std::int64_t>(r->p()));
  const Scalar two = Scalar::from_int(r, 2);
  Scalar a = Scalar::zero(r);
  if (!uu.is_zero()) {
    const Scalar q = uu.div_p_power(1);
    const Poly g{q, two * uv, p * vv};
    a = hensel_root(g, -(q * (two * uv).inverse())).root;
  }
  a = a.truncate(r->n() - 1);
  const Vec w = u + (p * a) * v;
  return {a, w};
}

struct Orthogonalized {
  Scalar a;
  Vec vector;  // v + a u
};

/// v + a u with (v + a u).c = 0, where c.u must be a unit.
inline Orthogonalized orthogonalize_against(const QuadLattice& l, const Vec& c, const Vec& v, const Vec& u) {
  const Scalar cu = l.pairing(c, u);
  if (!cu.is_unit()) fail(ErrorCode::NonUnitPivot, "c.u = " + cu.to_string() + " is not a unit");
  const Scalar a = -(l.pairing(v, c) * cu.inverse());
  return {a, v + a * u};
}

}  // namespace k3lift
