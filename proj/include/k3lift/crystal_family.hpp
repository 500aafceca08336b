#pragma once

// Toy model of the de Rham bundle over the deformation space: constant,
// commuting connection matrices D_1..D_d acting on a period frame of rank
// d + 2, with v_{i+1} = D_i v_1 mod p (the basis adapted to gr^2 of the
// connection). The parallel transport to the point t_i = p a_i is
//
//   chi(y) = sum_m gamma_{m_1}(p a_1) ... gamma_{m_d}(p a_d) D^m y,
//
// gamma_k(x) = x^k / k!, and the period map sends the point to the
// normalized coordinates of chi(v_1).

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"
#include "k3lift/period_domain.hpp"

namespace k3lift {

struct ConnectionData {
  FrameRef frame;
  std::vector<Matrix> differentials;  // D_1..D_d in frame coordinates

  std::size_t dimension() const { return differentials.size(); }
};

/// Throws InvalidConnection unless the data is integrable (pairwise
/// commuting) and transversal with the adapted basis.
inline void validate(const ConnectionData& c) {
  require(c.frame != nullptr, ErrorCode::InvalidInput, "connection has no frame");
  const std::size_t r = c.frame->rank(), d = c.dimension();
  require(d == r - 2, ErrorCode::InvalidConnection,
          "need r - 2 = " + std::to_string(r - 2) + " differentials, got " + std::to_string(d));
  for (const auto& m : c.differentials)
    require(m.rows() == r && m.cols() == r, ErrorCode::InvalidInput, "differential must be r x r");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      require(c.differentials[i] * c.differentials[j] == c.differentials[j] * c.differentials[i],
              ErrorCode::InvalidConnection,
              "D_" + std::to_string(i + 1) + " and D_" + std::to_string(j + 1) + " do not commute");
  const Ring& ring = c.frame->ring();
  const Ring res = ring->residue();
  const Vec v1 = unit_vec(ring, r, 0);
  for (std::size_t i = 0; i < d; ++i) {
    const Vec dv = vec_in(c.differentials[i] * v1, res);
    require(dv == unit_vec(res, r, i + 1), ErrorCode::InvalidConnection,
            "D_" + std::to_string(i + 1) + " v_1 is not v_" + std::to_string(i + 2) + " mod p");
  }
}

/// Entries g_i = p a_i of a W-point of the deformation space.
struct DeformationPoint {
  Vec values;
};

inline void check_point(const Vec& values, std::size_t d) {
  check_dims(values.size(), d, "deformation point");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i].valuation() < 1)
      fail(ErrorCode::ValuationViolation, "entry " + std::to_string(i + 1) + " = " + values[i].to_string() +
                                              " is not in pW");
}

/// Least M with M - floor((M-1)/(p-1)) >= n. Since
/// v_p(gamma_k(pa)) >= k - floor((k-1)/(p-1)), every term of total degree
/// >= M vanishes modulo p^n.
inline int truncation_degree(int n, std::uint64_t p) {
  for (int m = 1;; ++m)
    if (m - static_cast<int>((m - 1) / static_cast<int>(p - 1)) >= n) return m;
}

/// gamma_k(g) = g^k / k! for g in pW, computed exactly as
/// p^{k - v_p(k!)} a^k u^{-1} with g = p a and k! = p^{v_p(k!)} u.
inline Scalar divided_power(const Scalar& g, int k) {
  const Ring& r = g.ring();
  if (k == 0) return Scalar::one(r);
  if (g.valuation() < 1) fail(ErrorCode::ValuationViolation, "divided powers need an argument in pW");
  const std::uint64_t p = r->p();
  int vfact = 0;
  Scalar unit = Scalar::one(r);
  for (int j = 2; j <= k; ++j) {
    std::uint64_t t = static_cast<std::uint64_t>(j);
    while (t % p == 0) {
      t /= p;
      ++vfact;
    }
    unit *= Scalar::from_int(r, static_cast<std::int64_t>(t));
  }
  const Scalar a = g.div_p_power(1);
  const Scalar ppow = Scalar::from_int(r, static_cast<std::int64_t>(p)).pow(static_cast<std::uint64_t>(k - vfact));
  return ppow * a.pow(static_cast<std::uint64_t>(k)) * unit.inverse();
}

/// Parallel transport of y (frame coordinates) from the base point to g.
/// Multi-indices are summed in lexicographic order up to total degree
/// truncation_degree(n, p) - 1.
inline Vec transport(const ConnectionData& c, const DeformationPoint& g, const Vec& y) {
  const Ring& r = c.frame->ring();
  const std::size_t d = c.dimension();
  check_point(g.values, d);
  check_dims(y.size(), c.frame->rank(), "transport vector");
  const int budget = truncation_degree(r->n(), r->p()) - 1;
  std::vector<std::vector<Scalar>> gammas(d);
  for (std::size_t j = 0; j < d; ++j)
    for (int e = 0; e <= budget; ++e) gammas[j].push_back(divided_power(g.values[j], e));

  Vec acc = zero_vec(r, y.size());
  std::function<void(std::size_t, int, const Scalar&, const Vec&)> walk =
      [&](std::size_t j, int left, const Scalar& coeff, const Vec& v) {
        if (coeff.is_zero() || is_zero(v)) return;
        if (j == d) {
          acc = acc + coeff * v;
          return;
        }
        Vec cur = v;
        for (int e = 0; e <= left; ++e) {
          walk(j + 1, left - e, coeff * gammas[j][static_cast<std::size_t>(e)], cur);
          if (e < left) cur = c.differentials[j] * cur;
        }
      };
  walk(0, budget, Scalar::one(r), y);
  return acc;
}

struct PhiImage {
  Vec coords;  // h_1^{-1} (h_2, ..., h_{r-1})
  Vec h;       // transport of v_1
};

inline PhiImage phi_map(const ConnectionData& c, const DeformationPoint& g) {
  const Ring& r = c.frame->ring();
  const std::size_t rk = c.frame->rank();
  const Vec h = transport(c, g, unit_vec(r, rk, 0));
  if (!h[0].is_unit()) fail(ErrorCode::InvalidConnection, "h_1 is not a unit; connection data is invalid");
  const Scalar inv = h[0].inverse();
  Vec coords;
  for (std::size_t i = 1; i + 1 < rk; ++i) coords.push_back(inv * h[i]);
  return {std::move(coords), h};
}

struct PhiPreimage {
  DeformationPoint point;
  int iterations = 0;  // correction steps applied
};

/// Inverts the period map by the fixed-point iteration g <- g + (target -
/// phi(g)). phi(g) = g + (terms of p-adic order >= 2 in g/p), so each step
/// gains at least one digit.
inline PhiPreimage phi_invert(const ConnectionData& c, const Vec& target) {
  const Ring& r = c.frame->ring();
  check_point(target, c.dimension());
  DeformationPoint g{target};
  const int limit = r->n() + 2;
  for (int it = 0; it <= limit; ++it) {
    const Vec diff = target - phi_map(c, g).coords;
    if (is_zero(diff)) return {g, it};
    if (it == limit) break;
    g.values = g.values + diff;
  }
  fail(ErrorCode::NoConvergence, "period map inversion did not converge in n + 2 steps");
}

}  // namespace k3lift
