#pragma once

// Arithmetic gates on (p, N): Euler phi, tameness thresholds, the set Sigma
// of orders with unique purely non-symplectic K3 surfaces, and the finite
// scan behind the bound phi(p + 1) > 21 for p > 60.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/padic.hpp"

namespace k3lift {

inline std::uint64_t euler_phi(std::uint64_t n) {
  require(n >= 1, ErrorCode::InvalidInput, "euler_phi needs N >= 1");
  std::uint64_t out = n;
  for (std::uint64_t q : detail::prime_factors(n)) out = out / q * (q - 1);
  return out;
}

enum class Tameness { Tame, Wild };

inline Tameness tameness(std::uint64_t p, std::uint64_t n) { return n % p == 0 ? Tameness::Wild : Tameness::Tame; }

inline const char* tameness_name(Tameness t) { return t == Tameness::Tame ? "tame" : "wild"; }

struct SurfaceThresholds {
  std::uint64_t p = 0;
  bool all_automorphisms_tame = false;      // p > 11
  bool all_finite_height_weakly_tame = false;  // p >= 23
  std::string rationale;
};

/// An automorphism of order divisible by p acts on the transcendental part
/// with a p-power-order piece of rank >= phi(p) = p - 1; rank <= 21 rules
/// this out above 11 for the automorphism, and the crystalline action on the
/// rank-<= 20 piece above 21.
inline SurfaceThresholds surface_thresholds(std::uint64_t p) {
  require(p > 2 && detail::is_prime(p), ErrorCode::InvalidInput, "p must be an odd prime");
  SurfaceThresholds t;
  t.p = p;
  t.all_automorphisms_tame = p > 11;
  t.all_finite_height_weakly_tame = p >= 23;
  t.rationale = "a p-power order action needs rank >= p - 1: p - 1 > 11 on the transcendental lattice, "
                "p - 1 > 21 on the crystalline lattice of rank < 22";
  return t;
}

inline constexpr std::array<std::uint64_t, 11> kSigma{13, 17, 19, 25, 27, 32, 33, 40, 44, 50, 66};

inline bool in_sigma(std::uint64_t n) {
  for (auto s : kSigma)
    if (s == n) return true;
  return false;
}

struct SigmaReport {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  bool member = false;
  std::uint64_t phi = 0;
  bool good_reduction = false;  // p does not divide 2N
  bool uniqueness = false;      // member and good reduction
  std::string note;
};

inline SigmaReport sigma_check(std::uint64_t n, std::uint64_t p) {
  require(n >= 1, ErrorCode::InvalidInput, "N must be positive");
  require(detail::is_prime(p), ErrorCode::InvalidInput, "p must be prime");
  SigmaReport r;
  r.n = n;
  r.p = p;
  r.member = in_sigma(n);
  r.phi = euler_phi(n);
  r.good_reduction = (2 * n) % p != 0;
  r.uniqueness = r.member && r.good_reduction;
  if (r.uniqueness) {
    r.note = "unique K3 surface with a purely non-symplectic automorphism of order " + std::to_string(n) +
             " in characteristic " + std::to_string(p);
  } else if (r.member) {
    r.note = "p divides 2N: reduction is not good";
    if (n == 66 && p != 2 && p != 3)
      r.note += "; uniqueness for order 66 in characteristic p != 2, 3 is a separate result";
  } else {
    r.note = "N is not in Sigma";
  }
  return r;
}

struct Remark38Row {
  std::uint64_t p = 0;
  std::uint64_t phi = 0;  // phi(p + 1)
  bool exceeds_21 = false;
};

/// Every prime p <= p_max with phi(p + 1); primes <= 60 are included for
/// contrast.
inline std::vector<Remark38Row> remark38_scan(std::uint64_t p_max) {
  require(p_max >= 61, ErrorCode::InvalidInput, "scan bound must be at least 61");
  std::vector<Remark38Row> rows;
  for (std::uint64_t p = 2; p <= p_max; ++p) {
    if (!detail::is_prime(p)) continue;
    const std::uint64_t ph = euler_phi(p + 1);
    rows.push_back({p, ph, ph > 21});
  }
  return rows;
}

/// True iff phi(p + 1) > 21 for every prime 60 < p <= p_max.
inline bool remark38_holds(const std::vector<Remark38Row>& rows) {
  for (const auto& r : rows)
    if (r.p > 60 && !r.exceeds_21) return false;
  return true;
}

}  // namespace k3lift
