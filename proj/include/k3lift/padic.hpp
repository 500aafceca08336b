#pragma once

// Truncated unramified Witt rings W(F_{p^m}) / p^n.
//
// Elements are polynomials of degree < m with coefficients in Z/p^n, taken
// modulo a fixed monic lift of an irreducible polynomial over F_p. Since the
// extension is unramified, p stays a uniformizer and the valuation of an
// element is the minimum valuation of its coefficients.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/errors.hpp"

namespace k3lift {

inline constexpr int kMaxDegree = 12;

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

/// Returns base^exp, or 0 if the result would exceed `limit`.
inline u64 checked_pow(u64 base, u64 exp, u64 limit) {
  u64 r = 1;
  for (u64 i = 0; i < exp; ++i) {
    if (r > limit / base) return 0;
    r *= base;
  }
  return r;
}

// Dense polynomials over F_p, little-endian, trimmed. Used only to validate
// and choose residue-field moduli.
using FpPoly = std::vector<u64>;

inline void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly poly_rem(FpPoly a, const FpPoly& f, u64 p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const u64 lead_inv = [&] {
    // f is monic in every use below, but keep this general.
    u64 r = 1, b = f.back() % p, e = p - 2;
    while (e) {
      if (e & 1) r = mulmod(r, b, p);
      b = mulmod(b, b, p);
      e >>= 1;
    }
    return r;
  }();
  while (a.size() >= f.size()) {
    const u64 t = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i)
      a[shift + i] = (a[shift + i] + p - mulmod(t, f[i], p)) % p;
    trim(a);
  }
  return a;
}

inline FpPoly poly_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return poly_rem(std::move(r), f, p);
}

inline FpPoly poly_powmod(FpPoly base, u64 e, const FpPoly& f, u64 p) {
  FpPoly r{1};
  base = poly_rem(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline FpPoly poly_gcd(FpPoly a, FpPoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's irreducibility test for a monic f over F_p.
inline bool is_irreducible(const FpPoly& f, u64 p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  std::vector<FpPoly> frob(m + 1);  // frob[k] = x^{p^k} mod f
  frob[0] = poly_rem(FpPoly{0, 1}, f, p);
  for (std::size_t k = 1; k <= m; ++k) frob[k] = poly_powmod(frob[k - 1], p, f, p);
  if (frob[m] != frob[0]) return false;
  for (u64 q : prime_factors(m)) {
    FpPoly g = frob[m / q];
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;
    FpPoly d = poly_gcd(g, f, p);
    if (d.size() > 1) return false;
  }
  return true;
}

}  // namespace detail

class RingContext;
class Scalar;
using Ring = std::shared_ptr<const RingContext>;

/// Parameters of W(F_{p^m}) / p^n. Construct through `make`; contexts are
/// immutable and shared by every scalar living in them.
class RingContext {
 public:
  using u64 = std::uint64_t;

  /// `modulus` lists c_0..c_m of a monic polynomial irreducible mod p. When
  /// empty, the first monic irreducible in base-p counting order is chosen.
  static Ring make(u64 p, int n, int m = 1, std::vector<u64> modulus = {});

  u64 p() const { return p_; }
  int n() const { return n_; }
  int m() const { return m_; }
  /// p^n
  u64 pn() const { return pn_; }
  /// p^k for 0 <= k <= n.
  u64 p_power(int k) const { return powers_.at(static_cast<std::size_t>(k)); }
  /// Size of the residue field, p^m.
  u64 residue_size() const { return q_; }
  const std::vector<u64>& modulus() const { return modulus_; }
  /// Coefficients of the Frobenius image of the generator x.
  const std::array<u64, kMaxDegree>& frobenius_of_generator() const { return sigma_x_; }

  /// Same residue field, different precision.
  Ring with_precision(int n) const { return make(p_, n, m_, modulus_); }
  /// The residue field F_{p^m} viewed as W_1.
  Ring residue() const { return with_precision(1); }

  /// True when both rings are truncations of one W(F_{p^m}) presentation,
  /// i.e. the moduli agree modulo the smaller p-power.
  bool compatible(const RingContext& o) const {
    if (p_ != o.p_ || m_ != o.m_) return false;
    const u64 d = std::min(pn_, o.pn_);
    for (int i = 0; i <= m_; ++i)
      if (modulus_[static_cast<std::size_t>(i)] % d != o.modulus_[static_cast<std::size_t>(i)] % d) return false;
    return true;
  }
  bool operator==(const RingContext& o) const {
    return p_ == o.p_ && n_ == o.n_ && m_ == o.m_ && modulus_ == o.modulus_;
  }

 private:
  RingContext() = default;

  u64 p_ = 0;
  int n_ = 0;
  int m_ = 0;
  u64 pn_ = 0;
  u64 q_ = 0;
  std::vector<u64> powers_;
  std::vector<u64> modulus_;
  std::array<u64, kMaxDegree> sigma_x_{};
};

inline bool same_ring(const Ring& a, const Ring& b) { return a == b || (a && b && *a == *b); }

/// An element of W(F_{p^m}) / p^n.
class Scalar {
 public:
  using u64 = std::uint64_t;

  Scalar() = default;

  static Scalar zero(const Ring& r) { return Scalar(r); }
  static Scalar one(const Ring& r) { return from_int(r, 1); }
  static Scalar from_int(const Ring& r, std::int64_t v) {
    Scalar s(r);
    s.c_[0] = reduce_signed(v, r->pn());
    return s;
  }
  /// Coefficients c_0..c_{k-1}, k <= m, each reduced modulo p^n.
  static Scalar from_coeffs(const Ring& r, std::span<const std::int64_t> coeffs) {
    require(coeffs.size() <= static_cast<std::size_t>(r->m()), ErrorCode::InvalidInput,
            "scalar has more coefficients than the residue degree");
    Scalar s(r);
    for (std::size_t i = 0; i < coeffs.size(); ++i) s.c_[i] = reduce_signed(coeffs[i], r->pn());
    return s;
  }
  static Scalar from_coeffs(const Ring& r, std::initializer_list<std::int64_t> coeffs) {
    return from_coeffs(r, std::span<const std::int64_t>(coeffs.begin(), coeffs.size()));
  }

  const Ring& ring() const { return ring_; }
  bool valid() const { return static_cast<bool>(ring_); }
  u64 coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::vector<u64> coeffs() const {
    return std::vector<u64>(c_.begin(), c_.begin() + ring_->m());
  }

  Scalar operator+(const Scalar& o) const {
    check_same(o);
    Scalar r(ring_);
    const u64 pn = ring_->pn();
    for (int i = 0; i < ring_->m(); ++i) {
      const u64 s = c_[i] + o.c_[i];
      r.c_[i] = s >= pn ? s - pn : s;
    }
    return r;
  }
  Scalar operator-(const Scalar& o) const {
    check_same(o);
    Scalar r(ring_);
    const u64 pn = ring_->pn();
    for (int i = 0; i < ring_->m(); ++i) r.c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + pn - o.c_[i];
    return r;
  }
  Scalar operator-() const { return zero(ring_) - *this; }
  Scalar operator*(const Scalar& o) const {
    check_same(o);
    const int m = ring_->m();
    const u64 pn = ring_->pn();
    Scalar r(ring_);
    if (m == 1) {
      r.c_[0] = detail::mulmod(c_[0], o.c_[0], pn);
      return r;
    }
    std::array<u64, 2 * kMaxDegree> t{};
    for (int i = 0; i < m; ++i) {
      if (c_[i] == 0) continue;
      for (int j = 0; j < m; ++j) t[i + j] = (t[i + j] + detail::mulmod(c_[i], o.c_[j], pn)) % pn;
    }
    const auto& f = ring_->modulus();
    for (int k = 2 * m - 2; k >= m; --k) {
      const u64 lead = t[k];
      if (lead == 0) continue;
      t[k] = 0;
      for (int i = 0; i < m; ++i) {
        const u64 sub = detail::mulmod(lead, f[static_cast<std::size_t>(i)], pn);
        u64& slot = t[k - m + i];
        slot = slot >= sub ? slot - sub : slot + pn - sub;
      }
    }
    for (int i = 0; i < m; ++i) r.c_[i] = t[i];
    return r;
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  bool operator==(const Scalar& o) const {
    check_same(o);
    return c_ == o.c_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
  }
  bool is_one() const { return *this == one(ring_); }

  /// Largest e <= n with p^e dividing this element; returns n for zero
  /// (read: "at least n").
  int valuation() const {
    const int n = ring_->n();
    int best = n;
    for (int i = 0; i < ring_->m(); ++i) {
      u64 v = c_[i];
      if (v == 0) continue;
      int e = 0;
      while (v % ring_->p() == 0) {
        v /= ring_->p();
        ++e;
      }
      best = std::min(best, e);
    }
    return best;
  }
  bool is_unit() const { return valuation() == 0; }

  Scalar pow(u64 e) const {
    Scalar r = one(ring_), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  /// Multiplicative inverse of a unit.
  Scalar inverse() const {
    if (!is_unit()) fail(ErrorCode::NonUnit, "inverse of non-unit " + to_string());
    // a^{q-2} inverts a modulo p, then Newton doubles the precision.
    Scalar x = pow(ring_->residue_size() - 2);
    const Scalar two = from_int(ring_, 2);
    for (int prec = 1; prec < ring_->n(); prec *= 2) x = x * (two - *this * x);
    return x;
  }

  /// Exact division by p^e; requires valuation() >= e. The top e digits of
  /// the quotient are undetermined and returned as zero.
  Scalar div_p_power(int e) const {
    require(valuation() >= e, ErrorCode::ValuationViolation, "division by p^" + std::to_string(e));
    Scalar r(ring_);
    const u64 d = ring_->p_power(e);
    for (int i = 0; i < ring_->m(); ++i) r.c_[i] = c_[i] / d;
    return r;
  }

  /// Representative reduced modulo p^k (k <= n), living in the same ring.
  Scalar truncate(int k) const {
    Scalar r(ring_);
    const u64 d = ring_->p_power(k);
    for (int i = 0; i < ring_->m(); ++i) r.c_[i] = c_[i] % d;
    return r;
  }

  /// Reinterprets the canonical representative in another precision of the
  /// same residue field.
  Scalar in(const Ring& target) const {
    require(target->compatible(*ring_), ErrorCode::ContextMismatch, "precision change across fields");
    Scalar r(target);
    for (int i = 0; i < ring_->m(); ++i) r.c_[i] = c_[i] % target->pn();
    return r;
  }

  /// Coefficients as integers in (-p^n/2, p^n/2].
  std::vector<std::int64_t> centered() const {
    std::vector<std::int64_t> out;
    const u64 pn = ring_->pn();
    for (int i = 0; i < ring_->m(); ++i) {
      const u64 v = c_[i];
      out.push_back(v > pn / 2 ? -static_cast<std::int64_t>(pn - v) : static_cast<std::int64_t>(v));
    }
    return out;
  }

  std::string to_string() const {
    if (ring_->m() == 1) return std::to_string(c_[0]);
    std::string s = "[";
    for (int i = 0; i < ring_->m(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
    return s + "]";
  }

  /// Lexicographic on c_0, c_1, ...; gives a deterministic order on roots.
  friend bool coeff_less(const Scalar& a, const Scalar& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

 private:
  explicit Scalar(Ring r) : ring_(std::move(r)) {}
  friend class RingContext;

  static u64 reduce_signed(std::int64_t v, u64 pn) {
    if (v >= 0) return static_cast<u64>(v) % pn;
    const u64 a = static_cast<u64>(-(v + 1)) + 1;  // |v| without overflow
    const u64 r = a % pn;
    return r == 0 ? 0 : pn - r;
  }
  void check_same(const Scalar& o) const {
    if (ring_ != o.ring_ && !(ring_ && o.ring_ && *ring_ == *o.ring_))
      fail(ErrorCode::ContextMismatch, "scalars from different rings");
  }

  Ring ring_;
  std::array<u64, kMaxDegree> c_{};
};

inline Ring RingContext::make(u64 p, int n, int m, std::vector<u64> modulus) {
  require(p >= 3 && detail::is_prime(p), ErrorCode::InvalidInput, "p must be an odd prime, got " + std::to_string(p));
  require(n >= 1, ErrorCode::InvalidInput, "precision n must be >= 1");
  require(m >= 1 && m <= kMaxDegree, ErrorCode::InvalidInput,
          "residue degree m must lie in [1, " + std::to_string(kMaxDegree) + "]");
  constexpr u64 kLimit = u64{1} << 62;
  const u64 pn = detail::checked_pow(p, static_cast<u64>(n), kLimit);
  const u64 q = detail::checked_pow(p, static_cast<u64>(m), kLimit);
  require(pn != 0 && q != 0, ErrorCode::InvalidInput, "p^n or p^m exceeds 2^62");

  auto ctx = std::shared_ptr<RingContext>(new RingContext());
  ctx->p_ = p;
  ctx->n_ = n;
  ctx->m_ = m;
  ctx->pn_ = pn;
  ctx->q_ = q;
  for (int k = 0; k <= n; ++k) ctx->powers_.push_back(detail::checked_pow(p, static_cast<u64>(k), kLimit));

  if (modulus.empty()) {
    if (m == 1) {
      modulus = {0, 1};
    } else {
      for (u64 idx = 0;; ++idx) {
        detail::FpPoly f(static_cast<std::size_t>(m) + 1, 0);
        u64 t = idx;
        for (int i = 0; i < m; ++i) {
          f[static_cast<std::size_t>(i)] = t % p;
          t /= p;
        }
        f[static_cast<std::size_t>(m)] = 1;
        if (f[0] != 0 && detail::is_irreducible(f, p)) {
          modulus = f;
          break;
        }
      }
    }
  }
  require(modulus.size() == static_cast<std::size_t>(m) + 1, ErrorCode::InvalidInput,
          "modulus must have m+1 coefficients");
  for (auto& c : modulus) c %= pn;
  require(modulus.back() == 1, ErrorCode::InvalidInput, "modulus must be monic");
  {
    detail::FpPoly f(modulus);
    for (auto& c : f) c %= p;
    require(detail::is_irreducible(f, p), ErrorCode::InvalidInput, "modulus is not irreducible mod p");
  }
  ctx->modulus_ = modulus;

  // Frobenius on the generator: the root of the modulus congruent to x^p,
  // found by Newton iteration.
  ctx->sigma_x_[0] = 0;
  if (m == 1) {
    ctx->sigma_x_[0] = 1;  // unused: Frobenius is the identity on Z_p
  } else {
    const Ring r = ctx;
    std::vector<Scalar> f;
    for (u64 c : modulus) f.push_back(Scalar::from_int(r, static_cast<std::int64_t>(c)));
    auto eval = [&](const Scalar& x, bool derivative) {
      Scalar acc = Scalar::zero(r);
      for (std::size_t i = f.size(); i-- > 0;) {
        if (derivative) {
          if (i == 0) break;
          acc = acc * x + f[i] * Scalar::from_int(r, static_cast<std::int64_t>(i));
        } else {
          acc = acc * x + f[i];
        }
      }
      return acc;
    };
    Scalar gen = Scalar::from_coeffs(r, {0, 1});
    Scalar x = gen.pow(p);
    for (int it = 0; it < 64; ++it) {
      const Scalar fx = eval(x, false);
      if (fx.is_zero()) break;
      x = x - fx * eval(x, true).inverse();
    }
    for (int i = 0; i < m; ++i) ctx->sigma_x_[static_cast<std::size_t>(i)] = x.coeff(i);
  }
  return ctx;
}

/// Teichmüller lift of the residue class of `r`: the unique (p^m - 1)-th
/// root of unity (or zero) congruent to r mod p.
inline Scalar teichmuller(const Scalar& r) {
  const Ring& ring = r.ring();
  Scalar x = r.truncate(1);
  const int steps = ring->m() * (ring->n() - 1);
  for (int i = 0; i < steps; ++i) x = x.pow(ring->p());
  return x;
}

/// The Witt-vector Frobenius: the ring automorphism lifting x -> x^p on the
/// residue field. Identity when m = 1.
inline Scalar frobenius(const Scalar& a) {
  const Ring& ring = a.ring();
  if (ring->m() == 1) return a;
  const auto& sx = ring->frobenius_of_generator();
  std::vector<std::int64_t> cs(sx.begin(), sx.begin() + ring->m());
  const Scalar sigma_x = Scalar::from_coeffs(ring, cs);
  Scalar acc = Scalar::zero(ring);
  for (int i = ring->m(); i-- > 0;)
    acc = acc * sigma_x + Scalar::from_int(ring, static_cast<std::int64_t>(a.coeff(i)));
  return acc;
}

/// Every residue-field element, as canonical representatives in `ring`, in
/// base-p counting order (zero first).
inline std::vector<Scalar> residue_elements(const Ring& ring) {
  std::vector<Scalar> out;
  const std::uint64_t q = ring->residue_size();
  out.reserve(q);
  for (std::uint64_t idx = 0; idx < q; ++idx) {
    std::vector<std::int64_t> cs(static_cast<std::size_t>(ring->m()));
    std::uint64_t t = idx;
    for (auto& c : cs) {
      c = static_cast<std::int64_t>(t % ring->p());
      t /= ring->p();
    }
    out.push_back(Scalar::from_coeffs(ring, cs));
  }
  return out;
}

/// A primitive N-th root of unity in W_n(F_{p^m}); requires N | p^m - 1.
inline Scalar primitive_root_of_unity(const Ring& ring, std::uint64_t N) {
  require(N >= 1, ErrorCode::InvalidInput, "root-of-unity order must be positive");
  const std::uint64_t q = ring->residue_size();
  if ((q - 1) % N != 0)
    fail(ErrorCode::InsufficientResidueField,
         std::to_string(N) + " does not divide p^m - 1 = " + std::to_string(q - 1) + "; enlarge m");
  if (N == 1) return Scalar::one(ring);
  const auto primes = detail::prime_factors(N);
  const Ring res = ring->residue();
  // Enumerate residues in counting order; the first whose (q-1)/N power has
  // exact order N is lifted.
  for (std::uint64_t idx = 1; idx < q; ++idx) {
    std::vector<std::int64_t> cs(static_cast<std::size_t>(ring->m()));
    std::uint64_t t = idx;
    for (auto& c : cs) {
      c = static_cast<std::int64_t>(t % ring->p());
      t /= ring->p();
    }
    const Scalar s = Scalar::from_coeffs(res, cs).pow((q - 1) / N);
    bool primitive = true;
    for (std::uint64_t l : primes)
      if (s.pow(N / l).is_one()) {
        primitive = false;
        break;
      }
    if (primitive) return teichmuller(s.in(ring));
  }
  fail(ErrorCode::InsufficientResidueField, "no primitive root found");
}

/// All N-th roots of unity, sorted by coefficients. Each is a Teichmüller lift.
inline std::vector<Scalar> nth_roots_of_unity(const Ring& ring, std::uint64_t N) {
  const Scalar z = primitive_root_of_unity(ring, N);
  std::vector<Scalar> out;
  Scalar cur = Scalar::one(ring);
  for (std::uint64_t i = 0; i < N; ++i) {
    out.push_back(cur);
    cur *= z;
  }
  std::sort(out.begin(), out.end(), [](const Scalar& a, const Scalar& b) { return coeff_less(a, b); });
  return out;
}

/// Smallest m with N | p^m - 1, or 0 if p | N or m would exceed kMaxDegree.
inline int residue_degree_for(std::uint64_t p, std::uint64_t N) {
  if (N % p == 0) return 0;
  std::uint64_t r = 1 % N;
  for (int m = 1; m <= kMaxDegree; ++m) {
    r = detail::mulmod(r, p % N, N);
    if (r == 1 % N) return m;
  }
  return 0;
}

}  // namespace k3lift
