#pragma once

// Constructions of isometry-stable period lines ("lifting certificates").
//
// A certificate records the generator m of a rank-1 isotropic submodule
// reducing to the Hodge line, together with the data needed to re-check it:
// the ambient form, the isometry, the claimed eigenvalue and the pairings and
// span memberships the construction relied on. Verification recomputes all
// of these from (m, A, Gram) and compares.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/arith.hpp"
#include "k3lift/errors.hpp"
#include "k3lift/hensel.hpp"
#include "k3lift/isometry.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"

namespace k3lift {

/// Slope pieces H_{[1-1/h]}, H_{[1]}, H_{[1+1/h]} of a finite-height
/// crystal, each given by a basis in ambient coordinates.
struct SlopeDecomposition {
  QuadLattice ambient;
  std::vector<Vec> minus;
  std::vector<Vec> unit;
  std::vector<Vec> plus;
  std::optional<Matrix> frobenius;

  std::size_t height() const { return plus.size(); }
};

/// Throws InvalidInput unless the pieces form a basis, the outer pieces are
/// isotropic and dual to each other, and the middle piece is unimodular and
/// orthogonal to both.
inline void validate(const SlopeDecomposition& sd) {
  const QuadLattice& l = sd.ambient;
  const std::size_t r = l.rank(), h = sd.plus.size();
  require(h >= 1, ErrorCode::InvalidInput, "height must be at least 1");
  require(sd.minus.size() == h, ErrorCode::InvalidInput, "slope pieces [1-1/h] and [1+1/h] differ in rank");
  require(2 * h + sd.unit.size() == r, ErrorCode::InvalidInput, "slope pieces do not add up to the ambient rank");
  std::vector<Vec> all = sd.minus;
  all.insert(all.end(), sd.unit.begin(), sd.unit.end());
  all.insert(all.end(), sd.plus.begin(), sd.plus.end());
  for (const auto& v : all) check_dims(v.size(), r, "slope basis vector");
  require(determinant(Matrix::from_columns(l.ring(), r, all)).is_unit(), ErrorCode::InvalidInput,
          "slope pieces do not form a basis");
  require(l.gram_of(sd.minus).is_zero(), ErrorCode::InvalidInput, "H_[1-1/h] is not isotropic");
  require(l.gram_of(sd.plus).is_zero(), ErrorCode::InvalidInput, "H_[1+1/h] is not isotropic");
  Matrix dual(l.ring(), h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) dual(i, j) = l.pairing(sd.minus[i], sd.plus[j]);
  require(determinant(dual).is_unit(), ErrorCode::InvalidInput, "H_[1-1/h] and H_[1+1/h] are not dual");
  if (!sd.unit.empty())
    require(determinant(l.gram_of(sd.unit)).is_unit(), ErrorCode::InvalidInput, "H_[1] is not unimodular");
  for (const auto& u : sd.unit)
    for (std::size_t i = 0; i < h; ++i)
      require(l.pairing(u, sd.minus[i]).is_zero() && l.pairing(u, sd.plus[i]).is_zero(), ErrorCode::InvalidInput,
              "H_[1] is not orthogonal to the outer slope pieces");
}

/// Data of a supersingular crystal with an isometry: the whole lattice is
/// algebraic, `hodge` is a vector mod p spanning the Hodge line and `ample`
/// an A-invariant class.
struct SupersingularInput {
  QuadLattice ambient;
  Matrix isometry;
  Vec hodge;
  std::optional<Vec> ample;
  int artin_invariant = 0;  // metadata only, 0 if unknown
  std::optional<bool> symplectic;
};

enum class Branch { FiniteHeight, EigenLift, MinusOne, SymplecticUnit, SymplecticDivisible };

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::FiniteHeight: return "finite-height";
    case Branch::EigenLift: return "ss-eigen";
    case Branch::MinusOne: return "ss-minus-one";
    case Branch::SymplecticUnit: return "ss-symplectic-unit";
    case Branch::SymplecticDivisible: return "ss-symplectic-divisible";
  }
  return "?";
}

inline std::optional<Branch> parse_branch(const std::string& s) {
  for (Branch b : {Branch::FiniteHeight, Branch::EigenLift, Branch::MinusOne, Branch::SymplecticUnit,
                   Branch::SymplecticDivisible})
    if (s == branch_name(b)) return b;
  return std::nullopt;
}

/// Values recorded at construction time; verification recomputes each one.
struct Transcript {
  Scalar norm;                 // m.m
  Scalar eigenvalue;           // A m = eigenvalue * m
  std::vector<Scalar> pairings;  // m.w for each w in orthogonal_to
  Vec span_coords;             // m = sum span_coords[i] * span_basis[i]
};

struct LiftingCertificate {
  Branch branch = Branch::FiniteHeight;
  QuadLattice lattice;
  Matrix isometry;
  std::uint64_t order = 1;
  Vec hodge;  // residue vector, stored with integer lifts
  Vec m;
  std::vector<Vec> orthogonal_to;
  std::vector<Vec> span_basis;
  std::vector<std::pair<std::string, Scalar>> parameters;  // construction choices, for the record
  Transcript transcript;

  const Ring& ring() const { return lattice.ring(); }
};

struct VerificationReport {
  std::vector<std::string> failures;
  bool valid() const { return failures.empty(); }
};

namespace detail {

inline Transcript record(const QuadLattice& l, const Vec& m, const Scalar& lambda,
                         const std::vector<Vec>& orth, const std::vector<Vec>& span) {
  Transcript t{l.norm(m), lambda, {}, {}};
  for (const auto& w : orth) t.pairings.push_back(l.pairing(m, w));
  if (!span.empty()) {
    const auto c = solve_in_span(Matrix::from_columns(l.ring(), l.rank(), span), m);
    if (!c) fail(ErrorCode::PrecisionLoss, "constructed vector left its declared span");
    t.span_coords = *c;
  }
  return t;
}

/// Ratio mu with x = mu * m, read off a unit coordinate of m.
inline std::optional<Scalar> line_ratio(const Vec& m, const Vec& x) {
  const auto j = first_unit(m);
  if (!j) return std::nullopt;
  const Scalar mu = x[*j] * m[*j].inverse();
  if (x != mu * m) return std::nullopt;
  return mu;
}

inline Vec residue_lift(const Vec& v, const Ring& r) { return vec_in(vec_in(v, r->residue()), r); }

struct PreparedInput {
  Scalar zeta0;
  EigenSplit split;
  Vec hodge;
};

inline PreparedInput prepare(const SupersingularInput& inp, std::uint64_t n) {
  const QuadLattice& l = inp.ambient;
  const Ring& r = l.ring();
  check_dims(inp.hodge.size(), l.rank(), "Hodge vector");
  if (!verify_isometry(l, inp.isometry)) fail(ErrorCode::NotAnIsometry, "A does not preserve the form");
  if (n % r->p() == 0)
    fail(ErrorCode::NotTame, "order " + std::to_string(n) + " is divisible by p = " + std::to_string(r->p()));
  const Vec hodge = residue_lift(inp.hodge, r);
  require(valuation(hodge) == 0, ErrorCode::InvalidInput, "Hodge vector vanishes mod p");
  require(l.norm(hodge).valuation() >= 1, ErrorCode::InvalidInput, "Hodge vector is not isotropic mod p");
  const auto zbar = residue_eigenvalue(inp.isometry, hodge);
  if (!zbar) fail(ErrorCode::HodgeLineNotEigen, "Hodge line is not stable under A mod p");
  PreparedInput out{teichmuller(zbar->in(r)), eigen_split(inp.isometry, n), hodge};
  if (inp.symplectic && *inp.symplectic != out.zeta0.is_one())
    fail(ErrorCode::InvalidInput, "declared symplectic flag contradicts the action on the Hodge line");
  if (inp.ample) {
    check_dims(inp.ample->size(), l.rank(), "ample class");
    require(inp.isometry * *inp.ample == *inp.ample, ErrorCode::InvalidInput, "ample class is not A-invariant");
  }
  return out;
}

inline const EigenComponent& component(const EigenSplit& s, const Scalar& z) {
  const EigenComponent* c = s.find(z);
  if (!c) fail(ErrorCode::ProjectionCollapse, "eigenspace for " + z.to_string() + " is zero");
  return *c;
}

/// First b in `basis` (after `adjust`) with u.b a unit, rescaled so u.b = 1.
template <class Adjust>
std::optional<Vec> unit_partner(const QuadLattice& l, const Vec& u, const std::vector<Vec>& basis, Adjust adjust) {
  for (const auto& b : basis) {
    const Vec w = adjust(b);
    const Scalar uw = l.pairing(u, w);
    if (uw.is_unit()) return uw.inverse() * w;
  }
  return std::nullopt;
}

inline LiftingCertificate assemble(Branch branch, const QuadLattice& l, const Matrix& a, std::uint64_t n,
                                   const Vec& hodge, const Vec& m, const Scalar& lambda, std::vector<Vec> orth,
                                   std::vector<Vec> span, std::vector<std::pair<std::string, Scalar>> params) {
  LiftingCertificate c;
  c.branch = branch;
  c.lattice = l;
  c.isometry = a;
  c.order = n;
  c.hodge = hodge;
  c.m = m;
  c.transcript = record(l, m, lambda, orth, span);
  c.orthogonal_to = std::move(orth);
  c.span_basis = std::move(span);
  c.parameters = std::move(params);
  return c;
}

}  // namespace detail

/// Finite height: the A-stable line inside H_{[1+1/h]} lifting the Hodge
/// line. A must preserve H_{[1+1/h]} and act on it with order N prime to p.
inline LiftingCertificate lift_finite_height(const SlopeDecomposition& sd, const Matrix& a, std::uint64_t n,
                                             const Vec& hodge_line) {
  validate(sd);
  const QuadLattice& l = sd.ambient;
  const Ring& r = l.ring();
  if (!verify_isometry(l, a)) fail(ErrorCode::NotAnIsometry, "A does not preserve the form");
  require(n >= 1, ErrorCode::InvalidInput, "order must be positive");
  if (n % r->p() == 0)
    fail(ErrorCode::NotWeaklyTame,
         "order " + std::to_string(n) + " on H_[1+1/h] is divisible by p = " + std::to_string(r->p()));
  check_dims(hodge_line.size(), l.rank(), "Hodge vector");
  const Vec hodge = detail::residue_lift(hodge_line, r);
  require(valuation(hodge) == 0, ErrorCode::InvalidInput, "Hodge vector vanishes mod p");
  if (!residue_eigenvalue(a, hodge)) fail(ErrorCode::HodgeLineNotEigen, "Hodge line is not stable under A mod p");

  const std::size_t h = sd.height();
  const Matrix bplus = Matrix::from_columns(r, l.rank(), sd.plus);
  const auto coords = solve_mod_p(bplus, hodge);
  if (!coords) fail(ErrorCode::HodgeLineNotInSlope, "Hodge line is not in the reduction of H_[1+1/h]");
  Matrix restricted(r, h, h);
  for (std::size_t j = 0; j < h; ++j) {
    const auto col = solve_in_span(bplus, a * sd.plus[j]);
    if (!col) fail(ErrorCode::InvalidInput, "A does not preserve H_[1+1/h]");
    for (std::size_t i = 0; i < h; ++i) restricted(i, j) = (*col)[i];
  }
  require(restricted.pow(n).is_identity(), ErrorCode::InvalidInput,
          "A has no order " + std::to_string(n) + " on H_[1+1/h]");
  const LiftedEigenvector lifted = lift_eigenvector(restricted, n, vec_in(*coords, r));
  const Vec m = bplus * lifted.vector;
  return detail::assemble(Branch::FiniteHeight, l, a, n, hodge, m, lifted.eigenvalue, sd.unit, sd.plus, {});
}

/// Supersingular, non-symplectic: A acts on the Hodge line by zeta_0 != 1.
inline LiftingCertificate lift_ss_nonsymplectic(const SupersingularInput& inp, std::uint64_t n) {
  const detail::PreparedInput prep = detail::prepare(inp, n);
  const QuadLattice& l = inp.ambient;
  const Ring& r = l.ring();
  if (prep.zeta0.is_one()) fail(ErrorCode::SymplecticInput, "A acts trivially on the Hodge line");
  const EigenComponent& lz = detail::component(prep.split, prep.zeta0);
  std::vector<Vec> orth;
  if (inp.ample) orth.push_back(*inp.ample);

  const LiftedEigenvector u = lift_eigenvector(inp.isometry, n, prep.hodge);
  if (prep.zeta0 != -Scalar::one(r)) {
    // zeta_0^2 != 1 forces L_{zeta_0} to be isotropic, so u is already a solution.
    return detail::assemble(Branch::EigenLift, l, inp.isometry, n, prep.hodge, u.vector, u.eigenvalue,
                            std::move(orth), lz.basis, {});
  }
  const auto v = detail::unit_partner(l, u.vector, lz.basis, [](const Vec& b) { return b; });
  if (!v) fail(ErrorCode::NoUnitPartner, "no vector of L_-1 pairs to a unit with the lifted Hodge vector");
  const IsotropicCombination ic = isotropic_combination(l, u.vector, *v);
  return detail::assemble(Branch::MinusOne, l, inp.isometry, n, prep.hodge, ic.w, u.eigenvalue, std::move(orth),
                          lz.basis, {{"a", ic.a}});
}

/// Supersingular, symplectic: A acts trivially on the Hodge line and fixes
/// the ample class c; the line is built inside c^perp of the invariant part.
inline LiftingCertificate lift_ss_symplectic(const SupersingularInput& inp, std::uint64_t n) {
  const detail::PreparedInput prep = detail::prepare(inp, n);
  const QuadLattice& l = inp.ambient;
  const Ring& r = l.ring();
  if (!prep.zeta0.is_one()) fail(ErrorCode::NotSymplectic, "A acts nontrivially on the Hodge line");
  require(inp.ample.has_value(), ErrorCode::InvalidInput, "symplectic branch needs an ample class");
  const Vec& c = *inp.ample;
  const Vec& x = prep.hodge;
  if (rank_mod_p(r, l.rank(), {x, c}) < 2)
    fail(ErrorCode::IndependenceFailure, "Hodge vector and ample class are dependent mod p");
  if (l.pairing(x, c).valuation() < 1)
    fail(ErrorCode::HodgeNotOrthogonal, "Hodge line is not orthogonal to the ample class mod p");
  const EigenComponent& l1 = detail::component(prep.split, Scalar::one(r));
  const Vec u0 = lift_eigenvector(inp.isometry, n, x).vector;
  const Scalar cc = l.norm(c);
  const Scalar one = Scalar::one(r);

  if (cc.is_unit()) {
    const Scalar cinv = cc.inverse();
    const auto project = [&](const Vec& b) { return b - (l.pairing(b, c) * cinv) * c; };
    const Vec u = project(u0);
    const auto v = detail::unit_partner(l, u, l1.basis, project);
    if (!v) fail(ErrorCode::RankTooSmall, "c^perp in L_1 has no unit partner for the Hodge vector");
    const IsotropicCombination ic = isotropic_combination(l, u, *v);
    return detail::assemble(Branch::SymplecticUnit, l, inp.isometry, n, x, ic.w, one, {c}, l1.basis,
                            {{"a", ic.a}});
  }

  // p | c.c: find z in L_1 with z.x = 0, z.c = 1 mod p, then move v = u0 and
  // a partner w into c^perp along z.
  const std::size_t k = l1.basis.size();
  Matrix sys(r, 2, k);
  for (std::size_t j = 0; j < k; ++j) {
    sys(0, j) = l.pairing(l1.basis[j], x);
    sys(1, j) = l.pairing(l1.basis[j], c);
  }
  const auto zc = solve_mod_p(sys, {Scalar::zero(r), one});
  if (!zc) fail(ErrorCode::RankTooSmall, "L_1 has no z with z.x = 0 and z.c = 1 mod p");
  const Vec z = Matrix::from_columns(r, l.rank(), l1.basis) * vec_in(*zc, r);
  const Orthogonalized vo = orthogonalize_against(l, c, u0, z);
  std::optional<Orthogonalized> wo;
  for (const auto& b : l1.basis) {
    Orthogonalized cand = orthogonalize_against(l, c, b, z);
    if (l.pairing(vo.vector, cand.vector).is_unit()) {
      wo = std::move(cand);
      break;
    }
  }
  if (!wo) fail(ErrorCode::RankTooSmall, "c^perp in L_1 has no unit partner for the Hodge vector");
  const Vec w = l.pairing(vo.vector, wo->vector).inverse() * wo->vector;
  const IsotropicCombination ic = isotropic_combination(l, vo.vector, w);
  return detail::assemble(Branch::SymplecticDivisible, l, inp.isometry, n, x, ic.w, one, {c}, l1.basis,
                          {{"a", vo.a}, {"b", wo->a}, {"a_iso", ic.a}});
}

/// Recomputes every claim of the certificate. Failure messages start with
/// the name of the failed check.
inline VerificationReport verify_certificate(const LiftingCertificate& cert) {
  VerificationReport rep;
  auto bad = [&](const std::string& s) { rep.failures.push_back(s); };
  const QuadLattice& l = cert.lattice;
  const std::size_t rk = l.rank();
  if (cert.m.size() != rk || cert.hodge.size() != rk || cert.isometry.rows() != rk || cert.isometry.cols() != rk) {
    bad("shape: dimensions do not match the lattice");
    return rep;
  }
  const Ring& r = l.ring();
  const Transcript& t = cert.transcript;
  if (!verify_isometry(l, cert.isometry)) bad("isometry: A does not preserve the form");

  const Scalar norm = l.norm(cert.m);
  if (!norm.is_zero()) bad("isotropy: m.m = " + norm.to_string());
  if (norm != t.norm) bad("isotropy: transcript records m.m = " + t.norm.to_string());

  const auto mu = detail::line_ratio(cert.m, cert.isometry * cert.m);
  if (!mu) {
    bad(first_unit(cert.m) ? "stability: A m is not in span(m)" : "stability: m is not primitive");
  } else {
    if (*mu != t.eigenvalue) bad("stability: eigenvalue " + mu->to_string() + " differs from transcript");
    if (!mu->pow(cert.order).is_one()) bad("stability: eigenvalue is not an N-th root of unity");
  }

  const Vec hodge = detail::residue_lift(cert.hodge, r);
  if (valuation(hodge) > 0 || valuation(cert.m) > 0 || rank_mod_p(r, rk, {cert.m, hodge}) != 1)
    bad("reduction: m mod p does not span the Hodge line");

  if (t.pairings.size() != cert.orthogonal_to.size()) {
    bad("orthogonality: transcript length mismatch");
  } else {
    for (std::size_t i = 0; i < cert.orthogonal_to.size(); ++i) {
      const Scalar s = l.pairing(cert.m, cert.orthogonal_to[i]);
      if (!s.is_zero()) bad("orthogonality: m.w_" + std::to_string(i) + " = " + s.to_string());
      if (s != t.pairings[i]) bad("orthogonality: transcript pairing " + std::to_string(i) + " differs");
    }
  }

  if (!cert.span_basis.empty()) {
    if (t.span_coords.size() != cert.span_basis.size()) {
      bad("span: transcript length mismatch");
    } else if (Matrix::from_columns(r, rk, cert.span_basis) * t.span_coords != cert.m) {
      bad("span: m differs from the recorded combination of the span basis");
    }
  }
  return rep;
}

/// The same certificate for the generator u * m.
inline LiftingCertificate rescale(LiftingCertificate cert, const Scalar& u) {
  require(u.is_unit(), ErrorCode::NonUnit, "rescaling factor must be a unit");
  cert.m = u * cert.m;
  cert.transcript.norm = u * u * cert.transcript.norm;
  for (auto& s : cert.transcript.pairings) s = u * s;
  cert.transcript.span_coords = u * cert.transcript.span_coords;
  return cert;
}

struct StabilityEntry {
  bool stabilizes = false;
  std::optional<Scalar> eigenvalue;
};

struct UniversalLine {
  LiftingCertificate certificate;
  std::vector<StabilityEntry> others;
};

/// Certificate for A, then a stability check of span(m) under each further
/// isometry.
inline UniversalLine universal_line(const SlopeDecomposition& sd, const Matrix& a, std::uint64_t n,
                                    const Vec& hodge_line, const std::vector<Matrix>& others) {
  UniversalLine out{lift_finite_height(sd, a, n, hodge_line), {}};
  for (const auto& b : others) {
    check_dims(b.rows(), sd.ambient.rank(), "isometry");
    const auto mu = detail::line_ratio(out.certificate.m, b * out.certificate.m);
    out.others.push_back({mu.has_value(), mu});
  }
  return out;
}

struct PhiRankCheck {
  std::uint64_t phi = 0;
  bool divides = false;  // phi(N) | t
  bool bounded = false;  // phi(N) <= t
};

inline PhiRankCheck phi_rank_check(std::uint64_t t, std::uint64_t n) {
  const std::uint64_t ph = euler_phi(n);
  return {ph, t % ph == 0, ph <= t};
}

}  // namespace k3lift
