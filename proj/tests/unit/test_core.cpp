#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "k3lift/k3lift.hpp"
#include "k3lift/random.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace k3lift;
using corpus::to_ints;

namespace {

Scalar S(const Ring& r, std::int64_t v) { return Scalar::from_int(r, v); }

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

// ---- padic -----------------------------------------------------------------

TEST(Padic, ContextValidation) {
  expect_code(ErrorCode::InvalidInput, [] { RingContext::make(2, 3); });
  expect_code(ErrorCode::InvalidInput, [] { RingContext::make(9, 3); });
  expect_code(ErrorCode::InvalidInput, [] { RingContext::make(5, 0); });
  // x^2 + 1 is reducible mod 5.
  expect_code(ErrorCode::InvalidInput, [] { RingContext::make(5, 2, 2, {1, 0, 1}); });
}

TEST(Padic, InverseOfTwoMod125) {
  const Ring r = RingContext::make(5, 3);
  EXPECT_EQ(oracle::inverse_scan(2, 125), 63);
  EXPECT_EQ(S(r, 2).inverse(), S(r, 63));
  EXPECT_EQ(S(r, 63) * S(r, 2), S(r, 1));
  EXPECT_EQ(S(r, 1).inverse(), S(r, 1));
  expect_code(ErrorCode::NonUnit, [&] { S(r, 5).inverse(); });
}

TEST(Padic, ExtensionFieldMultiplication) {
  const Ring r = RingContext::make(3, 2, 2, {1, 0, 1});
  const Scalar x = Scalar::from_coeffs(r, {0, 1});
  EXPECT_EQ(x * x, S(r, -1));
  EXPECT_EQ((x * x).coeff(0), 8u);
}

TEST(Padic, Valuation) {
  const Ring r = RingContext::make(5, 3);
  EXPECT_EQ(S(r, 50).valuation(), 2);
  EXPECT_EQ(S(r, 1).valuation(), 0);
  EXPECT_EQ(S(r, 0).valuation(), 3);
}

TEST(Padic, InverseExhaustiveUpTo343) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 3}, {3, 5}, {5, 3}, {7, 3}}) {
    const Ring r = RingContext::make(static_cast<std::uint64_t>(p), n);
    const std::int64_t pn = oracle::ipow(p, n);
    for (std::int64_t a = 0; a < pn; ++a) {
      const Scalar s = S(r, a);
      if (a % p == 0) continue;
      const Scalar inv = s.inverse();
      EXPECT_EQ(s * inv, S(r, 1));
      EXPECT_EQ(inv * s, S(r, 1));
      EXPECT_EQ(static_cast<std::int64_t>(inv.coeff(0)), oracle::inverse_scan(a, pn));
    }
  }
}

TEST(Padic, RingAxiomsRandomized) {
  std::mt19937_64 rng(1);
  for (const Ring& r : {RingContext::make(5, 4), RingContext::make(3, 3, 3), RingContext::make(7, 2, 2)}) {
    for (int t = 0; t < 200; ++t) {
      const Scalar a = random::scalar(r, rng), b = random::scalar(r, rng), c = random::scalar(r, rng);
      EXPECT_EQ((a + b) + c, a + (b + c));
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + Scalar::zero(r), a);
      EXPECT_EQ(a - a, Scalar::zero(r));
      const int n = r->n();
      EXPECT_EQ((a * b).valuation(), std::min(a.valuation() + b.valuation(), n));
      EXPECT_GE((a + b).valuation(), std::min(a.valuation(), b.valuation()));
    }
  }
}

TEST(Padic, Teichmuller) {
  const Ring r = RingContext::make(7, 2);
  const auto cube_roots = oracle::roots_of_unity_scan(3, 49);
  ASSERT_EQ(cube_roots, (oracle::IVec{1, 18, 30}));
  EXPECT_EQ(teichmuller(S(r, 2)), S(r, 30));
  EXPECT_EQ(teichmuller(S(r, 0)), S(r, 0));
  EXPECT_EQ(teichmuller(S(r, 1)), S(r, 1));
}

TEST(Padic, TeichmullerExhaustiveSmallFields) {
  for (const Ring& r : {RingContext::make(3, 4, 2), RingContext::make(5, 3, 2), RingContext::make(3, 2, 3)}) {
    const std::uint64_t q = r->residue_size();
    for (const Scalar& e : residue_elements(r->residue())) {
      const Scalar t = teichmuller(e.in(r));
      EXPECT_EQ(t.in(r->residue()), e);
      EXPECT_EQ(t.pow(q), t);
      if (!e.is_zero()) {
        EXPECT_TRUE(t.pow(q - 1).is_one());
      }
    }
  }
}

TEST(Padic, Frobenius) {
  const Ring r1 = RingContext::make(5, 3);
  EXPECT_EQ(frobenius(S(r1, 17)), S(r1, 17));

  const Ring r = RingContext::make(3, 1, 2, {1, 0, 1});
  const Scalar x = Scalar::from_coeffs(r, {0, 1});
  EXPECT_EQ(frobenius(x), -x);

  std::mt19937_64 rng(2);
  const Ring w = RingContext::make(3, 4, 2);
  for (int t = 0; t < 100; ++t) {
    const Scalar a = random::scalar(w, rng), b = random::scalar(w, rng);
    EXPECT_EQ(frobenius(a * b), frobenius(a) * frobenius(b));
    EXPECT_EQ(frobenius(a + b), frobenius(a) + frobenius(b));
    EXPECT_EQ(frobenius(frobenius(a)), a);  // order divides m = 2
    // reduction is x -> x^p
    EXPECT_EQ(frobenius(a).in(w->residue()), a.in(w->residue()).pow(3));
  }
  for (const Scalar& e : residue_elements(w->residue())) {
    const Scalar t = teichmuller(e.in(w));
    EXPECT_EQ(frobenius(t), teichmuller(e.pow(3).in(w)));
    // fixed points among Teichmüller lifts are exactly the prime-field ones
    EXPECT_EQ(frobenius(t) == t, e.coeff(1) == 0);
  }
}

TEST(Padic, RootsOfUnity) {
  const Ring r = RingContext::make(7, 2);
  const auto roots = nth_roots_of_unity(r, 3);
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[0], S(r, 1));
  EXPECT_EQ(roots[1], S(r, 18));
  EXPECT_EQ(roots[2], S(r, 30));
  EXPECT_EQ(nth_roots_of_unity(r, 1).size(), 1u);
  expect_code(ErrorCode::InsufficientResidueField, [] { nth_roots_of_unity(RingContext::make(5, 2), 3); });
  EXPECT_EQ(residue_degree_for(5, 3), 2);
  EXPECT_EQ(nth_roots_of_unity(RingContext::make(5, 2, residue_degree_for(5, 3)), 3).size(), 3u);
}

// ---- matrices and lattices --------------------------------------------------

TEST(Matrix, InverseAndDeterminantRandomized) {
  std::mt19937_64 rng(3);
  const Ring r = RingContext::make(5, 3);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = random::invertible(r, 5, rng);
    EXPECT_TRUE((a * inverse(a)).is_identity());
    EXPECT_EQ(determinant(a) * determinant(inverse(a)), S(r, 1));
    const oracle::IMat ai = to_ints(a);
    EXPECT_EQ(oracle::rank_mod_p(ai, 5), 5u);
  }
}

TEST(Matrix, KernelReportsPrecisionLoss) {
  const Ring r = RingContext::make(5, 3);
  expect_code(ErrorCode::PrecisionLoss, [&] { kernel(Matrix::from_ints(r, {{5, 0}, {0, 1}})); });
  EXPECT_EQ(kernel(Matrix::from_ints(r, {{1, 2}, {2, 4}})).size(), 1u);
}

TEST(Lattice, StandardLattices) {
  const IntLattice u = standard_lattice(StandardLattice::U);
  EXPECT_EQ(determinant(u), -1);
  EXPECT_TRUE(u.is_even());
  EXPECT_EQ(u.rank(), 2u);
  const IntLattice e8 = standard_lattice(StandardLattice::E8);
  EXPECT_EQ(abs(determinant(e8)), 1);
  EXPECT_TRUE(e8.is_even());
  EXPECT_TRUE(discriminant_group(e8).trivial());
  EXPECT_EQ(signature(e8).negative, 8u);
  const IntLattice k3 = standard_lattice(StandardLattice::K3);
  EXPECT_EQ(k3.rank(), 22u);
  EXPECT_EQ(abs(determinant(k3)), 1);
  EXPECT_TRUE(k3.is_even());
  const Signature s = signature(k3);
  EXPECT_EQ(s.positive, 3u);
  EXPECT_EQ(s.negative, 19u);
  const auto [pos, neg] = oracle::signature_jacobi(k3.gram());
  EXPECT_EQ(pos, 3);
  EXPECT_EQ(neg, 19);
  // E8 root: norm -2
  EXPECT_EQ(e8.pairing(IntVec{1, 0, 0, 0, 0, 0, 0, 0}, IntVec{1, 0, 0, 0, 0, 0, 0, 0}), -2);
  EXPECT_TRUE(u.is_isotropic({1, 0}));
}

TEST(Lattice, DiscriminantGroups) {
  EXPECT_EQ(discriminant_group(diagonal_lattice({5, 5})).elementary_divisors, (std::vector<BigInt>{5, 5}));
  const IntLattice l = direct_sum(standard_lattice(StandardLattice::U), diagonal_lattice({3, 3, 3, 3}));
  const DiscriminantGroup d = discriminant_group(l);
  const auto oracle_div = oracle::elementary_divisors_by_minors(l.gram());
  std::vector<BigInt> nontrivial;
  for (const auto& x : oracle_div)
    if (x != 1) nontrivial.push_back(x);
  EXPECT_EQ(d.elementary_divisors, nontrivial);
  EXPECT_EQ(d.elementary_divisors, (std::vector<BigInt>{3, 3, 3, 3}));
  EXPECT_EQ(d.artin_invariant(3), 2);
  expect_code(ErrorCode::DegenerateForm, [] { discriminant_group(diagonal_lattice({1, 0})); });
}

TEST(Lattice, SmithInvariantUnderUnimodularChange) {
  std::mt19937_64 rng(4);
  const IntMatrix g0 = {{2, 1, 0, 0}, {1, 4, 3, 0}, {0, 3, 6, 3}, {0, 0, 3, 12}};
  const auto ref = discriminant_group(IntLattice(g0)).elementary_divisors;
  for (int t = 0; t < 20; ++t) {
    // Product of random elementary integer matrices.
    IntMatrix p = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int k = 0; k < 6; ++k) {
      const std::size_t i = rng() % 4, j = (i + 1 + rng() % 3) % 4;
      const std::int64_t c = static_cast<std::int64_t>(rng() % 5) - 2;
      for (auto& row : p) row[j] += c * row[i];
    }
    IntMatrix g(4, IntVec(4, 0));
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t c = 0; c < 4; ++c)
          for (std::size_t d = 0; d < 4; ++d) g[a][b] += p[c][a] * g0[c][d] * p[d][b];
    EXPECT_EQ(discriminant_group(IntLattice(g)).elementary_divisors, ref);
  }
}

TEST(Lattice, OrthogonalComplementOverZ) {
  const IntLattice u = standard_lattice(StandardLattice::U);
  const auto c1 = orthogonal_complement(u, {{1, 0}});
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(std::abs(c1[0][0]), 1);
  EXPECT_EQ(c1[0][1], 0);
  EXPECT_EQ(orthogonal_complement(u, {}).size(), 2u);

  const IntLattice uu = direct_sum(u, u);
  const auto c = orthogonal_complement(uu, {{1, 1, 0, 0}});
  ASSERT_EQ(c.size(), 3u);
  for (const auto& v : c) EXPECT_EQ(uu.pairing(v, {1, 1, 0, 0}), 0);
  // saturated: the 3 x 3 minors of the basis have gcd 1
  oracle::BigInt g = 0;
  for (std::size_t skip = 0; skip < 4; ++skip) {
    std::vector<std::vector<oracle::BigInt>> m;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != skip) m.push_back({c[0][j], c[1][j], c[2][j]});
    g = boost::multiprecision::gcd(g, oracle::BigInt(abs(oracle::det_laplace(m))));
  }
  EXPECT_EQ(g, 1);
  // e1 - f1 lies in the complement
  EXPECT_EQ(uu.pairing({1, -1, 0, 0}, {1, 1, 0, 0}), 0);
}

TEST(Lattice, WnPairingAndComplement) {
  const Ring r = RingContext::make(5, 3);
  const QuadLattice l(r, IntMatrix{{5, 1}, {1, 0}});
  const Vec v = vec_from_ints(r, {1, 12});
  EXPECT_EQ(l.norm(v), S(r, 29));
  EXPECT_FALSE(l.is_isotropic(v));
  const QuadLattice u(r, standard_lattice(StandardLattice::U));
  const auto c = u.orthogonal_complement({vec_from_ints(r, {1, 0})});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(u.pairing(c[0], vec_from_ints(r, {1, 0})).is_zero());
}

// ---- isometries --------------------------------------------------------------

TEST(Isometry, VerifyAndOrder) {
  const Ring r = RingContext::make(5, 2);
  const QuadLattice u(r, standard_lattice(StandardLattice::U));
  EXPECT_TRUE(verify_isometry(u, Matrix::identity(r, 2)));
  EXPECT_TRUE(verify_isometry(u, Matrix::from_ints(r, {{0, 1}, {1, 0}})));
  EXPECT_FALSE(verify_isometry(u, Matrix::from_ints(r, {{2, 0}, {0, 1}})));
  EXPECT_EQ(order(Matrix::identity(r, 3), 10), 1u);
  EXPECT_EQ(order(Scalar::from_int(r, -1) * Matrix::identity(r, 3), 10), 2u);
  const Matrix comp = Matrix::from_ints(r, {{0, -1}, {1, -1}});
  EXPECT_EQ(order(comp, 10), 3u);
  EXPECT_EQ(order(Matrix::from_ints(r, {{1, 1}, {0, 1}}), 4), std::nullopt);
}

TEST(Isometry, CharPoly) {
  const Ring r = RingContext::make(5, 2);
  EXPECT_EQ(char_poly(Matrix::identity(r, 2)), vec_from_ints(r, {1, -2, 1}));
  EXPECT_EQ(char_poly(Matrix::from_ints(r, {{0, -1}, {1, -1}})), vec_from_ints(r, {1, 1, 1}));
  const CharPolyReport rep = char_poly_report(Matrix::from_ints(r, {{0, 1}, {1, 0}}));
  EXPECT_EQ(rep.coeffs, vec_from_ints(r, {-1, 0, 1}));
  EXPECT_EQ(rep.integer_reps, (std::vector<std::vector<std::int64_t>>{{-1}, {0}, {1}}));
}

TEST(Isometry, EigenSplitExamples) {
  const Ring r5 = RingContext::make(5, 2);
  const EigenSplit id = eigen_split(Matrix::identity(r5, 3), 1);
  ASSERT_EQ(id.components.size(), 1u);
  EXPECT_EQ(id.components[0].basis.size(), 3u);

  const EigenSplit d = eigen_split(Matrix::from_ints(r5, {{1, 0}, {0, -1}}), 2);
  ASSERT_EQ(d.components.size(), 2u);
  EXPECT_EQ(d.find(S(r5, 1))->basis.size(), 1u);
  EXPECT_EQ(d.find(S(r5, -1))->basis.size(), 1u);

  const Ring r7 = RingContext::make(7, 2);
  const Matrix comp = Matrix::from_ints(r7, {{0, -1}, {1, -1}});
  const EigenSplit c = eigen_split(comp, 3);
  ASSERT_EQ(c.components.size(), 2u);
  EXPECT_EQ(c.components[0].zeta, S(r7, 18));
  EXPECT_EQ(c.components[1].zeta, S(r7, 30));
  for (const auto& comp_c : c.components) {
    ASSERT_EQ(comp_c.basis.size(), 1u);
    const auto v = to_ints(comp_c.basis[0]);
    const auto av = oracle::mat_vec(to_ints(comp), v, 49);
    for (std::size_t i = 0; i < 2; ++i)
      EXPECT_EQ(av[i], oracle::mod(static_cast<oracle::i64>(comp_c.zeta.coeff(0)) * v[i], 49));
  }
  expect_code(ErrorCode::NotTame, [&] { eigen_split(Matrix::identity(r5, 2), 5); });
  expect_code(ErrorCode::InsufficientResidueField, [&] { eigen_split(Matrix::from_ints(r5, {{0, -1}, {1, -1}}), 3); });
}

TEST(Isometry, LiftEigenvector) {
  const Ring r5 = RingContext::make(5, 3);
  const Vec v = vec_from_ints(r5, {3, 4});
  EXPECT_EQ(lift_eigenvector(Matrix::identity(r5, 2), 1, v).vector, v);
  const LiftedEigenvector e = lift_eigenvector(Matrix::from_ints(r5, {{1, 0}, {0, -1}}), 2, vec_from_ints(r5, {0, 1}));
  EXPECT_EQ(e.vector, vec_from_ints(r5, {0, 1}));
  EXPECT_EQ(e.eigenvalue, S(r5, -1));

  const Ring r7 = RingContext::make(7, 2);
  const Matrix comp = Matrix::from_ints(r7, {{0, -1}, {1, -1}});
  // 18 = 4 mod 7; (1, 3) is a 4-eigenvector of the companion matrix mod 7: (-3, 1-3) = (4, -2) = 4 (1, 3) mod 7.
  const Vec vbar = vec_from_ints(r7, {1, 3});
  const LiftedEigenvector l = lift_eigenvector(comp, 3, vbar);
  EXPECT_EQ(l.eigenvalue, S(r7, 18));
  const auto w = to_ints(l.vector);
  const auto aw = oracle::mat_vec(to_ints(comp), w, 49);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(aw[i], oracle::mod(18 * w[i], 49));
  EXPECT_EQ(oracle::mod(w[0], 7), 1);
  EXPECT_EQ(oracle::mod(w[1], 7), 3);
  expect_code(ErrorCode::NotEigenvector, [&] { lift_eigenvector(comp, 3, vec_from_ints(r7, {1, 0})); });
}

TEST(Isometry, SplitPropertiesOnRandomIsometries) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7, 13}[t % 4];
    std::uint64_t n_ord = 1 + rng() % 12;
    while (n_ord % p == 0) n_ord = 1 + rng() % 12;
    const int m = residue_degree_for(p, n_ord);
    const Ring r = RingContext::make(p, 2 + static_cast<int>(rng() % 2), m);
    const auto ti = random::tame_isometry(r, 2 + rng() % 5, n_ord, rng);
    ASSERT_TRUE(verify_isometry(ti.lattice, ti.matrix));
    const EigenSplit s = eigen_split(ti.matrix, n_ord);
    EXPECT_TRUE(check_split(ti.matrix, s).ok());
    // L_z pairs trivially with L_w unless z w = 1
    for (const auto& a : s.components)
      for (const auto& b : s.components) {
        if ((a.zeta * b.zeta).is_one()) continue;
        for (const auto& x : a.basis)
          for (const auto& y : b.basis) EXPECT_TRUE(ti.lattice.pairing(x, y).is_zero());
      }
    // char poly = prod (t - z)^{rank}
    Vec prod{Scalar::one(r)};
    for (const auto& c : s.components)
      for (std::size_t k = 0; k < c.basis.size(); ++k) {
        Vec next(prod.size() + 1, Scalar::zero(r));
        for (std::size_t i = 0; i < prod.size(); ++i) {
          next[i + 1] += prod[i];
          next[i] -= c.zeta * prod[i];
        }
        prod = next;
      }
    EXPECT_EQ(char_poly(ti.matrix), prod);
  }
}

// ---- hensel ------------------------------------------------------------------

TEST(Hensel, RootExamples) {
  const Ring r = RingContext::make(7, 2);
  const HenselRoot h = hensel_root({S(r, -2), S(r, 0), S(r, 1)}, S(r, 3));
  EXPECT_EQ(h.root, S(r, 10));
  EXPECT_EQ(oracle::roots_scan([](oracle::i64 x) { return x * x - 2; }, 49), (oracle::IVec{10, 39}));
  EXPECT_LE(h.steps, newton_step_bound(2));
  EXPECT_EQ(hensel_root({S(r, -9), S(r, 1)}, S(r, 2)).root, S(r, 9));
  expect_code(ErrorCode::NonSimpleRoot, [&] { hensel_root({S(r, 0), S(r, 0), S(r, 1)}, S(r, 0)); });
  expect_code(ErrorCode::NotApproximateRoot, [&] { hensel_root({S(r, -2), S(r, 0), S(r, 1)}, S(r, 1)); });
}

TEST(Hensel, RootUniquenessExhaustive) {
  // Every quadratic x^2 + b x + c over Z/p^n, p^n <= 343, with a simple root mod p.
  for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {7, 2}, {3, 4}, {7, 3}}) {
    const std::int64_t pn = oracle::ipow(p, n);
    const Ring r = RingContext::make(static_cast<std::uint64_t>(p), n);
    const std::int64_t step = n >= 3 ? 7 : 1;  // sparser sampling of (b, c) at larger moduli
    for (std::int64_t b = 0; b < pn; b += step)
      for (std::int64_t c = 0; c < pn; c += step)
        for (std::int64_t x0 = 0; x0 < p; ++x0) {
          if (oracle::mod(x0 * x0 + b * x0 + c, p) != 0 || oracle::mod(2 * x0 + b, p) == 0) continue;
          const auto roots = oracle::roots_scan([&](oracle::i64 x) { return x * x + b * x + c; }, pn);
          std::vector<std::int64_t> near;
          for (auto x : roots)
            if (x % p == x0) near.push_back(x);
          ASSERT_EQ(near.size(), 1u);
          const HenselRoot h = hensel_root({S(r, c), S(r, b), S(r, 1)}, S(r, x0));
          EXPECT_EQ(static_cast<std::int64_t>(h.root.coeff(0)), near[0]);
          EXPECT_LE(h.steps, newton_step_bound(n));
        }
  }
}

TEST(Hensel, IsotropicCombinationExamples) {
  const Ring r = RingContext::make(5, 3);
  const QuadLattice l(r, IntMatrix{{5, 1}, {1, 0}});
  const Vec u = vec_from_ints(r, {1, 0}), v = vec_from_ints(r, {0, 1});
  const IsotropicCombination ic = isotropic_combination(l, u, v);
  EXPECT_EQ(oracle::isotropic_a_scan(5, 1, 0, 5, 3), (oracle::IVec{12}));
  EXPECT_EQ(ic.a, S(r, 12));
  EXPECT_TRUE(l.norm(ic.w).is_zero());
  EXPECT_EQ(vec_in(ic.w, r->residue()), vec_in(u, r->residue()));

  const QuadLattice u_lat(r, standard_lattice(StandardLattice::U));
  EXPECT_TRUE(isotropic_combination(u_lat, u, v).a.is_zero());
  const QuadLattice bad(r, IntMatrix{{5, 5}, {5, 0}});
  expect_code(ErrorCode::BadPairing, [&] { isotropic_combination(bad, u, v); });
  const QuadLattice far(r, IntMatrix{{1, 1}, {1, 0}});
  expect_code(ErrorCode::NotNearIsotropic, [&] { isotropic_combination(far, u, v); });
}

TEST(Hensel, IsotropicCombinationStaysInEigenspace) {
  // u, v in L_-1 of diag(-1, -1, 1, 1): so is w.
  const Ring r = RingContext::make(5, 4);
  const QuadLattice l(r, IntMatrix{{5, 1, 0, 0}, {1, 10, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  const Matrix a = Matrix::diagonal(r, vec_from_ints(r, {-1, -1, 1, 1}));
  const IsotropicCombination ic = isotropic_combination(l, vec_from_ints(r, {1, 0, 0, 0}), vec_from_ints(r, {0, 1, 0, 0}));
  EXPECT_EQ(a * ic.w, S(r, -1) * ic.w);
  EXPECT_TRUE(l.norm(ic.w).is_zero());
}

TEST(Hensel, OrthogonalizeAgainst) {
  const Ring r = RingContext::make(5, 2);
  // Gram chosen so that v.c = 5 and u.c = 1 with c = e3.
  const QuadLattice l(r, IntMatrix{{0, 0, 5}, {0, 0, 1}, {5, 1, 0}});
  const Vec c = vec_from_ints(r, {0, 0, 1}), v = vec_from_ints(r, {1, 0, 0}), u = vec_from_ints(r, {0, 1, 0});
  const Orthogonalized o = orthogonalize_against(l, c, v, u);
  EXPECT_EQ(o.a, S(r, 20));
  EXPECT_TRUE(l.pairing(o.vector, c).is_zero());
  const Orthogonalized z = orthogonalize_against(l, c, vec_from_ints(r, {0, 0, 1}), u);
  EXPECT_TRUE(z.a.is_zero());
  expect_code(ErrorCode::NonUnitPivot, [&] { orthogonalize_against(l, c, u, v); });
}
