#include <gtest/gtest.h>

#include <cstdint>
#include <random>
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

const IntMatrix kToyGram = {{0, 0, 0, 1}, {0, 2, 0, 0}, {0, 0, 2, 0}, {1, 0, 0, 0}};

FrameRef toy_frame(int n) {
  return std::make_shared<const PeriodFrame>(QuadLattice(RingContext::make(3, n), kToyGram));
}

FrameRef rank3_frame(const Ring& r) {
  return std::make_shared<const PeriodFrame>(QuadLattice(r, IntMatrix{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
}

}  // namespace

// ---- frames and period lines ------------------------------------------------

TEST(PeriodFrame, Validation) {
  const Ring r = RingContext::make(3, 3);
  expect_code(ErrorCode::InvalidFrame, [&] { PeriodFrame(QuadLattice(r, IntMatrix{{0, 1}, {1, 0}})); });
  expect_code(ErrorCode::InvalidFrame, [&] { PeriodFrame(QuadLattice(r, IntMatrix{{2, 0, 1}, {0, 1, 0}, {1, 0, 0}})); });
  expect_code(ErrorCode::InvalidFrame, [&] { PeriodFrame(QuadLattice(r, IntMatrix{{0, 0, 2}, {0, 1, 0}, {2, 0, 0}})); });
  expect_code(ErrorCode::InvalidFrame, [&] { PeriodFrame(QuadLattice(r, IntMatrix{{0, 1, 1}, {1, 1, 0}, {1, 0, 0}})); });
  expect_code(ErrorCode::FormNotPerfect, [&] { PeriodFrame(QuadLattice(r, IntMatrix{{0, 0, 1}, {0, 3, 0}, {1, 0, 0}})); });
  expect_code(ErrorCode::InvalidFrame, [&] {
    PeriodFrame(QuadLattice(r, IntMatrix{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}), Matrix::from_ints(r, {{1, 1, 0}, {0, 0, 0}, {0, 0, 1}}));
  });
  EXPECT_EQ(toy_frame(3)->dimension(), 2u);
}

TEST(PeriodLine, ToyCompletion) {
  const FrameRef f = toy_frame(3);
  const Ring& r = f->ring();
  const PeriodLine line = complete_period_line(f, vec_from_ints(r, {3, 0}));
  EXPECT_EQ(line.last, S(r, 18));
  EXPECT_EQ(oracle::last_coordinate_scan(to_ints(f->gram()), {1, 3, 0, 0}, 27), (oracle::IVec{18}));
  EXPECT_EQ(line.generator(), vec_from_ints(r, {1, 3, 0, 18}));
  const ConditionReport rep = check_conditions(line);
  EXPECT_EQ(rep.hodge_line, CheckStatus::Pass);
  EXPECT_EQ(rep.isotropic, CheckStatus::Pass);
  EXPECT_EQ(rep.frobenius, CheckStatus::NotChecked);
  EXPECT_TRUE(rep.ok());
  expect_code(ErrorCode::ValuationViolation, [&] { complete_period_line(f, vec_from_ints(r, {1, 0})); });
  expect_code(ErrorCode::InvalidInput, [&] { complete_period_line(f, vec_from_ints(r, {3})); });
}

TEST(PeriodLine, ToyExhaustiveUniqueness) {
  // Every (a2, a3) in (3 Z/27)^2 has exactly one isotropic completion mod 27,
  // and it lies in 9 Z/27.
  const FrameRef f = toy_frame(3);
  const Ring& r = f->ring();
  const auto g = to_ints(f->gram());
  for (std::int64_t a2 = 0; a2 < 27; a2 += 3)
    for (std::int64_t a3 = 0; a3 < 27; a3 += 3) {
      const auto sols = oracle::last_coordinate_scan(g, {1, a2, a3, 0}, 27);
      ASSERT_EQ(sols.size(), 1u);
      EXPECT_EQ(sols[0] % 9, 0);
      const PeriodLine line = complete_period_line(f, vec_from_ints(r, {a2, a3}));
      EXPECT_EQ(static_cast<std::int64_t>(line.last.coeff(0)), sols[0]);
      EXPECT_TRUE(check_conditions(line).ok());
    }
}

TEST(PeriodLine, FromGenerator) {
  const FrameRef f = toy_frame(3);
  const Ring& r = f->ring();
  const PeriodLine l = line_from_generator(f, vec_from_ints(r, {2, 6, 0, 36}));
  EXPECT_EQ(l.coords, vec_from_ints(r, {3, 0}));
  EXPECT_EQ(l.last, S(r, 18));
  expect_code(ErrorCode::NotIsotropic, [&] { line_from_generator(f, vec_from_ints(r, {1, 3, 0, 9})); });
  expect_code(ErrorCode::ValuationViolation, [&] { line_from_generator(f, vec_from_ints(r, {3, 3, 0, 0})); });
  expect_code(ErrorCode::ValuationViolation, [&] { line_from_generator(f, vec_from_ints(r, {1, 1, 0, 0})); });
  expect_code(ErrorCode::ValuationViolation, [&] { line_from_generator(f, vec_from_ints(r, {1, 0, 0, 3})); });
}

TEST(PeriodLine, FrobeniusCondition) {
  const FrameRef f = toy_frame(3);
  const Ring& r = f->ring();
  const PeriodLine line = complete_period_line(f, vec_from_ints(r, {3, 0}));
  auto frob = [&](std::int64_t c) { return FrobeniusStructure{S(r, c) * Matrix::identity(r, 4)}; };
  FrobeniusStructure f9 = frob(9), f3 = frob(3), f27 = frob(27);
  EXPECT_EQ(check_conditions(line, &f9).frobenius, CheckStatus::Pass);
  EXPECT_EQ(check_conditions(line, &f9).frobenius_valuation, 2);
  EXPECT_EQ(check_conditions(line, &f3).frobenius, CheckStatus::Fail);
  EXPECT_EQ(check_conditions(line, &f27).frobenius, CheckStatus::Fail);
  EXPECT_FALSE(check_conditions(line, &f3).ok());

  const FrameRef f2 = toy_frame(2);
  const PeriodLine l2 = complete_period_line(f2, vec_from_ints(f2->ring(), {3, 0}));
  FrobeniusStructure g9{S(f2->ring(), 9) * Matrix::identity(f2->ring(), 4)};
  const ConditionReport rep = check_conditions(l2, &g9);
  EXPECT_EQ(rep.frobenius, CheckStatus::Indeterminate);
  EXPECT_FALSE(rep.note.empty());
}

TEST(PeriodLine, RandomFramesRoundTrip) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::uint64_t p = t % 2 == 0 ? 3 : 5;
    const int n = 1 + t % 4;
    const Ring r = RingContext::make(p, n, t % 3 == 0 ? 2 : 1);
    const std::size_t rank = 3 + rng() % 6;
    const FrameRef f = random::period_frame(r, rank, rng);
    const Vec coords = random::vector(r, rank - 2, rng, 1);
    const PeriodLine line = complete_period_line(f, coords);
    EXPECT_TRUE(check_conditions(line).ok());
    EXPECT_GE(line.last.valuation(), std::min(2, n));
    const Vec amb = line.generator_ambient();
    EXPECT_TRUE(f->ambient().is_isotropic(amb));
    // Rescaling the generator by a unit gives back the same coordinates.
    const Scalar u = random::unit(r, rng);
    const PeriodLine back = line_from_generator(f, u * line.generator());
    EXPECT_EQ(back.coords, coords);
    EXPECT_EQ(back.last, line.last);
    EXPECT_EQ(f->to_frame(amb), line.generator());
  }
}

// ---- crystal family ---------------------------------------------------------

TEST(Crystal, TruncationDegree) {
  EXPECT_EQ(truncation_degree(3, 5), 3);
  EXPECT_EQ(truncation_degree(3, 3), 4);
  EXPECT_EQ(truncation_degree(1, 7), 1);
  for (std::uint64_t p : {3u, 5u, 7u, 13u})
    for (int n = 1; n <= 8; ++n) {
      const int m = truncation_degree(n, p);
      // Every k >= M has v_p(p^k / k!) >= n.
      for (int k = m; k < m + 60; ++k) {
        int vf = 0;
        for (int j = 2; j <= k; ++j)
          for (int t = j; t % static_cast<int>(p) == 0; t /= static_cast<int>(p)) ++vf;
        EXPECT_GE(k - vf, n) << "p=" << p << " n=" << n << " k=" << k;
      }
      if (m > 1) {
        EXPECT_LT((m - 1) - (m - 2) / static_cast<int>(p - 1), n);
      }
    }
}

TEST(Crystal, DividedPowersMatchExactRationals) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {5, 3}, {7, 2}}) {
    const Ring r = RingContext::make(static_cast<std::uint64_t>(p), n);
    const std::int64_t pn = oracle::ipow(p, n);
    for (std::int64_t g = 0; g < pn; g += p)
      for (int k = 0; k <= 9; ++k) {
        const auto expected = oracle::divided_power(g, k, p, pn);
        ASSERT_GE(expected, 0);
        EXPECT_EQ(static_cast<std::int64_t>(divided_power(S(r, g), k).coeff(0)), expected) << g << " " << k;
      }
  }
  expect_code(ErrorCode::ValuationViolation, [] {
    const Ring r = RingContext::make(5, 3);
    divided_power(S(r, 1), 2);
  });
}

TEST(Crystal, ConnectionValidation) {
  const Ring r = RingContext::make(5, 3);
  const FrameRef f = rank3_frame(r);
  const Matrix d = Matrix::from_ints(r, {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}});
  validate(ConnectionData{f, {d}});
  expect_code(ErrorCode::InvalidConnection, [&] { validate(ConnectionData{f, {}}); });
  expect_code(ErrorCode::InvalidConnection, [&] { validate(ConnectionData{f, {d, d}}); });
  expect_code(ErrorCode::InvalidConnection,
              [&] { validate(ConnectionData{f, {Matrix::from_ints(r, {{0, 0, 0}, {2, 0, 0}, {0, 0, 0}})}}); });

  const FrameRef f4 = toy_frame(3);
  const Ring& r3 = f4->ring();
  const Matrix d1 = Matrix::from_ints(r3, {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  const Matrix d2 = Matrix::from_ints(r3, {{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 0, 0}});
  expect_code(ErrorCode::InvalidConnection, [&] { validate(ConnectionData{f4, {d1, d2}}); });
}

TEST(Crystal, PhiMapExample) {
  const Ring r = RingContext::make(5, 3);
  const ConnectionData c{rank3_frame(r), {Matrix::from_ints(r, {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}})}};
  const PhiImage img = phi_map(c, {vec_from_ints(r, {5})});
  EXPECT_EQ(img.coords, vec_from_ints(r, {5}));
  EXPECT_EQ(img.h, vec_from_ints(r, {1, 5, 0}));
  const PhiPreimage pre = phi_invert(c, vec_from_ints(r, {5}));
  EXPECT_EQ(pre.point.values, vec_from_ints(r, {5}));
  EXPECT_EQ(pre.iterations, 0);
  expect_code(ErrorCode::ValuationViolation, [&] { phi_map(c, {vec_from_ints(r, {1})}); });
  expect_code(ErrorCode::ValuationViolation, [&] { phi_invert(c, vec_from_ints(r, {2})); });
}

TEST(Crystal, TransportMatchesNaiveSum) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    const std::uint64_t p = t % 2 == 0 ? 3 : 5;
    const int n = 2 + t % 3;
    const Ring r = RingContext::make(p, n);
    const std::size_t rank = 3 + t % 3;
    const ConnectionData c = random::connection(random::period_frame(r, rank, rng), rng);
    validate(c);
    const Vec g = random::vector(r, rank - 2, rng, 1);
    const Vec y = random::vector(r, rank, rng);
    std::vector<oracle::IMat> ds;
    for (const auto& d : c.differentials) ds.push_back(to_ints(d));
    const auto pn = static_cast<std::int64_t>(r->pn());
    // The naive sum runs well past the truncation degree; the extra terms vanish.
    const auto expected = oracle::transport_naive(ds, to_ints(g), to_ints(y), static_cast<std::int64_t>(p), pn,
                                                  truncation_degree(n, p) + 4);
    EXPECT_EQ(to_ints(transport(c, {g}, y)), expected);
  }
}

TEST(Crystal, TransportIsFlat) {
  // Commuting D_i make transport a group action: T(g + h) = T(g) T(h).
  std::mt19937_64 rng(22);
  for (int t = 0; t < 30; ++t) {
    const Ring r = RingContext::make(t % 2 == 0 ? 3 : 5, 3, t % 5 == 0 ? 2 : 1);
    const std::size_t rank = 3 + t % 3;
    const ConnectionData c = random::connection(random::period_frame(r, rank, rng), rng);
    const Vec g = random::vector(r, rank - 2, rng, 1), h = random::vector(r, rank - 2, rng, 1);
    const Vec y = random::vector(r, rank, rng);
    EXPECT_EQ(transport(c, {g + h}, y), transport(c, {g}, transport(c, {h}, y)));
    EXPECT_EQ(transport(c, {zero_vec(r, rank - 2)}, y), y);
  }
}

TEST(Crystal, PhiFirstOrderAndInverse) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const std::uint64_t p = t % 2 == 0 ? 3 : 5;
    const int n = 2 + t % 3;
    const Ring r = RingContext::make(p, n);
    const std::size_t d = 1 + t % 3;
    const ConnectionData c = random::connection(random::period_frame(r, d + 2, rng), rng);
    const Vec g = random::vector(r, d, rng, 1);
    const PhiImage img = phi_map(c, {g});
    const Ring r2 = r->with_precision(2);
    EXPECT_EQ(vec_in(img.coords, r2), vec_in(g, r2));
    const PhiPreimage pre = phi_invert(c, img.coords);
    EXPECT_EQ(phi_map(c, pre.point).coords, img.coords);
    EXPECT_EQ(pre.point.values, g);
    EXPECT_LE(pre.iterations, n);
  }
}
