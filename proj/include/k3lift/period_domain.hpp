#pragma once

// Finite-precision period domain: rank-1 isotropic submodules whose reduction
// is the Hodge line span(v_1 mod p), parametrized by (pW_n)^{r-2}.
//
// A frame is a basis v_1..v_r of the ambient module with v_1 isotropic,
// v_1 orthogonal to v_2..v_{r-1} (the Fil^1 directions) and v_1.v_r = 1.
// Every such line has a unique generator v_1 + sum a_i v_i with a_i in pW
// for 2 <= i < r, and the last coefficient a_r in p^2 W is forced by
// isotropy.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/hensel.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/matrix.hpp"

namespace k3lift {

class PeriodFrame {
 public:
  /// `basis` holds v_1..v_r as columns in ambient coordinates; identity when
  /// omitted.
  explicit PeriodFrame(QuadLattice ambient, std::optional<Matrix> basis = std::nullopt)
      : ambient_(std::move(ambient)),
        basis_(basis ? std::move(*basis) : Matrix::identity(ambient_.ring(), ambient_.rank())) {
    const std::size_t r = ambient_.rank();
    require(r >= 3, ErrorCode::InvalidFrame, "frame rank must be at least 3");
    require(basis_.rows() == r && basis_.cols() == r, ErrorCode::InvalidInput, "frame basis must be r x r");
    require(determinant(basis_).is_unit(), ErrorCode::InvalidFrame, "frame vectors do not form a basis");
    gram_ = basis_.transpose() * ambient_.gram() * basis_;
    basis_inv_ = inverse(basis_);
    require(gram_(0, 0).is_zero(), ErrorCode::InvalidFrame, "v_1 is not isotropic");
    require(gram_(0, r - 1).is_one(), ErrorCode::InvalidFrame, "v_1.v_r must equal 1");
    for (std::size_t i = 1; i + 1 < r; ++i)
      require(gram_(0, i).is_zero(), ErrorCode::InvalidFrame,
              "v_1 must be orthogonal to v_" + std::to_string(i + 1));
    if (!determinant(gram_).is_unit()) fail(ErrorCode::FormNotPerfect, "ambient pairing is not perfect");
  }

  const Ring& ring() const { return ambient_.ring(); }
  std::size_t rank() const { return ambient_.rank(); }
  /// Number of free coordinates, r - 2.
  std::size_t dimension() const { return rank() - 2; }
  const QuadLattice& ambient() const { return ambient_; }
  const Matrix& basis() const { return basis_; }
  /// Gram matrix in the frame basis.
  const Matrix& gram() const { return gram_; }

  Vec to_ambient(const Vec& frame_coords) const { return basis_ * frame_coords; }
  Vec to_frame(const Vec& ambient_coords) const { return basis_inv_ * ambient_coords; }

 private:
  QuadLattice ambient_;
  Matrix basis_;
  Matrix basis_inv_;
  Matrix gram_;
};

using FrameRef = std::shared_ptr<const PeriodFrame>;

struct PeriodLine {
  FrameRef frame;
  Vec coords;  // a_2 .. a_{r-1}
  Scalar last;  // a_r

  /// v_1 + sum a_i v_i in frame coordinates.
  Vec generator() const {
    Vec g{Scalar::one(frame->ring())};
    g.insert(g.end(), coords.begin(), coords.end());
    g.push_back(last);
    return g;
  }
  Vec generator_ambient() const { return frame->to_ambient(generator()); }
};

inline void check_coordinates(const PeriodFrame& f, const Vec& coords) {
  check_dims(coords.size(), f.dimension(), "period coordinates");
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i].valuation() < 1)
      fail(ErrorCode::ValuationViolation,
           "coordinate a_" + std::to_string(i + 2) + " = " + coords[i].to_string() + " is not in pW");
}

/// Solves for the unique a_r in p^2 W making the generator isotropic.
inline PeriodLine complete_period_line(const FrameRef& frame, const Vec& coords) {
  check_coordinates(*frame, coords);
  const Ring& r = frame->ring();
  const std::size_t rk = frame->rank();
  const Matrix& g = frame->gram();
  Vec x{Scalar::one(r)};
  x.insert(x.end(), coords.begin(), coords.end());
  x.push_back(Scalar::zero(r));
  const Vec vr = unit_vec(r, rk, rk - 1);
  // (x + t v_r)^2 = x^2 + 2t (x.v_r) + t^2 (v_r.v_r)
  const Poly quad{bilinear(g, x, x), Scalar::from_int(r, 2) * bilinear(g, x, vr), g(rk - 1, rk - 1)};
  const Scalar last = hensel_root(quad, Scalar::zero(r)).root;
  if (last.valuation() < std::min(2, r->n()))
    fail(ErrorCode::ValuationViolation, "completed a_r is not in p^2 W");
  return {frame, coords, last};
}

/// The line spanned by `generator` (frame coordinates), normalized to
/// coefficient 1 on v_1. Throws unless the line lies in the period domain.
inline PeriodLine line_from_generator(const FrameRef& frame, const Vec& generator) {
  check_dims(generator.size(), frame->rank(), "period generator");
  if (!generator[0].is_unit())
    fail(ErrorCode::ValuationViolation, "generator does not reduce to the Hodge line (v_1 coefficient not a unit)");
  const Vec g = generator[0].inverse() * generator;
  Vec coords(g.begin() + 1, g.end() - 1);
  check_coordinates(*frame, coords);
  const Scalar last = g.back();
  if (last.valuation() < std::min(2, frame->ring()->n()))
    fail(ErrorCode::ValuationViolation, "a_r = " + last.to_string() + " is not in p^2 W");
  if (!bilinear(frame->gram(), g, g).is_zero()) fail(ErrorCode::NotIsotropic, "generator is not isotropic");
  return {frame, std::move(coords), last};
}

inline Vec coordinates_of(const PeriodLine& line) { return line.coords; }

/// sigma-semilinear Frobenius in frame coordinates: F(sum c_i v_i) = M sigma(c).
struct FrobeniusStructure {
  Matrix matrix;

  Vec apply(const Vec& x) const {
    Vec s;
    s.reserve(x.size());
    for (const auto& c : x) s.push_back(frobenius(c));
    return matrix * s;
  }
};

enum class CheckStatus { Pass, Fail, NotChecked, Indeterminate };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotChecked: return "not checked";
    case CheckStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct ConditionReport {
  CheckStatus hodge_line = CheckStatus::Fail;      // condition 1
  CheckStatus isotropic = CheckStatus::Fail;       // condition 2
  CheckStatus frobenius = CheckStatus::NotChecked;  // condition 3
  int frobenius_valuation = -1;
  std::string note;

  bool ok() const {
    return hodge_line == CheckStatus::Pass && isotropic == CheckStatus::Pass &&
           (frobenius == CheckStatus::Pass || frobenius == CheckStatus::NotChecked);
  }
};

/// Conditions 1 and 2 always; condition 3 (F(v_M) in p^2 H but not p^3 H)
/// only when Frobenius data is supplied.
inline ConditionReport check_conditions(const PeriodLine& line, const FrobeniusStructure* frob = nullptr) {
  const PeriodFrame& f = *line.frame;
  const Vec g = line.generator();
  ConditionReport rep;
  bool reduces = g[0].is_unit();
  for (std::size_t i = 1; i < g.size(); ++i) reduces = reduces && g[i].valuation() >= 1;
  rep.hodge_line = reduces ? CheckStatus::Pass : CheckStatus::Fail;
  rep.isotropic = bilinear(f.gram(), g, g).is_zero() ? CheckStatus::Pass : CheckStatus::Fail;
  if (!frob) {
    rep.note = "Frobenius condition not checked: automatic for lines satisfying conditions 1 and 2";
    return rep;
  }
  check_dims(frob->matrix.rows(), f.rank(), "Frobenius matrix");
  const int v = valuation(frob->apply(g));
  rep.frobenius_valuation = v;
  const int n = f.ring()->n();
  if (v < 2) {
    rep.frobenius = CheckStatus::Fail;
  } else if (v < n) {
    rep.frobenius = v == 2 ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    // F(v_M) vanishes at this precision: it lies in p^3 H when n >= 3, and
    // the exact valuation is undecidable below that.
    rep.frobenius = n >= 3 ? CheckStatus::Fail : CheckStatus::Indeterminate;
    if (n < 3) rep.note = "precision too low to separate p^2 H from p^3 H";
  }
  return rep;
}

}  // namespace k3lift
