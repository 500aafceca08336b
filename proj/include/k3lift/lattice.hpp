#pragma once

// Quadratic modules over W_n: a free module with a symmetric Gram form.

#include <string>
#include <utility>
#include <vector>

#include "k3lift/errors.hpp"
#include "k3lift/int_lattice.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"

namespace k3lift {

class QuadLattice {
 public:
  QuadLattice() = default;
  explicit QuadLattice(Matrix gram) : gram_(std::move(gram)) {
    require(gram_.square() && gram_.rows() > 0, ErrorCode::InvalidInput, "Gram matrix must be square and nonempty");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        require(gram_(i, j) == gram_(j, i), ErrorCode::InvalidInput, "Gram matrix must be symmetric");
  }
  QuadLattice(const Ring& r, const IntMatrix& gram) : QuadLattice(Matrix::from_ints(r, gram)) {}
  /// Base change of an integral lattice to W_n.
  QuadLattice(const Ring& r, const IntLattice& l) : QuadLattice(r, l.gram()) {}

  const Ring& ring() const { return gram_.ring(); }
  std::size_t rank() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  Scalar pairing(const Vec& v, const Vec& w) const {
    check_dims(v.size(), rank(), "pairing");
    check_dims(w.size(), rank(), "pairing");
    return bilinear(gram_, v, w);
  }
  Scalar norm(const Vec& v) const { return pairing(v, v); }
  bool is_isotropic(const Vec& v) const { return norm(v).is_zero(); }

  /// Unit determinant: the pairing is perfect.
  bool is_perfect() const { return determinant(gram_).is_unit(); }

  /// Gram matrix of the listed vectors.
  Matrix gram_of(const std::vector<Vec>& vs) const {
    Matrix g(ring(), vs.size(), vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j) g(i, j) = pairing(vs[i], vs[j]);
    return g;
  }

  /// Basis of {x : x.s = 0 for all s in S}. Throws PrecisionLoss when the
  /// answer depends on the precision.
  std::vector<Vec> orthogonal_complement(const std::vector<Vec>& s) const {
    if (s.empty()) {
      std::vector<Vec> out;
      for (std::size_t i = 0; i < rank(); ++i) out.push_back(unit_vec(ring(), rank(), i));
      return out;
    }
    Matrix rows(ring(), s.size(), rank());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vec sg = gram_.transpose() * s[i];
      for (std::size_t j = 0; j < rank(); ++j) rows(i, j) = sg[j];
    }
    return kernel(rows);
  }

  /// Same form in the basis given by the columns of `basis`.
  QuadLattice change_basis(const Matrix& basis) const { return QuadLattice(basis.transpose() * gram_ * basis); }

  bool operator==(const QuadLattice& o) const { return gram_ == o.gram_; }

 private:
  Matrix gram_;
};

}  // namespace k3lift
