#pragma once

// M-N correspondences at finite dimension.
//
// A correspondence stores one dim×dim matrix per matrix unit of each algebra.
// left_rep is a *-homomorphism of M, right_rep a *-anti-homomorphism of N:
// right_action(b)·ξ is ξb, so right_action(xy) = right_action(y)·right_action(x).
// The laws are validated, not enforced, so deliberately broken inputs can be
// built for negative tests.

#include <optional>
#include <vector>

#include "corrkit/matalg.hpp"
#include "corrkit/random.hpp"

namespace corrkit {

class Correspondence {
 public:
  Correspondence() = default;
  Correspondence(TracialAlgebra left, TracialAlgebra right, Index dim,
                 std::vector<MatrixXcd> left_rep, std::vector<MatrixXcd> right_rep);

  const TracialAlgebra& left_alg() const { return left_; }
  const TracialAlgebra& right_alg() const { return right_; }
  Index dim() const { return dim_; }
  const std::vector<MatrixXcd>& left_rep() const { return left_rep_; }
  const std::vector<MatrixXcd>& right_rep() const { return right_rep_; }
  bool is_bimodule_over_one_algebra() const { return left_ == right_; }

  MatrixXcd left_action(const Element& a) const;
  MatrixXcd right_action(const Element& b) const;

  /// aξ
  VectorXcd act_left(const Element& a, const VectorXcd& xi) const { return left_action(a) * xi; }
  /// ξb
  VectorXcd act_right(const VectorXcd& xi, const Element& b) const { return right_action(b) * xi; }

  void require_vector(const VectorXcd& xi) const {
    if (xi.size() != dim_) throw StructuralError("vector length does not match correspondence");
  }

 private:
  TracialAlgebra left_, right_;
  Index dim_ = 0;
  std::vector<MatrixXcd> left_rep_, right_rep_;
};

struct ValidationReport {
  double homomorphism = 0.0;  // left and right multiplicativity, unitality
  double star = 0.0;          // *-compatibility
  double commutation = 0.0;
  double boundedness = 0.0;   // max(0, ‖rep(e)‖ − ‖e‖) over matrix units
  double sort_membership = 0.0;  // max(0, bound − K) over declared sort elements
  double tolerance = 0.0;
  bool passed = false;

  double worst() const {
    return std::max({homomorphism, star, commutation, boundedness, sort_membership});
  }
};

/// A vector declared to lie in the sort S_K.
struct SortDeclaration {
  VectorXcd vector;
  double K = 0.0;
};

ValidationReport validate(const Correspondence& c, double tol,
                          const std::vector<SortDeclaration>& declared = {});

/// L²(M) with left and right multiplication, in orthonormal L² coordinates.
Correspondence trivial_correspondence(const TracialAlgebra& alg);

/// L²(M) ⊗ L²(N), index α·dim N + β.
Correspondence coarse_correspondence(const TracialAlgebra& left, const TracialAlgebra& right);

Correspondence direct_sum(const std::vector<Correspondence>& parts,
                          const std::vector<Index>& multiplicities);

/// Isometric equivariant embedding of summand `part` (copy `copy`) into direct_sum(parts, mult).
MatrixXcd direct_sum_embedding(const std::vector<Correspondence>& parts,
                               const std::vector<Index>& multiplicities, std::size_t part,
                               Index copy);

/// C^{n_k} ⊗ C^{m_l} with x ↦ x_k ⊗ 1 and y ↦ 1 ⊗ y_lᵀ.
Correspondence irreducible_correspondence(const TracialAlgebra& left, const TracialAlgebra& right,
                                          Index left_block, Index right_block);

/// Same representations transported by the unitary u: rep ↦ u rep u*.
Correspondence rotate(const Correspondence& c, const MatrixXcd& u);

/// Restriction to the invariant subspace spanned by the orthonormal columns of `basis`.
Correspondence restrict_to(const Correspondence& c, const MatrixXcd& basis);

/// Direct sum of random irreducibles conjugated by a Haar unitary, total dim ≤ max_dim.
Correspondence random_correspondence(const TracialAlgebra& left, const TracialAlgebra& right,
                                     Index max_dim, Rng& rng);

/// Image of 1̂ in trivial(M).
VectorXcd unit_vector(const TracialAlgebra& alg);

/// Orthonormal basis of span{ a ξ b : a, b matrix units } (the closure of MξN).
MatrixXcd orbit_basis(const Correspondence& c, const VectorXcd& xi, double rel_tol = 1e-9);

}  // namespace corrkit
