#pragma once

// Independent oracles and seeded generators shared by the test binaries.

#include <Eigen/Dense>

#include "corrkit/analysis.hpp"
#include "corrkit/bimodule.hpp"
#include "corrkit/boundcalc.hpp"
#include "corrkit/cpdict.hpp"
#include "corrkit/random.hpp"

namespace corrkit::testing {

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Element diag_element(const TracialAlgebra& alg, std::vector<cd> entries) {
  Element x = zero(alg);
  std::size_t p = 0;
  for (Index k = 0; k < alg.num_blocks(); ++k)
    for (Index i = 0; i < alg.block_size(k); ++i) x[k](i, i) = entries.at(p++);
  return x;
}

/// x̂ in trivial(alg).
inline VectorXcd hat(const TracialAlgebra& alg, const Element& x) { return to_l2(alg, x); }

/// Solves τ(c_r b) = ⟨c_r ξ, ξ⟩ over a random basis {c_r} (left) or
/// τ(d c_r) = ⟨ξ c_r, ξ⟩ (right) by a dense linear solve.
inline Element rn_oracle(const Correspondence& c, const VectorXcd& xi, Side side, Rng& rng) {
  const TracialAlgebra& alg = side == Side::Left ? c.left_alg() : c.right_alg();
  const Index n = alg.dim();
  MatrixXcd M(n, n);
  VectorXcd y(n);
  for (Index r = 0; r < n; ++r) {
    const Element cr = random_element(alg, rng);
    const MatrixXcd act = side == Side::Left ? c.left_action(cr) : c.right_action(cr);
    y(r) = xi.dot(act * xi);
    for (Index a = 0; a < n; ++a) {
      const auto u = alg.unit(a);
      // τ(c e_ij) = λ_k c_ji
      M(r, a) = alg.weight(u.block) * cr[u.block](u.col, u.row);
    }
  }
  return from_coords(alg, VectorXcd(M.fullPivLu().solve(y)));
}

/// λ_max of D^{-1/2} T D^{-1/2} for positive definite D, via Cholesky.
inline double generalized_max(const MatrixXcd& T, const MatrixXcd& D) {
  Eigen::LLT<MatrixXcd> llt((D + D.adjoint()) / 2.0);
  const MatrixXcd Linv = llt.matrixL().solve(MatrixXcd::Identity(D.rows(), D.cols()));
  const MatrixXcd M = Linv * T * Linv.adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((M + M.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Random algebras and a random correspondence of total dimension ≤ max_dim.
inline Correspondence random_corpus_member(Rng& rng, Index max_dim) {
  const Index block = max_dim < 9 ? 2 : 3;
  const TracialAlgebra left = random_algebra(rng, 3, block, 14);
  const TracialAlgebra right = random_algebra(rng, 3, block, 14);
  return random_correspondence(left, right, max_dim, rng);
}

/// A vector with a wide spread of certificate eigenvalues.
inline VectorXcd random_vector(const Correspondence& c, Rng& rng) {
  std::uniform_real_distribution<double> scale(-2.0, 2.0);
  return std::pow(10.0, scale(rng)) * gaussian_vector(c.dim(), rng);
}

inline double max_entry(const MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace corrkit::testing
