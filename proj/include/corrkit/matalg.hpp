#pragma once

// Finite-dimensional tracial algebras: M = ⊕_k M_{n_k}(C) with trace
// τ(x) = Σ_k λ_k Tr(x_k), Σ_k λ_k n_k = 1.
//
// Elements are stored blockwise as dense matrices templated on the scalar.
// Coordinates of an element are its matrix-unit coefficients, block by block,
// row-major inside a block. These "unit coordinates" are the fixed linear
// basis used by every representation in the library.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "corrkit/errors.hpp"

namespace corrkit {

using Index = Eigen::Index;
using cd = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;

/// Default cap on the linear dimension Σ n_k² of an algebra.
inline constexpr Index kDefaultMaxAlgebraDim = 64;

inline constexpr double kSelfAdjointTol = 1e-10;

class TracialAlgebra {
 public:
  TracialAlgebra() = default;

  /// Throws DomainError unless all n_k >= 1, λ_k > 0 and Σ λ_k n_k = 1.
  TracialAlgebra(std::vector<Index> blocks, std::vector<double> weights,
                 Index max_dim = kDefaultMaxAlgebraDim)
      : blocks_(std::move(blocks)), weights_(std::move(weights)) {
    if (blocks_.empty()) throw DomainError("algebra needs at least one block");
    if (blocks_.size() != weights_.size())
      throw DomainError("algebra: blocks and weights differ in length");
    double total = 0.0;
    Index dim = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k] < 1) throw DomainError("algebra: block size must be >= 1");
      if (!(weights_[k] > 0.0)) throw DomainError("algebra: trace weights must be > 0");
      total += weights_[k] * static_cast<double>(blocks_[k]);
      offsets_.push_back(dim);
      dim += blocks_[k] * blocks_[k];
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw DomainError("algebra: trace is not normalized (sum lambda_k n_k = " +
                        std::to_string(total) + ")");
    if (dim > max_dim)
      throw DomainError("algebra: linear dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(max_dim));
    dim_ = dim;
  }

  /// Markov weights λ_k = n_k / Σ n_j².
  static TracialAlgebra markov(std::vector<Index> blocks,
                               Index max_dim = kDefaultMaxAlgebraDim) {
    double denom = 0.0;
    for (Index n : blocks) denom += static_cast<double>(n * n);
    std::vector<double> weights;
    for (Index n : blocks) weights.push_back(static_cast<double>(n) / denom);
    return TracialAlgebra(std::move(blocks), std::move(weights), max_dim);
  }

  /// M_n with the normalized trace.
  static TracialAlgebra full(Index n) { return markov({n}); }

  const std::vector<Index>& blocks() const { return blocks_; }
  const std::vector<double>& weights() const { return weights_; }
  Index num_blocks() const { return static_cast<Index>(blocks_.size()); }
  Index block_size(Index k) const { return blocks_[k]; }
  double weight(Index k) const { return weights_[k]; }
  Index offset(Index k) const { return offsets_[k]; }
  /// Linear dimension Σ n_k².
  Index dim() const { return dim_; }

  struct UnitIndex {
    Index block, row, col;
  };

  /// Matrix unit behind coordinate `alpha`.
  UnitIndex unit(Index alpha) const {
    for (Index k = num_blocks() - 1; k >= 0; --k) {
      if (alpha >= offsets_[k]) {
        const Index local = alpha - offsets_[k];
        return {k, local / blocks_[k], local % blocks_[k]};
      }
    }
    throw StructuralError("algebra: coordinate out of range");
  }

  Index coordinate(Index block, Index row, Index col) const {
    return offsets_[block] + row * blocks_[block] + col;
  }

  friend bool operator==(const TracialAlgebra& a, const TracialAlgebra& b) {
    if (a.blocks_ != b.blocks_) return false;
    for (std::size_t k = 0; k < a.weights_.size(); ++k)
      if (std::abs(a.weights_[k] - b.weights_[k]) > 1e-14) return false;
    return true;
  }

 private:
  std::vector<Index> blocks_;
  std::vector<double> weights_;
  std::vector<Index> offsets_;
  Index dim_ = 0;
};

template <typename Scalar>
struct BlockElement {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Matrix> blocks;

  BlockElement() = default;
  explicit BlockElement(std::vector<Matrix> b) : blocks(std::move(b)) {}

  Index num_blocks() const { return static_cast<Index>(blocks.size()); }
  const Matrix& operator[](Index k) const { return blocks[k]; }
  Matrix& operator[](Index k) { return blocks[k]; }
};

using Element = BlockElement<cd>;

template <typename Scalar>
bool belongs_to(const TracialAlgebra& alg, const BlockElement<Scalar>& x) {
  if (x.num_blocks() != alg.num_blocks()) return false;
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    if (x[k].rows() != alg.block_size(k) || x[k].cols() != alg.block_size(k)) return false;
  }
  return true;
}

template <typename Scalar>
void require_member(const TracialAlgebra& alg, const BlockElement<Scalar>& x) {
  if (!belongs_to(alg, x)) throw StructuralError("element does not match algebra block shape");
}

template <typename Scalar>
void require_same_shape(const BlockElement<Scalar>& x, const BlockElement<Scalar>& y) {
  bool ok = x.num_blocks() == y.num_blocks();
  for (Index k = 0; ok && k < x.num_blocks(); ++k)
    ok = x[k].rows() == y[k].rows() && x[k].cols() == y[k].cols();
  if (!ok) throw StructuralError("elements have different block shapes");
}

template <typename Scalar = cd>
BlockElement<Scalar> zero(const TracialAlgebra& alg) {
  BlockElement<Scalar> x;
  for (Index n : alg.blocks())
    x.blocks.push_back(BlockElement<Scalar>::Matrix::Zero(n, n));
  return x;
}

template <typename Scalar = cd>
BlockElement<Scalar> identity(const TracialAlgebra& alg) {
  BlockElement<Scalar> x;
  for (Index n : alg.blocks())
    x.blocks.push_back(BlockElement<Scalar>::Matrix::Identity(n, n));
  return x;
}

template <typename Scalar = cd>
BlockElement<Scalar> matrix_unit(const TracialAlgebra& alg, Index block, Index row, Index col) {
  auto x = zero<Scalar>(alg);
  x[block](row, col) = Scalar(1);
  return x;
}

/// Matrix unit behind coordinate `alpha`.
template <typename Scalar = cd>
BlockElement<Scalar> basis_element(const TracialAlgebra& alg, Index alpha) {
  const auto u = alg.unit(alpha);
  return matrix_unit<Scalar>(alg, u.block, u.row, u.col);
}

/// Central projection onto block k.
template <typename Scalar = cd>
BlockElement<Scalar> block_unit(const TracialAlgebra& alg, Index block) {
  auto x = zero<Scalar>(alg);
  x[block].setIdentity();
  return x;
}

template <typename Scalar>
BlockElement<Scalar> adjoint(const BlockElement<Scalar>& x) {
  BlockElement<Scalar> y;
  for (const auto& b : x.blocks) y.blocks.push_back(b.adjoint());
  return y;
}

template <typename Scalar>
BlockElement<Scalar> operator+(const BlockElement<Scalar>& x, const BlockElement<Scalar>& y) {
  require_same_shape(x, y);
  BlockElement<Scalar> z;
  for (Index k = 0; k < x.num_blocks(); ++k) z.blocks.push_back(x[k] + y[k]);
  return z;
}

template <typename Scalar>
BlockElement<Scalar> operator-(const BlockElement<Scalar>& x, const BlockElement<Scalar>& y) {
  require_same_shape(x, y);
  BlockElement<Scalar> z;
  for (Index k = 0; k < x.num_blocks(); ++k) z.blocks.push_back(x[k] - y[k]);
  return z;
}

template <typename Scalar>
BlockElement<Scalar> operator*(const BlockElement<Scalar>& x, const BlockElement<Scalar>& y) {
  require_same_shape(x, y);
  BlockElement<Scalar> z;
  for (Index k = 0; k < x.num_blocks(); ++k) z.blocks.push_back(x[k] * y[k]);
  return z;
}

template <typename Scalar>
BlockElement<Scalar> operator*(Scalar s, const BlockElement<Scalar>& x) {
  BlockElement<Scalar> z;
  for (const auto& b : x.blocks) z.blocks.push_back(s * b);
  return z;
}

inline Element operator*(double s, const Element& x) { return cd(s) * x; }

/// τ(x) = Σ_k λ_k Tr(x_k).
template <typename Scalar>
Scalar trace(const TracialAlgebra& alg, const BlockElement<Scalar>& x) {
  require_member(alg, x);
  Scalar t(0);
  for (Index k = 0; k < alg.num_blocks(); ++k) t += alg.weight(k) * x[k].trace();
  return t;
}

/// Unnormalized trace Σ_k Tr(x_k); the pairing used for state densities.
template <typename Scalar>
Scalar matrix_trace(const BlockElement<Scalar>& x) {
  Scalar t(0);
  for (const auto& b : x.blocks) t += b.trace();
  return t;
}

/// ⟨x, y⟩ = τ(y* x).
template <typename Scalar>
Scalar l2_inner(const TracialAlgebra& alg, const BlockElement<Scalar>& x,
                const BlockElement<Scalar>& y) {
  require_member(alg, x);
  require_member(alg, y);
  Scalar t(0);
  for (Index k = 0; k < alg.num_blocks(); ++k)
    t += alg.weight(k) * (y[k].adjoint() * x[k]).trace();
  return t;
}

template <typename Scalar>
double l2_norm(const TracialAlgebra& alg, const BlockElement<Scalar>& x) {
  return std::sqrt(std::max(0.0, std::real(l2_inner(alg, x, x))));
}

template <typename Matrix>
double matrix_op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

/// Operator norm: max over blocks of the largest singular value.
template <typename Scalar>
double op_norm(const BlockElement<Scalar>& x) {
  double n = 0.0;
  for (const auto& b : x.blocks) n = std::max(n, matrix_op_norm(b));
  return n;
}

template <typename Scalar>
double max_abs(const BlockElement<Scalar>& x) {
  double n = 0.0;
  for (const auto& b : x.blocks)
    if (b.size() > 0) n = std::max(n, b.cwiseAbs().maxCoeff());
  return n;
}

/// Unit coordinates (matrix-unit coefficients).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> to_coords(const TracialAlgebra& alg,
                                                   const BlockElement<Scalar>& x) {
  require_member(alg, x);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(alg.dim());
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    const Index n = alg.block_size(k);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) v(alg.coordinate(k, i, j)) = x[k](i, j);
  }
  return v;
}

template <typename Scalar>
BlockElement<Scalar> from_coords(const TracialAlgebra& alg,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
  if (v.size() != alg.dim()) throw StructuralError("coordinate vector has wrong length");
  auto x = zero<Scalar>(alg);
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    const Index n = alg.block_size(k);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) x[k](i, j) = v(alg.coordinate(k, i, j));
  }
  return x;
}

/// L²(M, τ) coordinates in the orthonormal basis e_ij / √λ_k.
inline VectorXcd to_l2(const TracialAlgebra& alg, const Element& x) {
  VectorXcd v = to_coords(alg, x);
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    const Index n = alg.block_size(k);
    v.segment(alg.offset(k), n * n) *= std::sqrt(alg.weight(k));
  }
  return v;
}

inline Element from_l2(const TracialAlgebra& alg, const VectorXcd& v) {
  if (v.size() != alg.dim()) throw StructuralError("L2 vector has wrong length");
  VectorXcd w = v;
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    const Index n = alg.block_size(k);
    w.segment(alg.offset(k), n * n) /= std::sqrt(alg.weight(k));
  }
  return from_coords(alg, w);
}

/// Matrix of y ↦ x·y on unit coordinates (equally on L² coordinates).
inline MatrixXcd left_multiplication(const TracialAlgebra& alg, const Element& x) {
  require_member(alg, x);
  MatrixXcd m = MatrixXcd::Zero(alg.dim(), alg.dim());
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    const Index n = alg.block_size(k);
    // (x y)_{ij} = Σ_l x_il y_lj
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l)
          m(alg.coordinate(k, i, j), alg.coordinate(k, l, j)) = x[k](i, l);
  }
  return m;
}

/// Matrix of y ↦ y·x on unit coordinates (equally on L² coordinates).
inline MatrixXcd right_multiplication(const TracialAlgebra& alg, const Element& x) {
  require_member(alg, x);
  MatrixXcd m = MatrixXcd::Zero(alg.dim(), alg.dim());
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    const Index n = alg.block_size(k);
    // (y x)_{ij} = Σ_l y_il x_lj
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l)
          m(alg.coordinate(k, i, j), alg.coordinate(k, i, l)) = x[k](l, j);
  }
  return m;
}

template <typename Scalar>
double self_adjoint_defect(const BlockElement<Scalar>& x) {
  double d = 0.0;
  for (const auto& b : x.blocks) d = std::max(d, (b - b.adjoint()).norm());
  return d;
}

/// Per-block spectral data of a self-adjoint element: x_k = U_k diag(λ_k) U_k*.
template <typename Scalar>
struct SelfAdjointWitness {
  using Matrix = typename BlockElement<Scalar>::Matrix;
  BlockElement<Scalar> element;
  std::vector<VectorXd> eigenvalues;  // ascending per block
  std::vector<Matrix> eigenvectors;

  double min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : eigenvalues)
      if (e.size() > 0) m = std::min(m, e(0));
    return m;
  }
  double max_eigenvalue() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : eigenvalues)
      if (e.size() > 0) m = std::max(m, e(e.size() - 1));
    return m;
  }

  /// max_k ‖U_k diag(λ_k) U_k* − x_k‖_F
  double reconstruction_residual() const {
    double r = 0.0;
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
      Matrix rebuilt = eigenvectors[k] * eigenvalues[k].template cast<Scalar>().asDiagonal() *
                       eigenvectors[k].adjoint();
      r = std::max(r, (rebuilt - element.blocks[k]).norm());
    }
    return r;
  }
};

/// Symmetrizes x ↦ (x + x*)/2 after checking ‖x − x*‖ ≤ tol·max(1, ‖x‖).
template <typename Scalar>
SelfAdjointWitness<Scalar> spectral_decompose(const BlockElement<Scalar>& x,
                                              double tol = kSelfAdjointTol) {
  using Matrix = typename BlockElement<Scalar>::Matrix;
  double scale = 1.0;
  for (const auto& b : x.blocks) scale = std::max(scale, b.norm());
  if (self_adjoint_defect(x) > tol * scale)
    throw DomainError("functional calculus needs a self-adjoint element");
  SelfAdjointWitness<Scalar> w;
  for (const auto& b : x.blocks) {
    Matrix h = (b + b.adjoint()) / Scalar(2);
    w.element.blocks.push_back(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    w.eigenvalues.push_back(es.eigenvalues());
    w.eigenvectors.push_back(es.eigenvectors());
  }
  return w;
}

/// f(x) = U f(λ) U* blockwise.
template <typename Scalar, typename F>
BlockElement<Scalar> apply_spectral(const SelfAdjointWitness<Scalar>& w, F&& f) {
  using Matrix = typename BlockElement<Scalar>::Matrix;
  BlockElement<Scalar> y;
  for (std::size_t k = 0; k < w.eigenvalues.size(); ++k) {
    const auto& lam = w.eigenvalues[k];
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fl(lam.size());
    for (Index i = 0; i < lam.size(); ++i) fl(i) = Scalar(f(lam(i)));
    Matrix m = w.eigenvectors[k] * fl.asDiagonal() * w.eigenvectors[k].adjoint();
    y.blocks.push_back(std::move(m));
  }
  return y;
}

template <typename Scalar, typename F>
BlockElement<Scalar> functional_calculus(const BlockElement<Scalar>& x, F&& f) {
  return apply_spectral(spectral_decompose(x), std::forward<F>(f));
}

struct PositivityReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
};

template <typename Scalar>
PositivityReport positivity_check(const BlockElement<Scalar>& x, double tol) {
  PositivityReport r;
  double scale = 1.0;
  for (const auto& b : x.blocks) scale = std::max(scale, b.norm());
  const bool hermitian = self_adjoint_defect(x) <= tol * scale;
  using Matrix = typename BlockElement<Scalar>::Matrix;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : x.blocks) {
    Matrix h = (b + b.adjoint()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (h.size() > 0) m = std::min(m, es.eigenvalues()(0));
  }
  r.min_eigenvalue = m;
  r.positive = hermitian && m >= -tol;
  return r;
}

/// Spectral projection onto eigenvalues strictly above `level`.
template <typename Scalar>
BlockElement<Scalar> spectral_projection_above(const SelfAdjointWitness<Scalar>& w, double level) {
  return apply_spectral(w, [level](double t) { return t > level ? 1.0 : 0.0; });
}

/// Rank of a projection-valued element (sum of its eigenvalues rounded).
template <typename Scalar>
Index projection_rank(const BlockElement<Scalar>& p) {
  return static_cast<Index>(std::llround(std::real(matrix_trace(p))));
}

}  // namespace corrkit
