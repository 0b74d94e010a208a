#pragma once

// Seeded random generators for algebra elements, vectors and Haar unitaries.
// Every randomized routine in corrkit takes an Rng& seeded by the caller.

#include <random>

#include "corrkit/matalg.hpp"

namespace corrkit {

using Rng = std::mt19937_64;

inline cd complex_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline MatrixXcd gaussian_matrix(Index rows, Index cols, Rng& rng) {
  MatrixXcd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

inline VectorXcd gaussian_vector(Index n, Rng& rng) { return gaussian_matrix(n, 1, rng); }

/// Haar-distributed unitary via QR with phase correction.
inline MatrixXcd haar_unitary(Index n, Rng& rng) {
  MatrixXcd z = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const cd d = r(i, i);
    const double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

inline Element random_element(const TracialAlgebra& alg, Rng& rng) {
  Element x;
  for (Index n : alg.blocks()) x.blocks.push_back(gaussian_matrix(n, n, rng));
  return x;
}

inline Element random_hermitian(const TracialAlgebra& alg, Rng& rng) {
  Element x = random_element(alg, rng);
  for (auto& b : x.blocks) b = (b + b.adjoint()).eval() / 2.0;
  return x;
}

inline Element random_positive(const TracialAlgebra& alg, Rng& rng) {
  Element x = random_element(alg, rng);
  return adjoint(x) * x;
}

inline Element haar_unitary(const TracialAlgebra& alg, Rng& rng) {
  Element u;
  for (Index n : alg.blocks()) u.blocks.push_back(haar_unitary(n, rng));
  return u;
}

/// Random algebra with block sizes in [1, max_block] and random normalized weights.
inline TracialAlgebra random_algebra(Rng& rng, Index max_blocks, Index max_block,
                                     Index max_dim = kDefaultMaxAlgebraDim) {
  std::uniform_int_distribution<Index> nb(1, max_blocks);
  std::uniform_int_distribution<Index> bs(1, max_block);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  for (;;) {
    const Index count = nb(rng);
    std::vector<Index> blocks;
    std::vector<double> raw;
    Index dim = 0;
    double total = 0.0;
    for (Index k = 0; k < count; ++k) {
      blocks.push_back(bs(rng));
      raw.push_back(w(rng));
      total += raw.back() * static_cast<double>(blocks.back());
      dim += blocks.back() * blocks.back();
    }
    if (dim > max_dim) continue;
    for (double& r : raw) r /= total;
    return TracialAlgebra(blocks, raw, max_dim);
  }
}

}  // namespace corrkit
