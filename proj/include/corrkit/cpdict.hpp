#pragma once

// Completely positive maps and cyclic correspondences.
//
// A c.p. map φ: M → N is stored as the matrix of its action on matrix-unit
// coordinates. H_φ is the completion of M ⊗ N under
//   ⟨m₁⊗n₁, m₂⊗n₂⟩ = τ_N(φ(m₂*m₁) n₁ n₂*),
// with the right action written in N^op so that (m⊗n)·n' = m⊗nn'.

#include <cstdint>
#include <optional>
#include <vector>

#include "corrkit/bimodule.hpp"

namespace corrkit {

struct CPMap {
  TracialAlgebra source, target;
  MatrixXcd action;  // target.dim() × source.dim(), unit coordinates

  CPMap() = default;
  CPMap(TracialAlgebra s, TracialAlgebra t, MatrixXcd a);

  Element operator()(const Element& x) const;
};

CPMap zero_map(const TracialAlgebra& source, const TracialAlgebra& target);
CPMap identity_map(const TracialAlgebra& alg);
/// m ↦ τ_M(m)·1_N
CPMap trace_map(const TracialAlgebra& source, const TracialAlgebra& target);

/// x ↦ V x_k V* placed in block l of the target (V is m_l × n_k).
struct KrausTerm {
  Index source_block = 0, target_block = 0;
  MatrixXcd V;
};
CPMap kraus_map(const TracialAlgebra& source, const TracialAlgebra& target,
                const std::vector<KrausTerm>& terms);

struct CPCheckReport {
  double choi_min_eigenvalue = 0.0;
  double star_residual = 0.0;
  double unit_gap_min_eigenvalue = 0.0;   // of 1 − φ(1)
  double trace_gap_min_eigenvalue = 0.0;  // of 1 − h, τ_N∘φ = τ_M(h ·)
  double tolerance = 0.0;
  bool completely_positive = false;
  bool star_preserving = false;
  bool subtracial = false;
};

CPCheckReport check_cp(const CPMap& phi, double tol = 1e-10);

/// Gram matrix of the H_φ form on the basis e_a ⊗ f_b (index a·dim N + b),
/// G(i, j) = ⟨v_j, v_i⟩.
MatrixXcd cp_gram(const CPMap& phi);

inline constexpr double kGnsNullCutoff = 1e-11;

struct CyclicCorrespondence {
  Correspondence corr;
  VectorXcd vector;  // class of 1 ⊗ 1
  /// Coefficient vectors on e_a ⊗ f_b map into H_φ through this matrix.
  MatrixXcd quotient;
};

CyclicCorrespondence cp_to_correspondence(const CPMap& phi);

/// φ_ξ(m) = T* m T read inside N, T: L²(N) → H, n̂ ↦ ξn.
CPMap vector_to_cp(const Correspondence& c, const VectorXcd& xi);

struct CyclicSummand {
  MatrixXcd basis;       // orthonormal columns spanning the summand in H
  Correspondence corr;   // restriction to the summand
  VectorXcd vector;      // cyclic vector, in H
  CPMap phi;             // φ of the cyclic vector
};

/// Orthogonal decomposition into irreducible, hence cyclic, summands.
std::vector<CyclicSummand> cyclic_decomposition(const Correspondence& c,
                                                std::uint64_t seed = 0x5eed);

struct IntertwinerResult {
  std::optional<MatrixXcd> unitary;  // U: H1 → H2 with U L1 = L2 U and U R1 = R2 U
  double residual = 0.0;
  Index intertwiner_dim = 0;
};

/// Equivariant unitary between two correspondences over the same algebras, if one exists.
IntertwinerResult equivariant_unitary(const Correspondence& c1, const Correspondence& c2,
                                      std::uint64_t seed = 0x1e7);

}  // namespace corrkit
