#pragma once

// Bounded-vector calculus: Radon-Nikodym certificates, cutoffs, renormalization
// and uniformization of convergent sequences.
//
// A vector ξ is left K-bounded when ⟨cξ,ξ⟩ ≤ K τ(c) for all c ≥ 0. At finite
// dimension the best K is the operator norm of the element b with
// ⟨cξ,ξ⟩ = τ(c b); dually d with ⟨ξc,ξ⟩ = τ(d c) on the right.

#include <optional>
#include <vector>

#include "corrkit/bimodule.hpp"

namespace corrkit {

struct BoundCertificate {
  Element b_left;   // ⟨cξ,ξ⟩ = τ_M(c b_left)
  Element d_right;  // ⟨ξc,ξ⟩ = τ_N(d_right c)
  double K_left = 0.0;
  double K_right = 0.0;

  double bound() const { return std::max(K_left, K_right); }
};

enum class Side { Left, Right };

BoundCertificate radon_nikodym(const Correspondence& c, const VectorXcd& xi);

/// Radon-Nikodym element of one side only.
Element radon_nikodym_element(const Correspondence& c, const VectorXcd& xi, Side side);

/// Eigenvalues within this band above R are not cut.
inline constexpr double kCutoffBand = 1e-9;

struct CutoffResult {
  VectorXcd vector;    // (1 − π)ξ, or ξ(1 − π) on the right
  Element projection;  // π = spectral projection of the certificate above R
};

/// Left cutoff at level R > 0; the output is left R-bounded.
CutoffResult cutoff(const Correspondence& c, const VectorXcd& xi, double R);
CutoffResult cutoff_right(const Correspondence& c, const VectorXcd& xi, double R);
CutoffResult cutoff_side(const Correspondence& c, const VectorXcd& xi, double R, Side side);

struct RenormalizeResult {
  VectorXcd vector;
  BoundCertificate input;
  /// ‖(1 − f(b))ξ‖ + ‖ξ(1 − f(d))‖, an upper bound for ‖ξ − output‖.
  double distance_bound = 0.0;
};

/// f(b) ξ f(d) with f(t) = min{1, t^{-1/2}}: a 1-bounded (subtracial) vector.
RenormalizeResult renormalize_subtracial(const Correspondence& c, const VectorXcd& xi);

/// f_K(b) ξ f_K(d) with f_K(t) = min{1, (K/t)^{1/2}}: a K-bounded vector.
RenormalizeResult renormalize_to_bound(const Correspondence& c, const VectorXcd& xi, double K);

struct VectorSequence {
  std::vector<VectorXcd> terms;
  std::optional<VectorXcd> limit;
};

struct UniformizeOptions {
  Index window = 8;       // Mazur window [i, i + window)
  int max_rounds = 40;
  double fw_gap = 1e-10;  // Frank-Wolfe duality-gap stop, relative to the problem scale
  double solver_tol = 1e-8;
  int fw_max_iters = 20000;
};

struct UniformizeResult {
  std::vector<VectorXcd> terms;
  std::vector<BoundCertificate> certificates;
  std::vector<double> distances;  // ‖terms[i] − limit‖
  /// Bounds of the pipeline output before the final correction.
  std::vector<double> stage_left_bounds, stage_right_bounds;
  double stage_bound = 0.0;      // B = 4K/√3
  double composite_bound = 0.0;  // 2B/√3 = 8K/3
  int rounds_left = 0, rounds_right = 0;
  double max_mazur_residual = 0.0;
};

/// Cutoff, Mazur convex combination and stagewise summation on each side, then
/// a final K-renormalization. Requires a declared K-bounded limit.
UniformizeResult uniformize_sequence(const Correspondence& c, const VectorSequence& s, double K,
                                     const UniformizeOptions& opts = {});

struct TailProfile {
  std::vector<double> values;
  double tail_sup = 0.0;  // sup over the last half
};

double tail_sup(const std::vector<double>& values);

/// A term x_i ∈ M_i viewed as the vector x̂_i of trivial(M_i).
struct TracialTerm {
  TracialAlgebra alg;
  Element x;
};

/// ‖χ_K(|x_i|) |x_i|‖₂ for each term, χ_K the indicator of (K, ∞).
TailProfile connes_tail(const std::vector<TracialTerm>& terms, double K);

struct SortMembership {
  bool member = false;
  BoundCertificate certificate;
};

/// ξ ∈ S_K iff max(K_left, K_right) ≤ K + 1e-10.
SortMembership sort_membership(const Correspondence& c, const VectorXcd& xi, double K);

}  // namespace corrkit
