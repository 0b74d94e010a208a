#pragma once

// Fell neighborhoods, weak containment and central vectors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrkit/boundcalc.hpp"

namespace corrkit {

/// Basic neighborhood V(H; ε, E, F, S) of a source correspondence H.
struct FellQuery {
  std::vector<Element> E;       // left algebra
  std::vector<Element> F;       // right algebra
  std::vector<VectorXcd> S;     // vectors of the source
  double eps = 1e-6;
  Index mult = 1;               // witnesses live in target^{⊕ mult}
};

struct FellOptions {
  int starts = 32;
  int batch = 4;                 // starts between early-stop checks
  int max_iters = 200;           // Levenberg-Marquardt iterations per start
  int cg_iters = 80;
  double target_residual = 1e-10;  // early stop once the best gap is this small
  std::uint64_t seed = 0xfe11;
  /// Extra starting witnesses, each a list of |S| vectors of length dim·m' with m' ≤ mult;
  /// shorter ones are zero-padded.
  std::vector<std::vector<VectorXcd>> warm_starts;
};

struct FellResult {
  double residual = 0.0;  // max |⟨ξ_i, xξ_j y⟩ − ⟨η_i, xη_j y⟩|
  std::vector<VectorXcd> witnesses;  // η_i ∈ target^{⊕ mult}, copy-major
  bool converged = false;
  bool within_eps = false;
  int starts_run = 0;
};

/// All matrix units of an algebra.
std::vector<Element> matrix_units(const TracialAlgebra& alg);

/// Target correspondence repeated `mult` times.
Correspondence amplify(const Correspondence& c, Index mult);

FellResult fell_residual(const Correspondence& source, const FellQuery& q,
                         const Correspondence& target, const FellOptions& opts = {});

struct WeakContainmentReport {
  std::vector<FellQuery> grid;
  std::vector<FellResult> results;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool contained = false;  // every residual ≤ tolerance
  bool converged = true;
  double seconds = 0.0;
};

/// Default grid: all matrix units for E and F, one query per cyclic summand of
/// the source with S an orthonormal basis of that summand.
std::vector<FellQuery> default_fell_grid(const Correspondence& source, Index mult, double eps);

WeakContainmentReport weak_containment_report(const Correspondence& source,
                                              const Correspondence& target, Index mult,
                                              double tol,
                                              std::optional<std::vector<FellQuery>> grid = {},
                                              const FellOptions& opts = {});

/// trivial(alg) against coarse(alg, alg)^{⊕ mult}.
WeakContainmentReport semidiscrete_control(const TracialAlgebra& alg, Index mult, double tol,
                                           const FellOptions& opts = {});

/// max over generators a of ‖aξ − ξa‖.
double commutator_defect(const Correspondence& c, const VectorXcd& xi,
                         const std::vector<Element>& generators);

/// Matrix units scaled to unit operator norm (they already are).
std::vector<Element> default_generators(const TracialAlgebra& alg);

struct CentralReport {
  double defect = 0.0;  // of the input over default generators
  VectorXcd central_part;
  double distance = 0.0;  // ‖ξ − central_part‖
};

/// Orthonormal basis of the central vectors {η : aη = ηa for all a}.
MatrixXcd central_subspace(const Correspondence& c);

CentralReport central_projection(const Correspondence& c, const VectorXcd& xi);

struct AveragedCentralOptions {
  int samples = 256;
  std::uint64_t seed = 0xa7e;
};

struct AveragedCentralReport {
  CentralReport central;  // central_part is η' (not normalized)
  VectorXcd eta;          // η'/‖η'‖
  bool degenerate = false;  // η' = 0
  double sampled_sup = 0.0;    // max over sampled unitaries of ‖[u,ξ]‖
  double certified_sup = 0.0;  // 2 Σ_i ‖[e_i, ξ]‖ ≥ sup_u ‖[u,ξ]‖
  double distance = 0.0;       // ‖ξ − η‖
  double distance_limit = 0.0; // 2δ
  double bound = 0.0;          // certificate of η
  double bound_limit = 0.0;    // K/(1−δ)²
  bool lemma_holds = false;
};

/// Normalized central projection of a K-bounded unit vector whose sampled
/// unitary commutators are at most δ < 1.
AveragedCentralReport averaged_central_vector(const Correspondence& c, const VectorXcd& xi,
                                              double K, double delta,
                                              const AveragedCentralOptions& opts = {});

/// Minimum-norm point of conv{u_j ξ u_j*} over sampled Haar unitaries.
VectorXcd sampled_min_norm_point(const Correspondence& c, const VectorXcd& xi, int samples,
                                 std::uint64_t seed);

struct AlmostCentralOptions {
  int starts = 8;
  int max_iters = 500;
  std::uint64_t seed = 0xc3a7;
};

struct AlmostCentralResult {
  bool found = false;
  bool converged = false;
  VectorXcd xi;            // best candidate
  double commutator = 0.0; // max_x ‖[x,ξ]‖
  double left_trace = 0.0; // max_x |⟨xξ,ξ⟩ − τ(x)|
  double right_trace = 0.0;  // max_x |⟨ξx,ξ⟩ − τ(x)|
  double bound = 0.0;
  double norm_defect = 0.0;  // |‖ξ‖ − 1|
  double residual = 0.0;     // max(0, violation of the worst constraint)
};

/// Searches for a K-bounded unit vector with ‖[x,ξ]‖ ≤ δ, |⟨xξ,ξ⟩ − τ(x)| ≤ δ
/// and |⟨ξx,ξ⟩ − τ(x)| ≤ δ for x in the generators.
AlmostCentralResult almost_central_search(const Correspondence& c,
                                          const std::vector<Element>& generators, double delta,
                                          double K, const AlmostCentralOptions& opts = {});

}  // namespace corrkit
