#pragma once

// States with densities, GNS spaces, φ-right bounded elements and the modular flow.
//
// A state is given by a density ρ ⪰ 0 through the unnormalized trace pairing
// φ(x) = Σ_k Tr(ρ_k x_k), so φ(1) = Tr ρ = 1. The algebra's own trace is not used.

#include <optional>
#include <vector>

#include "corrkit/boundcalc.hpp"

namespace corrkit {

class FaithfulState {
 public:
  FaithfulState() = default;
  /// Throws DomainError unless ρ is positive with Tr ρ = 1 and full support.
  FaithfulState(TracialAlgebra alg, Element density);

  const TracialAlgebra& algebra() const { return alg_; }
  const Element& density() const { return rho_; }
  cd operator()(const Element& x) const;

  static FaithfulState tracial(const TracialAlgebra& alg);

 private:
  TracialAlgebra alg_;
  Element rho_;
};

/// Σ_k Tr(ρ_k x_k), for any density.
cd pairing(const Element& rho, const Element& x);

inline constexpr double kFaithfulCutoff = 1e-12;

struct GNSSpace {
  FaithfulState state;
  MatrixXcd gram;  // G(α, β) = ⟨e_β, e_α⟩_φ = φ(e_α* e_β), unit coordinates
  double gram_min_eigenvalue = 0.0;
  bool left_faithful = false;  // x ↦ left multiplication on H_φ is injective
};

GNSSpace gns(const FaithfulState& phi);

/// ⟨a, b⟩_φ = φ(b* a)
cd phi_inner(const FaithfulState& phi, const Element& a, const Element& b);
double phi_norm(const FaithfulState& phi, const Element& a);

/// Smallest K with ‖ba‖²_φ ≤ K‖b‖²_φ: ‖ρ^{-1/2} a ρ^{1/2}‖²_op.
double phi_right_bound(const Element& a, const FaithfulState& phi);

/// √φ(a*a + aa*)
double sharp_norm(const Element& a, const Element& rho);
inline double sharp_norm(const Element& a, const FaithfulState& phi) {
  return sharp_norm(a, phi.density());
}

struct SigmaMembership {
  bool member = false;
  double op_norm = 0.0;
  double right_bound = 0.0;
};

/// ‖a‖ ≤ N and phi_right_bound(a) ≤ K, both with 1e-10 slack.
SigmaMembership sort_membership_sigma(const Element& a, const FaithfulState& phi, double K,
                                      double N);

/// ρ^{it} x ρ^{−it}
Element modular_flow(const Element& x, const FaithfulState& phi, double t);

struct SigmaTerm {
  Element x;
  Element rho;  // density of φ_i
};

struct OcneanuDiagnostics {
  TailProfile ideal;           // ‖m_i‖^♯
  TailProfile test;            // ‖j_i‖^♯
  TailProfile left_multiplier;   // ‖m_i j_i‖^♯
  TailProfile right_multiplier;  // ‖j_i m_i‖^♯
  double max_op_norm = 0.0;
};

/// Tail profiles for the ideal and multiplier predicates. `tests` (if nonempty)
/// has one element per index; operator norms above `norm_cap` are rejected.
OcneanuDiagnostics ocneanu_predicates(const TracialAlgebra& alg, const std::vector<SigmaTerm>& seq,
                                      const std::vector<Element>& tests, double norm_cap);

/// ‖σ_t^{φ_i}(x_i) − σ_t^φ(x)‖^♯_{φ_i} for declared limits x, φ.
TailProfile modular_limit_check(const TracialAlgebra& alg, const std::vector<SigmaTerm>& seq,
                                const std::optional<Element>& limit_x,
                                const std::optional<FaithfulState>& limit_state, double t);

struct DensityProjection {
  Element projection;  // positive spectral support of Kρ − uρu*
  Element element;     // p u
  double distance = 0.0;     // ‖p u − u‖_φ
  double right_bound = 0.0;  // phi_right_bound(p u)
};

/// The projection p_K approximating u by φ-right bounded elements.
DensityProjection density_projection(const Element& u, const FaithfulState& phi, double K);

}  // namespace corrkit
