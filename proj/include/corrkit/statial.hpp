#pragma once

// State families on a finite-dimensional C*-algebra and the seminorm
// ‖x‖_{2,Φ} = sup_{φ∈Φ} max{φ(x*x), φ(xx*)}^{1/2}.

#include <cstdint>
#include <vector>

#include "corrkit/sigmafin.hpp"

namespace corrkit {

struct StatialFamily {
  TracialAlgebra alg;
  std::vector<Element> densities;  // trace pairing, Tr ρ = 1
  bool full_closure = false;       // use the unitary-orbit closure of the list

  StatialFamily() = default;
  /// Throws DomainError on an empty list or a density that is not a state.
  StatialFamily(TracialAlgebra a, std::vector<Element> d, bool full);
};

double statial_norm(const Element& x, const StatialFamily& fam);

/// The full-closure value computed from the spectra of x*x (or of xx* when via_adjoint).
double statial_full_norm(const Element& x, const StatialFamily& fam, bool via_adjoint);

struct FaithfulCheck {
  bool faithful = false;
  double min_eigenvalue = 0.0;
  Element witness;  // nonzero x with ‖x‖_{2,Φ} ≈ 0 when not faithful
};

FaithfulCheck faithful_check(const StatialFamily& fam);

struct FullCheck {
  double max_deviation = 0.0;  // max_u min_φ ‖u*ρ_u u − ρ_φ‖₁
  int samples = 0;
};

FullCheck full_check(const StatialFamily& fam, int samples, std::uint64_t seed);

struct MultiplierInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct MultiplierOptions {
  int probes = 64;
  std::uint64_t seed = 0x3a1;
};

/// Interval for the smallest K with max{‖aξ‖², ‖ξa‖²} ≤ K‖ξ‖² in ‖·‖_{2,Φ}.
MultiplierInterval multiplier_bound(const Element& a, const StatialFamily& fam,
                                    const MultiplierOptions& opts = {});

struct StatialTerm {
  Element a;
  StatialFamily family;
};

struct StatialTail {
  std::vector<MultiplierInterval> intervals;
  double tail_fraction = 0.0;  // share of the last half with hi ≤ K
};

StatialTail statial_sequence_tail(const std::vector<StatialTerm>& seq, double K,
                                  const MultiplierOptions& opts = {});

}  // namespace corrkit
