#include "corrkit/sigmafin.hpp"

#include <cmath>

namespace corrkit {

cd pairing(const Element& rho, const Element& x) {
  require_same_shape(rho, x);
  cd t(0.0);
  for (Index k = 0; k < rho.num_blocks(); ++k) t += (rho[k] * x[k]).trace();
  return t;
}

FaithfulState::FaithfulState(TracialAlgebra alg, Element density)
    : alg_(std::move(alg)), rho_(std::move(density)) {
  require_member(alg_, rho_);
  if (self_adjoint_defect(rho_) > 1e-10)
    throw DomainError("state density is not self-adjoint");
  for (auto& b : rho_.blocks) b = (b + b.adjoint()).eval() / 2.0;
  const double tr = std::real(matrix_trace(rho_));
  if (std::abs(tr - 1.0) > 1e-12)
    throw DomainError("state density must have trace 1 (got " + std::to_string(tr) + ")");
  const double m = spectral_decompose(rho_).min_eigenvalue();
  if (!(m > kFaithfulCutoff))
    throw DomainError("state is not faithful (min density eigenvalue " + std::to_string(m) + ")");
}

cd FaithfulState::operator()(const Element& x) const { return pairing(rho_, x); }

FaithfulState FaithfulState::tracial(const TracialAlgebra& alg) {
  Element rho = zero(alg);
  for (Index k = 0; k < alg.num_blocks(); ++k) rho[k].diagonal().setConstant(alg.weight(k));
  return FaithfulState(alg, rho);
}

cd phi_inner(const FaithfulState& phi, const Element& a, const Element& b) {
  return phi(adjoint(b) * a);
}

double phi_norm(const FaithfulState& phi, const Element& a) {
  return std::sqrt(std::max(0.0, std::real(phi_inner(phi, a, a))));
}

GNSSpace gns(const FaithfulState& phi) {
  const auto& alg = phi.algebra();
  GNSSpace g;
  g.state = phi;
  g.gram = MatrixXcd::Zero(alg.dim(), alg.dim());
  for (Index a = 0; a < alg.dim(); ++a)
    for (Index b = 0; b < alg.dim(); ++b)
      g.gram(a, b) = phi_inner(phi, basis_element(alg, b), basis_element(alg, a));
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((g.gram + g.gram.adjoint()) / 2.0,
                                              Eigen::EigenvaluesOnly);
  g.gram_min_eigenvalue = es.eigenvalues()(0);
  if (!(g.gram_min_eigenvalue > kFaithfulCutoff))
    throw DomainError("GNS Gram matrix is singular: state is not faithful");

  // Left multiplication by x on H_φ is the unit-coordinate matrix of y ↦ xy;
  // injectivity of x ↦ that matrix means the stacked images have full rank.
  MatrixXcd stacked(alg.dim() * alg.dim(), alg.dim());
  for (Index a = 0; a < alg.dim(); ++a) {
    const MatrixXcd L = left_multiplication(alg, basis_element(alg, a));
    stacked.col(a) = Eigen::Map<const VectorXcd>(L.data(), L.size());
  }
  Eigen::JacobiSVD<MatrixXcd> svd(stacked);
  g.left_faithful = svd.singularValues()(alg.dim() - 1) > 1e-10;
  return g;
}

namespace {

Element density_power(const FaithfulState& phi, double s) {
  return functional_calculus(phi.density(), [s](double t) { return std::pow(t, s); });
}

}  // namespace

double phi_right_bound(const Element& a, const FaithfulState& phi) {
  require_member(phi.algebra(), a);
  const Element m = density_power(phi, -0.5) * a * density_power(phi, 0.5);
  const double n = op_norm(m);
  return n * n;
}

double sharp_norm(const Element& a, const Element& rho) {
  const cd v = pairing(rho, adjoint(a) * a + a * adjoint(a));
  return std::sqrt(std::max(0.0, std::real(v)));
}

SigmaMembership sort_membership_sigma(const Element& a, const FaithfulState& phi, double K,
                                      double N) {
  SigmaMembership m;
  m.op_norm = op_norm(a);
  m.right_bound = phi_right_bound(a, phi);
  m.member = m.op_norm <= N + 1e-10 && m.right_bound <= K + 1e-10;
  return m;
}

Element modular_flow(const Element& x, const FaithfulState& phi, double t) {
  require_member(phi.algebra(), x);
  const auto w = spectral_decompose(phi.density());
  const Element plus = apply_spectral(w, [t](double l) { return std::exp(cd(0.0, t * std::log(l))); });
  const Element minus =
      apply_spectral(w, [t](double l) { return std::exp(cd(0.0, -t * std::log(l))); });
  return plus * x * minus;
}

OcneanuDiagnostics ocneanu_predicates(const TracialAlgebra& alg, const std::vector<SigmaTerm>& seq,
                                      const std::vector<Element>& tests, double norm_cap) {
  if (!tests.empty() && tests.size() != seq.size())
    throw StructuralError("ocneanu_predicates: test sequence length differs");
  OcneanuDiagnostics d;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    require_member(alg, seq[i].x);
    require_member(alg, seq[i].rho);
    const double n = op_norm(seq[i].x);
    d.max_op_norm = std::max(d.max_op_norm, n);
    if (n > norm_cap + 1e-12)
      throw PreconditionError("ocneanu_predicates: operator norm " + std::to_string(n) +
                              " exceeds the cap at index " + std::to_string(i));
    d.ideal.values.push_back(sharp_norm(seq[i].x, seq[i].rho));
    if (!tests.empty()) {
      require_member(alg, tests[i]);
      d.test.values.push_back(sharp_norm(tests[i], seq[i].rho));
      d.left_multiplier.values.push_back(sharp_norm(seq[i].x * tests[i], seq[i].rho));
      d.right_multiplier.values.push_back(sharp_norm(tests[i] * seq[i].x, seq[i].rho));
    }
  }
  for (TailProfile* p : {&d.ideal, &d.test, &d.left_multiplier, &d.right_multiplier})
    p->tail_sup = tail_sup(p->values);
  return d;
}

TailProfile modular_limit_check(const TracialAlgebra& alg, const std::vector<SigmaTerm>& seq,
                                const std::optional<Element>& limit_x,
                                const std::optional<FaithfulState>& limit_state, double t) {
  if (!limit_x || !limit_state)
    throw PreconditionError("modular_limit_check: limits must be declared");
  require_member(alg, *limit_x);
  const Element target = modular_flow(*limit_x, *limit_state, t);
  TailProfile p;
  for (const auto& term : seq) {
    const FaithfulState phi_i(alg, term.rho);
    p.values.push_back(sharp_norm(modular_flow(term.x, phi_i, t) - target, term.rho));
  }
  p.tail_sup = tail_sup(p.values);
  return p;
}

DensityProjection density_projection(const Element& u, const FaithfulState& phi, double K) {
  require_member(phi.algebra(), u);
  const Element& rho = phi.density();
  const Element h = cd(K) * rho - u * rho * adjoint(u);
  DensityProjection d;
  d.projection = spectral_projection_above(spectral_decompose(h), 0.0);
  d.element = d.projection * u;
  d.distance = phi_norm(phi, d.element - u);
  d.right_bound = phi_right_bound(d.element, phi);
  return d;
}

}  // namespace corrkit
