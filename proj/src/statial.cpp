#include "corrkit/statial.hpp"

#include <cmath>

namespace corrkit {

StatialFamily::StatialFamily(TracialAlgebra a, std::vector<Element> d, bool full)
    : alg(std::move(a)), densities(std::move(d)), full_closure(full) {
  if (densities.empty()) throw DomainError("state family is empty");
  for (auto& rho : densities) {
    require_member(alg, rho);
    const auto pos = positivity_check(rho, 1e-10);
    if (!pos.positive) throw DomainError("family density is not positive");
    if (std::abs(std::real(matrix_trace(rho)) - 1.0) > 1e-10)
      throw DomainError("family density must have trace 1");
    for (auto& b : rho.blocks) b = (b + b.adjoint()).eval() / 2.0;
  }
}

double statial_full_norm(const Element& x, const StatialFamily& fam, bool via_adjoint) {
  require_member(fam.alg, x);
  // sup_u φ(u* x*x u) pairs the descending spectra of ρ and x*x block by block.
  std::vector<VectorXd> sq;
  for (const auto& b : x.blocks) {
    const MatrixXcd m = via_adjoint ? MatrixXcd(b.adjoint()) : b;
    sq.push_back(Eigen::JacobiSVD<MatrixXcd>(m).singularValues().array().square());
  }
  double best = 0.0;
  for (const auto& rho : fam.densities) {
    double v = 0.0;
    for (Index k = 0; k < fam.alg.num_blocks(); ++k) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho[k], Eigen::EigenvaluesOnly);
      const VectorXd& ev = es.eigenvalues();
      const Index n = ev.size();
      for (Index i = 0; i < n; ++i) v += ev(n - 1 - i) * sq[k](i);
    }
    best = std::max(best, v);
  }
  return std::sqrt(std::max(0.0, best));
}

double statial_norm(const Element& x, const StatialFamily& fam) {
  if (fam.full_closure)
    return std::max(statial_full_norm(x, fam, false), statial_full_norm(x, fam, true));
  require_member(fam.alg, x);
  const Element xs = adjoint(x);
  const Element a = xs * x;
  const Element b = x * xs;
  double best = 0.0;
  for (const auto& rho : fam.densities)
    best = std::max({best, std::real(pairing(rho, a)), std::real(pairing(rho, b))});
  return std::sqrt(std::max(0.0, best));
}

namespace {

// φ(ξ*ξ) and φ(ξξ*) as Hermitian forms on unit coordinates.
MatrixXcd form_star_first(const TracialAlgebra& alg, const Element& rho) {
  MatrixXcd A(alg.dim(), alg.dim());
  for (Index a = 0; a < alg.dim(); ++a)
    for (Index b = 0; b < alg.dim(); ++b)
      A(a, b) = pairing(rho, adjoint(basis_element(alg, a)) * basis_element(alg, b));
  return A;
}

MatrixXcd form_star_last(const TracialAlgebra& alg, const Element& rho) {
  MatrixXcd B(alg.dim(), alg.dim());
  for (Index a = 0; a < alg.dim(); ++a)
    for (Index b = 0; b < alg.dim(); ++b)
      B(a, b) = pairing(rho, basis_element(alg, b) * adjoint(basis_element(alg, a)));
  return B;
}

std::vector<Element> effective_densities(const StatialFamily& fam) {
  if (!fam.full_closure) return fam.densities;
  // Haar average of each orbit: (Tr ρ_k / n_k)·1 per block.
  std::vector<Element> out;
  for (const auto& rho : fam.densities) {
    Element avg = zero(fam.alg);
    for (Index k = 0; k < fam.alg.num_blocks(); ++k)
      avg[k].diagonal().setConstant(rho[k].trace() / static_cast<double>(fam.alg.block_size(k)));
    out.push_back(avg);
  }
  return out;
}

}  // namespace

FaithfulCheck faithful_check(const StatialFamily& fam) {
  const auto& alg = fam.alg;
  MatrixXcd G = MatrixXcd::Zero(alg.dim(), alg.dim());
  for (const auto& rho : effective_densities(fam))
    G += form_star_first(alg, rho) + form_star_last(alg, rho);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((G + G.adjoint()) / 2.0);
  FaithfulCheck r;
  r.min_eigenvalue = es.eigenvalues()(0);
  r.faithful = r.min_eigenvalue > 1e-12;
  if (!r.faithful) r.witness = from_coords(alg, VectorXcd(es.eigenvectors().col(0)));
  return r;
}

FullCheck full_check(const StatialFamily& fam, int samples, std::uint64_t seed) {
  if (fam.full_closure)
    throw PreconditionError("full_check: the family is already closed under conjugation");
  Rng rng(seed);
  FullCheck r;
  r.samples = samples;
  const auto trace_norm = [](const Element& x) {
    double s = 0.0;
    for (const auto& b : x.blocks) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es((b + b.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
      s += es.eigenvalues().cwiseAbs().sum();
    }
    return s;
  };
  for (int s = 0; s < samples; ++s) {
    const Element u = haar_unitary(fam.alg, rng);
    for (const auto& rho : fam.densities) {
      // x ↦ φ(u x u*) has density u* ρ u.
      const Element moved = adjoint(u) * rho * u;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& other : fam.densities) best = std::min(best, trace_norm(moved - other));
      r.max_deviation = std::max(r.max_deviation, best);
    }
  }
  return r;
}

namespace {

struct Relaxation {
  double value = std::numeric_limits<double>::infinity();
  VectorXcd maximizer;
};

// sup_ξ ξ*Tξ / ξ*Dξ for positive T, D; infinite when T is nonzero on ker D.
Relaxation generalized_sup(const MatrixXcd& T, const MatrixXcd& D) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((D + D.adjoint()) / 2.0);
  const VectorXd& lam = es.eigenvalues();
  const double cut = 1e-12 * std::max(1.0, lam(lam.size() - 1));
  Index nk = 0;
  while (nk < lam.size() && lam(nk) <= cut) ++nk;
  Relaxation r;
  const double tscale = std::max(1.0, T.norm());
  if (nk > 0) {
    const MatrixXcd Z = es.eigenvectors().leftCols(nk);
    if ((Z.adjoint() * T * Z).norm() > 1e-12 * tscale) return r;
  }
  const Index nr = lam.size() - nk;
  if (nr == 0) {
    r.value = 0.0;
    return r;
  }
  const MatrixXcd W = es.eigenvectors().rightCols(nr);
  const VectorXd inv_sqrt = lam.tail(nr).cwiseSqrt().cwiseInverse();
  const MatrixXcd Mw = W * inv_sqrt.cast<cd>().asDiagonal();
  const MatrixXcd M = Mw.adjoint() * T * Mw;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> em((M + M.adjoint()) / 2.0);
  r.value = std::max(0.0, em.eigenvalues()(nr - 1));
  r.maximizer = Mw * em.eigenvectors().col(nr - 1);
  return r;
}

}  // namespace

MultiplierInterval multiplier_bound(const Element& a, const StatialFamily& fam,
                                    const MultiplierOptions& opts) {
  require_member(fam.alg, a);
  if (!faithful_check(fam).faithful)
    throw PreconditionError("multiplier_bound: the family is not faithful");
  const auto& alg = fam.alg;
  MultiplierInterval iv;
  std::vector<Element> probes;
  probes.push_back(identity(alg));

  if (fam.full_closure) {
    const double n = op_norm(a);
    iv.hi = n * n;
  } else {
    const MatrixXcd La = left_multiplication(alg, a);
    const MatrixXcd Ra = right_multiplication(alg, a);
    std::vector<MatrixXcd> denominators;
    MatrixXcd S = MatrixXcd::Zero(alg.dim(), alg.dim());
    for (const auto& rho : fam.densities) {
      denominators.push_back(form_star_first(alg, rho));
      denominators.push_back(form_star_last(alg, rho));
      S += denominators[denominators.size() - 2] + denominators.back();
    }
    denominators.push_back(S / (2.0 * static_cast<double>(fam.densities.size())));
    // ‖ξ‖²_{2,Φ} dominates every denominator, so each numerator term is
    // bounded by its smallest generalized supremum.
    iv.hi = 0.0;
    for (std::size_t j = 0; j + 1 < denominators.size(); ++j)
      for (const MatrixXcd* mul : {&La, &Ra}) {
        const MatrixXcd T = mul->adjoint() * denominators[j] * *mul;
        Relaxation best;
        for (const auto& D : denominators) {
          const auto r = generalized_sup(T, D);
          if (r.value < best.value) best = r;
        }
        iv.hi = std::max(iv.hi, best.value);
        if (best.maximizer.size() > 0) probes.push_back(from_coords(alg, best.maximizer));
      }
  }

  // Rank-one probes aligned with the top singular vectors of each block.
  for (Index k = 0; k < alg.num_blocks(); ++k) {
    Eigen::JacobiSVD<MatrixXcd> svd(a[k], Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index n = alg.block_size(k);
    const VectorXcd u1 = svd.matrixU().col(0), v1 = svd.matrixV().col(0);
    for (Index j = 0; j < n; ++j) {
      const VectorXcd w = VectorXcd::Unit(n, j);
      Element p = zero(alg), q = zero(alg);
      p[k] = v1 * w.adjoint();
      q[k] = w * u1.adjoint();
      probes.push_back(p);
      probes.push_back(q);
    }
  }
  Rng rng(opts.seed);
  for (int i = 0; i < opts.probes; ++i) probes.push_back(random_element(alg, rng));

  for (const auto& xi : probes) {
    const double den = std::pow(statial_norm(xi, fam), 2);
    if (den < 1e-14 * std::max(1.0, std::pow(l2_norm(alg, xi), 2))) continue;
    const double num = std::max(std::pow(statial_norm(a * xi, fam), 2),
                                std::pow(statial_norm(xi * a, fam), 2));
    iv.lo = std::max(iv.lo, num / den);
  }
  return iv;
}

StatialTail statial_sequence_tail(const std::vector<StatialTerm>& seq, double K,
                                  const MultiplierOptions& opts) {
  StatialTail t;
  for (const auto& term : seq) t.intervals.push_back(multiplier_bound(term.a, term.family, opts));
  const std::size_t first = seq.size() / 2;
  std::size_t hits = 0;
  for (std::size_t i = first; i < seq.size(); ++i)
    if (t.intervals[i].hi <= K + 1e-10) ++hits;
  if (seq.size() > first) t.tail_fraction = static_cast<double>(hits) / static_cast<double>(seq.size() - first);
  return t;
}

}  // namespace corrkit
