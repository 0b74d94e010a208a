#include "corrkit/boundcalc.hpp"

#include <cmath>

#include "corrkit/frank_wolfe.hpp"

namespace corrkit {

Element radon_nikodym_element(const Correspondence& c, const VectorXcd& xi, Side side) {
  c.require_vector(xi);
  const TracialAlgebra& alg = side == Side::Left ? c.left_alg() : c.right_alg();
  const auto& rep = side == Side::Left ? c.left_rep() : c.right_rep();
  // Matrix units are dual to themselves under the trace pairing:
  // τ(e_ij x) = λ_k x_ji and τ(x e_ij) = λ_k x_ji.
  Element b = zero(alg);
  for (Index a = 0; a < alg.dim(); ++a) {
    const auto u = alg.unit(a);
    const cd value = xi.dot(rep[a] * xi);  // ⟨e_ij ξ, ξ⟩ or ⟨ξ e_ij, ξ⟩
    b[u.block](u.col, u.row) = value / alg.weight(u.block);
  }
  for (auto& blk : b.blocks) blk = (blk + blk.adjoint()).eval() / 2.0;
  return b;
}

namespace {

double positive_norm(const Element& b) {
  // b is positive up to rounding: its norm is the top eigenvalue.
  const auto w = spectral_decompose(b);
  return std::max(0.0, std::max(w.max_eigenvalue(), -w.min_eigenvalue()));
}

}  // namespace

BoundCertificate radon_nikodym(const Correspondence& c, const VectorXcd& xi) {
  BoundCertificate cert;
  cert.b_left = radon_nikodym_element(c, xi, Side::Left);
  cert.d_right = radon_nikodym_element(c, xi, Side::Right);
  cert.K_left = positive_norm(cert.b_left);
  cert.K_right = positive_norm(cert.d_right);
  return cert;
}

namespace {

MatrixXcd side_action(const Correspondence& c, const Element& x, Side side) {
  return side == Side::Left ? c.left_action(x) : c.right_action(x);
}

}  // namespace

CutoffResult cutoff_side(const Correspondence& c, const VectorXcd& xi, double R, Side side) {
  if (!(R > 0.0)) throw DomainError("cutoff: R must be positive");
  const Element b = radon_nikodym_element(c, xi, side);
  CutoffResult res;
  res.projection = spectral_projection_above(spectral_decompose(b), R + kCutoffBand);
  res.vector = xi - side_action(c, res.projection, side) * xi;
  return res;
}

CutoffResult cutoff(const Correspondence& c, const VectorXcd& xi, double R) {
  return cutoff_side(c, xi, R, Side::Left);
}

CutoffResult cutoff_right(const Correspondence& c, const VectorXcd& xi, double R) {
  return cutoff_side(c, xi, R, Side::Right);
}

RenormalizeResult renormalize_to_bound(const Correspondence& c, const VectorXcd& xi, double K) {
  if (!(K > 0.0)) throw DomainError("renormalize: bound must be positive");
  RenormalizeResult res;
  res.input = radon_nikodym(c, xi);
  // f_K(t)² t = min{t, K}
  const auto f = [K](double t) { return t > K ? std::sqrt(K / t) : 1.0; };
  const Element fb = functional_calculus(res.input.b_left, f);
  const Element fd = functional_calculus(res.input.d_right, f);
  const MatrixXcd left = c.left_action(fb);
  const MatrixXcd right = c.right_action(fd);
  res.vector = left * (right * xi);
  res.distance_bound = (xi - left * xi).norm() + (xi - right * xi).norm();
  return res;
}

RenormalizeResult renormalize_subtracial(const Correspondence& c, const VectorXcd& xi) {
  return renormalize_to_bound(c, xi, 1.0);
}

double tail_sup(const std::vector<double>& values) {
  double s = 0.0;
  for (std::size_t i = values.size() / 2; i < values.size(); ++i) s = std::max(s, values[i]);
  return s;
}

namespace {

struct RoundOutput {
  std::vector<VectorXcd> accumulated;
  int rounds = 0;
  double max_residual = 0.0;
};

// Stagewise cutoff + Mazur pipeline on one side.
RoundOutput uniformize_side(const Correspondence& c, const std::vector<VectorXcd>& terms,
                            const VectorXcd& limit, double K, Side side,
                            const UniformizeOptions& opts) {
  const std::size_t n = terms.size();
  const TracialAlgebra& alg = side == Side::Left ? c.left_alg() : c.right_alg();
  RoundOutput out;
  out.accumulated.assign(n, VectorXcd::Zero(c.dim()));
  std::vector<VectorXcd> current = terms;
  VectorXcd target = limit;
  double level = K;
  for (int r = 0; r < opts.max_rounds; ++r) {
    std::vector<CutoffResult> cuts;
    cuts.reserve(n);
    for (const auto& t : current) cuts.push_back(cutoff_side(c, t, 2.0 * level, side));

    // Weak-limit surrogate of the cutoff projections: spectral support of
    // their tail average above 1/2.
    Element avg = zero(alg);
    const std::size_t first = n / 2;
    for (std::size_t i = first; i < n; ++i) avg = avg + cuts[i].projection;
    avg = cd(1.0 / static_cast<double>(n - first)) * avg;
    const Element pi = spectral_projection_above(spectral_decompose(avg), 0.5);
    const MatrixXcd act_pi = side_action(c, pi, side);

    const VectorXcd mazur_target = target - act_pi * target;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t end = std::min(n, i + static_cast<std::size_t>(opts.window));
      MatrixXcd Z(c.dim(), static_cast<Index>(end - i));
      for (std::size_t j = i; j < end; ++j) Z.col(static_cast<Index>(j - i)) = cuts[j].vector;
      const auto fw = simplex_least_squares(Z, mazur_target, opts.fw_gap, opts.fw_max_iters);
      if (!fw.converged) {
        double scale = std::max(1.0, mazur_target.squaredNorm());
        for (Index j = 0; j < Z.cols(); ++j) scale = std::max(scale, Z.col(j).squaredNorm());
        if (fw.gap > opts.solver_tol * scale)
          throw SolverError("uniformize_sequence: convex combination did not converge", fw.gap);
      }
      out.accumulated[i] += fw.point;
      out.max_residual = std::max(out.max_residual, fw.residual);
    }
    out.rounds = r + 1;
    if (projection_rank(pi) == 0) break;
    target = act_pi * target;
    for (auto& t : current) t = act_pi * t;
    level /= 2.0;
  }
  return out;
}

}  // namespace

UniformizeResult uniformize_sequence(const Correspondence& c, const VectorSequence& s, double K,
                                     const UniformizeOptions& opts) {
  if (!(K > 0.0)) throw DomainError("uniformize_sequence: K must be positive");
  if (!s.limit) throw PreconditionError("uniformize_sequence: declared limit missing");
  if (s.terms.empty()) throw PreconditionError("uniformize_sequence: empty sequence");
  c.require_vector(*s.limit);
  const auto limit_cert = radon_nikodym(c, *s.limit);
  if (limit_cert.bound() > K + 1e-10)
    throw PreconditionError("uniformize_sequence: declared limit is not K-bounded (bound " +
                            std::to_string(limit_cert.bound()) + ")");
  for (const auto& t : s.terms) {
    c.require_vector(t);
    if (!t.allFinite()) throw PreconditionError("uniformize_sequence: term is not finite");
  }

  UniformizeResult res;
  res.stage_bound = 4.0 * K / std::sqrt(3.0);
  res.composite_bound = 2.0 * res.stage_bound / std::sqrt(3.0);

  const auto left = uniformize_side(c, s.terms, *s.limit, K, Side::Left, opts);
  const auto right = uniformize_side(c, left.accumulated, *s.limit, K, Side::Right, opts);
  res.rounds_left = left.rounds;
  res.rounds_right = right.rounds;
  res.max_mazur_residual = std::max(left.max_residual, right.max_residual);

  for (const auto& mu : right.accumulated) {
    const auto fixed = renormalize_to_bound(c, mu, K);
    res.stage_left_bounds.push_back(fixed.input.K_left);
    res.stage_right_bounds.push_back(fixed.input.K_right);
    res.terms.push_back(fixed.vector);
    res.certificates.push_back(radon_nikodym(c, fixed.vector));
    res.distances.push_back((fixed.vector - *s.limit).norm());
  }
  return res;
}

TailProfile connes_tail(const std::vector<TracialTerm>& terms, double K) {
  TailProfile p;
  for (const auto& t : terms) {
    require_member(t.alg, t.x);
    double sq = 0.0;
    for (Index k = 0; k < t.alg.num_blocks(); ++k) {
      Eigen::JacobiSVD<MatrixXcd> svd(t.x[k]);
      const auto& s = svd.singularValues();
      for (Index i = 0; i < s.size(); ++i)
        if (s(i) > K + kCutoffBand) sq += t.alg.weight(k) * s(i) * s(i);
    }
    p.values.push_back(std::sqrt(sq));
  }
  p.tail_sup = tail_sup(p.values);
  return p;
}

SortMembership sort_membership(const Correspondence& c, const VectorXcd& xi, double K) {
  SortMembership m;
  m.certificate = radon_nikodym(c, xi);
  m.member = m.certificate.bound() <= K + 1e-10;
  return m;
}

}  // namespace corrkit
