#include "corrkit/analysis.hpp"

#include <Eigen/Sparse>
#include <chrono>
#include <cmath>

#include "corrkit/cpdict.hpp"
#include "corrkit/frank_wolfe.hpp"

namespace corrkit {

std::vector<Element> matrix_units(const TracialAlgebra& alg) {
  std::vector<Element> out;
  for (Index a = 0; a < alg.dim(); ++a) out.push_back(basis_element(alg, a));
  return out;
}

std::vector<Element> default_generators(const TracialAlgebra& alg) { return matrix_units(alg); }

Correspondence amplify(const Correspondence& c, Index mult) { return direct_sum({c}, {mult}); }

namespace {

double real_dot(const MatrixXcd& a, const MatrixXcd& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

// A representation matrix, stored sparse when most entries vanish.
class Op {
 public:
  explicit Op(const MatrixXcd& m) {
    const Index nnz = (m.array() != cd(0.0)).count();
    sparse_ = nnz * 4 < m.size();
    if (sparse_)
      sp_ = m.sparseView();
    else
      dense_ = m;
  }
  MatrixXcd apply(const MatrixXcd& x) const {
    return sparse_ ? MatrixXcd(sp_ * x) : MatrixXcd(dense_ * x);
  }
  MatrixXcd apply_adjoint(const MatrixXcd& x) const {
    return sparse_ ? MatrixXcd(sp_.adjoint() * x) : MatrixXcd(dense_.adjoint() * x);
  }

 private:
  bool sparse_ = false;
  MatrixXcd dense_;
  Eigen::SparseMatrix<cd> sp_;
};

// Stacked gaps r_p = C_p − Σ_s H_s* A_p H_s over pairs p = (x, y), A_p = L(x)R(y),
// where H = [H_0 … H_{m−1}] holds copy s of every witness in columns s·n … s·n+n−1.
class FellProblem {
 public:
  struct State {
    MatrixXcd H;
    std::vector<MatrixXcd> AH, AhH, R;
    double cost = 0.0;
    double max_gap = 0.0;
  };

  FellProblem(const Correspondence& source, const FellQuery& q, const Correspondence& target)
      : n_(static_cast<Index>(q.S.size())), d_(target.dim()), m_(q.mult) {
    MatrixXcd Xi(source.dim(), n_);
    for (Index i = 0; i < n_; ++i) Xi.col(i) = q.S[i];
    std::vector<MatrixXcd> src_right;
    for (const auto& y : q.F) {
      src_right.push_back(source.right_action(y) * Xi);
      right_.emplace_back(target.right_action(y));
    }
    for (const auto& x : q.E) {
      const MatrixXcd lx = source.left_action(x);
      for (const auto& ry : src_right) C_.push_back(Xi.adjoint() * lx * ry);
      left_.emplace_back(target.left_action(x));
    }
  }

  Index rows() const { return d_; }
  Index cols() const { return m_ * n_; }

  void evaluate(State& st) const {
    st.AH.clear();
    st.R.clear();
    st.cost = 0.0;
    st.max_gap = 0.0;
    std::vector<MatrixXcd> RH;
    for (const auto& r : right_) RH.push_back(r.apply(st.H));
    std::size_t p = 0;
    for (const auto& l : left_)
      for (const auto& rh : RH) {
        MatrixXcd ah = l.apply(rh);
        MatrixXcd res = C_[p] - copy_sum(st.H, ah);
        st.cost += 0.5 * res.squaredNorm();
        st.max_gap = std::max(st.max_gap, res.cwiseAbs().maxCoeff());
        st.AH.push_back(std::move(ah));
        st.R.push_back(std::move(res));
        ++p;
      }
  }

  void prepare_adjoint(State& st) const {
    st.AhH.clear();
    for (const auto& l : left_) {
      const MatrixXcd lh = l.apply_adjoint(st.H);
      for (const auto& r : right_) st.AhH.push_back(r.apply_adjoint(lh));
    }
  }

  // J δ = −Σ_s (δ_s* A H_s + H_s* A δ_s)
  std::vector<MatrixXcd> jvp(const State& st, const MatrixXcd& delta) const {
    std::vector<MatrixXcd> out;
    std::vector<MatrixXcd> Rd;
    for (const auto& r : right_) Rd.push_back(r.apply(delta));
    std::size_t p = 0;
    for (const auto& l : left_)
      for (const auto& rd : Rd) {
        out.push_back(-(copy_sum(delta, st.AH[p]) + copy_sum(st.H, l.apply(rd))));
        ++p;
      }
    return out;
  }

  // Jᵀ w = −(A H w* + A* H w) per copy, for the inner product Re tr(X* Y).
  MatrixXcd jtvp(const State& st, const std::vector<MatrixXcd>& w) const {
    MatrixXcd out = MatrixXcd::Zero(d_, m_ * n_);
    for (std::size_t p = 0; p < w.size(); ++p)
      for (Index s = 0; s < m_; ++s)
        out.middleCols(s * n_, n_) -= st.AH[p].middleCols(s * n_, n_) * w[p].adjoint() +
                                      st.AhH[p].middleCols(s * n_, n_) * w[p];
    return out;
  }

 private:
  MatrixXcd copy_sum(const MatrixXcd& X, const MatrixXcd& Y) const {
    MatrixXcd out = MatrixXcd::Zero(n_, n_);
    for (Index s = 0; s < m_; ++s)
      out.noalias() += X.middleCols(s * n_, n_).adjoint() * Y.middleCols(s * n_, n_);
    return out;
  }

  Index n_, d_, m_;
  std::vector<MatrixXcd> C_;
  std::vector<Op> left_, right_;
};

double jtj_dot(const FellProblem& prob, const FellProblem::State& st, const MatrixXcd& v,
               MatrixXcd* image) {
  const auto jv = prob.jvp(st, v);
  double sq = 0.0;
  for (const auto& x : jv) sq += x.squaredNorm();
  if (image) *image = prob.jtvp(st, jv);
  return sq;
}

struct StartOutcome {
  MatrixXcd best_H;
  double best_gap = std::numeric_limits<double>::infinity();
  bool converged = false;
};

StartOutcome levenberg_marquardt(const FellProblem& prob, MatrixXcd H0, const FellOptions& opts) {
  StartOutcome out;
  FellProblem::State st;
  st.H = std::move(H0);
  prob.evaluate(st);
  out.best_H = st.H;
  out.best_gap = st.max_gap;

  double mu = -1.0, nu = 2.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    if (st.max_gap <= opts.target_residual) {
      out.converged = true;
      break;
    }
    prob.prepare_adjoint(st);
    const MatrixXcd g = prob.jtvp(st, st.R);
    const double gnorm = g.norm();
    if (gnorm <= 1e-15 * std::max(1.0, st.H.norm())) {
      out.converged = true;
      break;
    }
    if (mu < 0.0) {
      // Damping scaled to the top of the spectrum of JᵀJ (power iteration).
      MatrixXcd v = g / gnorm, w;
      double lam = 0.0;
      for (int k = 0; k < 8; ++k) {
        jtj_dot(prob, st, v, &w);
        lam = w.norm();
        if (lam == 0.0) break;
        v = w / lam;
      }
      mu = 1e-4 * std::max(lam, 1e-300);
    }

    // CG on (JᵀJ + μ) δ = −g.
    MatrixXcd delta = MatrixXcd::Zero(prob.rows(), prob.cols());
    MatrixXcd res = -g, dir = res, Adir;
    double rr = res.squaredNorm();
    const double stop = std::pow(std::min(1e-2, std::sqrt(gnorm)), 2) * rr;
    for (int k = 0; k < opts.cg_iters && rr > stop; ++k) {
      const double dAd = jtj_dot(prob, st, dir, &Adir) + mu * dir.squaredNorm();
      Adir += mu * dir;
      if (dAd <= 0.0) break;
      const double alpha = rr / dAd;
      delta += alpha * dir;
      res -= alpha * Adir;
      const double rr_new = res.squaredNorm();
      dir = res + (rr_new / rr) * dir;
      rr = rr_new;
    }

    const double predicted = -real_dot(g, delta) - 0.5 * jtj_dot(prob, st, delta, nullptr);
    FellProblem::State trial;
    trial.H = st.H + delta;
    prob.evaluate(trial);
    const double actual = st.cost - trial.cost;
    if (predicted > 0.0 && actual > 0.0) {
      const double rho = actual / predicted;
      const bool tiny = delta.norm() <= 1e-14 * std::max(1.0, st.H.norm());
      st = std::move(trial);
      if (st.max_gap < out.best_gap) {
        out.best_gap = st.max_gap;
        out.best_H = st.H;
      }
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (tiny) {
        out.converged = true;
        break;
      }
    } else {
      mu *= nu;
      nu *= 2.0;
      if (!(mu < 1e30) || delta.norm() <= 1e-15 * std::max(1.0, st.H.norm())) {
        out.converged = true;
        break;
      }
    }
  }
  if (out.best_gap <= opts.target_residual) out.converged = true;
  return out;
}

}  // namespace

FellResult fell_residual(const Correspondence& source, const FellQuery& q,
                         const Correspondence& target, const FellOptions& opts) {
  if (!(source.left_alg() == target.left_alg()) || !(source.right_alg() == target.right_alg()))
    throw StructuralError("fell_residual: source and target act on different algebras");
  if (!(q.eps > 0.0)) throw DomainError("fell_residual: eps must be positive");
  if (q.mult < 1) throw DomainError("fell_residual: multiplicity must be at least 1");
  for (const auto& x : q.E) require_member(source.left_alg(), x);
  for (const auto& y : q.F) require_member(source.right_alg(), y);
  for (const auto& v : q.S) source.require_vector(v);

  const Index n = static_cast<Index>(q.S.size());
  const Index d = target.dim();
  const Index m = q.mult;
  FellResult result;
  const auto unpack = [&](const MatrixXcd& H) {
    std::vector<VectorXcd> w(static_cast<std::size_t>(n), VectorXcd::Zero(d * m));
    for (Index i = 0; i < n; ++i)
      for (Index s = 0; s < m; ++s) w[i].segment(s * d, d) = H.col(s * n + i);
    return w;
  };
  if (n == 0 || q.E.empty() || q.F.empty()) {
    result.converged = true;
    result.within_eps = true;
    result.witnesses = unpack(MatrixXcd::Zero(d, m * n));
    return result;
  }

  const FellProblem prob(source, q, target);
  std::vector<MatrixXcd> starts;
  for (const auto& ws : opts.warm_starts) {
    if (static_cast<Index>(ws.size()) != n)
      throw StructuralError("fell_residual: warm start has the wrong number of witnesses");
    MatrixXcd H = MatrixXcd::Zero(d, m * n);
    for (Index i = 0; i < n; ++i) {
      const Index len = ws[i].size();
      if (len % d != 0 || len / d > m)
        throw StructuralError("fell_residual: warm start witness has the wrong length");
      for (Index s = 0; s < len / d; ++s) H.col(s * n + i) = ws[i].segment(s * d, d);
    }
    starts.push_back(std::move(H));
  }
  if (source.dim() == d) {
    MatrixXcd H = MatrixXcd::Zero(d, m * n);
    for (Index i = 0; i < n; ++i) H.col(i) = q.S[i];
    starts.push_back(std::move(H));
  }
  double rms = 0.0;
  for (const auto& v : q.S) rms += v.squaredNorm();
  rms = std::sqrt(rms / static_cast<double>(n) / static_cast<double>(d * m));
  for (int s = 0; s < opts.starts; ++s) {
    Rng rng(opts.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1));
    starts.push_back(rms * gaussian_matrix(d, m * n, rng) / std::sqrt(2.0));
  }

  MatrixXcd best_H;
  double best_gap = std::numeric_limits<double>::infinity();
  bool best_converged = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const auto out = levenberg_marquardt(prob, starts[s], opts);
    ++result.starts_run;
    if (out.best_gap < best_gap) {
      best_gap = out.best_gap;
      best_H = out.best_H;
      best_converged = out.converged;
    }
    const bool batch_end = opts.batch <= 1 || (s + 1) % static_cast<std::size_t>(opts.batch) == 0;
    if (batch_end && best_gap <= opts.target_residual) break;
  }
  result.residual = best_gap;
  result.witnesses = unpack(best_H);
  result.converged = best_converged;
  result.within_eps = best_gap <= q.eps;
  return result;
}

std::vector<FellQuery> default_fell_grid(const Correspondence& source, Index mult, double eps) {
  std::vector<FellQuery> grid;
  const auto E = matrix_units(source.left_alg());
  const auto F = matrix_units(source.right_alg());
  for (const auto& summand : cyclic_decomposition(source)) {
    FellQuery q;
    q.E = E;
    q.F = F;
    for (Index j = 0; j < summand.basis.cols(); ++j) q.S.push_back(summand.basis.col(j));
    q.eps = eps;
    q.mult = mult;
    grid.push_back(std::move(q));
  }
  return grid;
}

WeakContainmentReport weak_containment_report(const Correspondence& source,
                                              const Correspondence& target, Index mult,
                                              double tol,
                                              std::optional<std::vector<FellQuery>> grid,
                                              const FellOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  WeakContainmentReport rep;
  rep.tolerance = tol;
  rep.grid = grid ? std::move(*grid) : default_fell_grid(source, mult, tol);
  for (const auto& q : rep.grid) {
    rep.results.push_back(fell_residual(source, q, target, opts));
    rep.max_residual = std::max(rep.max_residual, rep.results.back().residual);
    rep.converged = rep.converged && rep.results.back().converged;
  }
  rep.contained = rep.max_residual <= tol;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

WeakContainmentReport semidiscrete_control(const TracialAlgebra& alg, Index mult, double tol,
                                           const FellOptions& opts) {
  return weak_containment_report(trivial_correspondence(alg), coarse_correspondence(alg, alg),
                                 mult, tol, std::nullopt, opts);
}

namespace {

void require_mm(const Correspondence& c, const char* what) {
  if (!c.is_bimodule_over_one_algebra())
    throw StructuralError(std::string(what) + ": left and right algebras differ");
}

}  // namespace

double commutator_defect(const Correspondence& c, const VectorXcd& xi,
                         const std::vector<Element>& generators) {
  require_mm(c, "commutator_defect");
  c.require_vector(xi);
  double d = 0.0;
  for (const auto& a : generators)
    d = std::max(d, (c.left_action(a) * xi - c.right_action(a) * xi).norm());
  return d;
}

MatrixXcd central_subspace(const Correspondence& c) {
  require_mm(c, "central_subspace");
  const Index dimA = c.left_alg().dim();
  const Index d = c.dim();
  if (d == 0) return MatrixXcd(0, 0);
  MatrixXcd stacked(dimA * d, d);
  for (Index a = 0; a < dimA; ++a)
    stacked.middleRows(a * d, d) = c.left_rep()[a] - c.right_rep()[a];
  Eigen::JacobiSVD<MatrixXcd> svd(stacked, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) >= 1e-10) ++rank;
  return svd.matrixV().rightCols(d - rank);
}

CentralReport central_projection(const Correspondence& c, const VectorXcd& xi) {
  c.require_vector(xi);
  const MatrixXcd Q = central_subspace(c);
  CentralReport r;
  r.defect = commutator_defect(c, xi, default_generators(c.left_alg()));
  r.central_part = Q * (Q.adjoint() * xi);
  r.distance = (xi - r.central_part).norm();
  return r;
}

AveragedCentralReport averaged_central_vector(const Correspondence& c, const VectorXcd& xi,
                                              double K, double delta,
                                              const AveragedCentralOptions& opts) {
  require_mm(c, "averaged_central_vector");
  c.require_vector(xi);
  if (!(delta >= 0.0 && delta < 1.0))
    throw PreconditionError("averaged_central_vector: delta must lie in [0, 1)");
  if (std::abs(xi.norm() - 1.0) > 1e-9)
    throw PreconditionError("averaged_central_vector: input is not a unit vector");
  const double input_bound = radon_nikodym(c, xi).bound();
  if (input_bound > K + 1e-10)
    throw PreconditionError("averaged_central_vector: input is not K-bounded (bound " +
                            std::to_string(input_bound) + ")");

  AveragedCentralReport rep;
  const auto& alg = c.left_alg();
  Rng rng(opts.seed);
  for (int s = 0; s < opts.samples; ++s) {
    const Element u = haar_unitary(alg, rng);
    rep.sampled_sup =
        std::max(rep.sampled_sup, (c.left_action(u) * xi - c.right_action(u) * xi).norm());
  }
  if (rep.sampled_sup > delta + 1e-12)
    throw PreconditionError("averaged_central_vector: sampled commutator " +
                            std::to_string(rep.sampled_sup) + " exceeds delta");
  double sum = 0.0;
  for (const auto& e : default_generators(alg))
    sum += (c.left_action(e) * xi - c.right_action(e) * xi).norm();
  rep.certified_sup = 2.0 * sum;

  rep.central = central_projection(c, xi);
  rep.distance_limit = 2.0 * delta;
  rep.bound_limit = K / ((1.0 - delta) * (1.0 - delta));
  const double norm = rep.central.central_part.norm();
  if (norm < 1e-12) {
    rep.degenerate = true;
    rep.eta = VectorXcd::Zero(c.dim());
    rep.distance = xi.norm();
    return rep;
  }
  rep.eta = rep.central.central_part / norm;
  rep.distance = (xi - rep.eta).norm();
  rep.bound = radon_nikodym(c, rep.eta).bound();
  rep.lemma_holds = rep.distance <= rep.distance_limit + 1e-9 && rep.bound <= rep.bound_limit + 1e-9;
  return rep;
}

VectorXcd sampled_min_norm_point(const Correspondence& c, const VectorXcd& xi, int samples,
                                 std::uint64_t seed) {
  require_mm(c, "sampled_min_norm_point");
  c.require_vector(xi);
  Rng rng(seed);
  MatrixXcd Z(c.dim(), samples);
  for (int j = 0; j < samples; ++j) {
    const Element u = haar_unitary(c.left_alg(), rng);
    Z.col(j) = c.left_action(u) * (c.right_action(adjoint(u)) * xi);
  }
  return simplex_least_squares(Z, VectorXcd::Zero(c.dim()), 1e-14, 100000).point;
}

namespace {

struct ConstraintOps {
  std::vector<MatrixXcd> L, R, D;
  std::vector<cd> tau;
};

double objective(const ConstraintOps& ops, const VectorXcd& xi, VectorXcd* grad) {
  double f = 0.0;
  if (grad) grad->setZero(xi.size());
  for (std::size_t k = 0; k < ops.L.size(); ++k) {
    const VectorXcd dx = ops.D[k] * xi;
    f += dx.squaredNorm();
    const VectorXcd lx = ops.L[k] * xi;
    const VectorXcd rx = ops.R[k] * xi;
    const cd gl = xi.dot(lx) - ops.tau[k];
    const cd gr = xi.dot(rx) - ops.tau[k];
    f += std::norm(gl) + std::norm(gr);
    if (grad) {
      *grad += ops.D[k].adjoint() * dx;
      *grad += std::conj(gl) * lx + gl * (ops.L[k].adjoint() * xi);
      *grad += std::conj(gr) * rx + gr * (ops.R[k].adjoint() * xi);
    }
  }
  return f;
}

}  // namespace

AlmostCentralResult almost_central_search(const Correspondence& c,
                                          const std::vector<Element>& generators, double delta,
                                          double K, const AlmostCentralOptions& opts) {
  require_mm(c, "almost_central_search");
  if (!(K >= 1.0))
    throw PreconditionError("almost_central_search: a unit vector is never K-bounded for K < 1");
  if (!(delta >= 0.0)) throw DomainError("almost_central_search: delta must be nonnegative");
  const auto& alg = c.left_alg();
  ConstraintOps ops;
  for (const auto& x : generators) {
    ops.L.push_back(c.left_action(x));
    ops.R.push_back(c.right_action(x));
    ops.D.push_back(ops.L.back() - ops.R.back());
    ops.tau.push_back(trace(alg, x));
  }

  const MatrixXcd Q = central_subspace(c);
  Rng rng(opts.seed);
  AlmostCentralResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.starts; ++s) {
    VectorXcd xi = (s % 2 == 0 && Q.cols() > 0) ? VectorXcd(Q * gaussian_vector(Q.cols(), rng))
                                                : gaussian_vector(c.dim(), rng);
    xi.normalize();
    double f = objective(ops, xi, nullptr);
    double step = 1.0;
    bool converged = false;
    VectorXcd g;
    for (int it = 0; it < opts.max_iters; ++it) {
      if (f < 1e-28) {
        converged = true;
        break;
      }
      objective(ops, xi, &g);
      // Tangential part of the gradient on the unit sphere.
      g -= std::real(xi.dot(g)) * xi;
      if (g.norm() < 1e-15) {
        converged = true;
        break;
      }
      bool moved = false;
      while (step > 1e-16) {
        const VectorXcd cand = (xi - step * g).normalized();
        const double fc = objective(ops, cand, nullptr);
        if (fc < f) {
          xi = cand;
          f = fc;
          step *= 1.5;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        converged = true;
        break;
      }
    }

    // Enforce the bound, renormalizing to unit length after each correction.
    for (int k = 0; k < 50 && radon_nikodym(c, xi).bound() > K + 1e-10; ++k) {
      const VectorXcd v = renormalize_to_bound(c, xi, K).vector;
      if (v.norm() == 0.0) break;
      xi = v.normalized();
    }

    AlmostCentralResult r;
    r.xi = xi;
    r.converged = converged;
    r.bound = radon_nikodym(c, xi).bound();
    r.norm_defect = std::abs(xi.norm() - 1.0);
    for (std::size_t k = 0; k < ops.L.size(); ++k) {
      r.commutator = std::max(r.commutator, (ops.D[k] * xi).norm());
      r.left_trace = std::max(r.left_trace, std::abs(xi.dot(ops.L[k] * xi) - ops.tau[k]));
      r.right_trace = std::max(r.right_trace, std::abs(xi.dot(ops.R[k] * xi) - ops.tau[k]));
    }
    r.residual = std::max({0.0, r.commutator - delta, r.left_trace - delta,
                           r.right_trace - delta, r.bound - K, r.norm_defect});
    r.found = r.residual <= 1e-10;
    if (r.residual < best.residual) best = std::move(r);
    if (best.found) break;
  }
  return best;
}

}  // namespace corrkit
