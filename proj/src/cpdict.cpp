#include "corrkit/cpdict.hpp"

#include <cmath>

#include "corrkit/boundcalc.hpp"

namespace corrkit {

namespace {

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double scale_of(const MatrixXcd& m) { return std::max(1.0, m.norm()); }

}  // namespace

CPMap::CPMap(TracialAlgebra s, TracialAlgebra t, MatrixXcd a)
    : source(std::move(s)), target(std::move(t)), action(std::move(a)) {
  if (action.rows() != target.dim() || action.cols() != source.dim())
    throw StructuralError("c.p. map action has wrong shape");
}

Element CPMap::operator()(const Element& x) const {
  return from_coords(target, VectorXcd(action * to_coords(source, x)));
}

CPMap zero_map(const TracialAlgebra& source, const TracialAlgebra& target) {
  return CPMap(source, target, MatrixXcd::Zero(target.dim(), source.dim()));
}

CPMap identity_map(const TracialAlgebra& alg) {
  return CPMap(alg, alg, MatrixXcd::Identity(alg.dim(), alg.dim()));
}

CPMap trace_map(const TracialAlgebra& source, const TracialAlgebra& target) {
  const VectorXcd one = to_coords(target, identity(target));
  MatrixXcd a(target.dim(), source.dim());
  for (Index alpha = 0; alpha < source.dim(); ++alpha)
    a.col(alpha) = trace(source, basis_element(source, alpha)) * one;
  return CPMap(source, target, a);
}

CPMap kraus_map(const TracialAlgebra& source, const TracialAlgebra& target,
                const std::vector<KrausTerm>& terms) {
  MatrixXcd a = MatrixXcd::Zero(target.dim(), source.dim());
  for (const auto& t : terms) {
    if (t.V.rows() != target.block_size(t.target_block) ||
        t.V.cols() != source.block_size(t.source_block))
      throw StructuralError("Kraus operator has wrong shape");
    for (Index i = 0; i < source.block_size(t.source_block); ++i)
      for (Index j = 0; j < source.block_size(t.source_block); ++j) {
        // V e_ij V* = v_i v_j*
        const MatrixXcd img = t.V.col(i) * t.V.col(j).adjoint();
        const Index alpha = source.coordinate(t.source_block, i, j);
        for (Index r = 0; r < img.rows(); ++r)
          for (Index s = 0; s < img.cols(); ++s)
            a(target.coordinate(t.target_block, r, s), alpha) += img(r, s);
      }
  }
  return CPMap(source, target, a);
}

CPCheckReport check_cp(const CPMap& phi, double tol) {
  const auto& M = phi.source;
  const auto& N = phi.target;
  CPCheckReport r;
  r.tolerance = tol;

  // Choi matrix Σ_ij e_ij ⊗ φ(e_ij), one per (source block, target block).
  double choi_min = std::numeric_limits<double>::infinity();
  double choi_herm = 0.0;
  for (Index k = 0; k < M.num_blocks(); ++k) {
    const Index n = M.block_size(k);
    std::vector<Element> images;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) images.push_back(phi(matrix_unit(M, k, i, j)));
    for (Index l = 0; l < N.num_blocks(); ++l) {
      const Index m = N.block_size(l);
      MatrixXcd C(n * m, n * m);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) C.block(i * m, j * m, m, m) = images[i * n + j][l];
      choi_herm = std::max(choi_herm, (C - C.adjoint()).norm() / scale_of(C));
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es((C + C.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
      choi_min = std::min(choi_min, es.eigenvalues()(0));
    }
  }
  r.choi_min_eigenvalue = choi_min;
  r.completely_positive = choi_min >= -tol && choi_herm <= tol;

  for (Index a = 0; a < M.dim(); ++a) {
    const auto u = M.unit(a);
    const Element img = phi(basis_element(M, a));
    const Element img_star = phi(matrix_unit(M, u.block, u.col, u.row));
    r.star_residual = std::max(r.star_residual, max_abs(img_star - adjoint(img)));
  }
  r.star_preserving = r.star_residual <= tol;

  const Element unit_gap = identity(N) - phi(identity(M));
  Element h = zero(M);
  for (Index a = 0; a < M.dim(); ++a) {
    const auto u = M.unit(a);
    h[u.block](u.col, u.row) = trace(N, phi(basis_element(M, a))) / M.weight(u.block);
  }
  const Element trace_gap = identity(M) - h;
  const auto pu = positivity_check(unit_gap, 1e-6);
  const auto pt = positivity_check(trace_gap, 1e-6);
  r.unit_gap_min_eigenvalue = pu.min_eigenvalue;
  r.trace_gap_min_eigenvalue = pt.min_eigenvalue;
  r.subtracial = r.star_preserving && pu.min_eigenvalue >= -tol && pt.min_eigenvalue >= -tol;
  return r;
}

MatrixXcd cp_gram(const CPMap& phi) {
  const auto& M = phi.source;
  const auto& N = phi.target;
  const Index dM = M.dim(), dN = N.dim();
  // ⟨e_a⊗f_b, e_a'⊗f_b'⟩ = τ_N(φ(e_a'* e_a) f_b f_b'*)
  std::vector<Element> fprod(static_cast<std::size_t>(dN * dN));
  for (Index b = 0; b < dN; ++b)
    for (Index bp = 0; bp < dN; ++bp)
      fprod[b * dN + bp] = basis_element(N, b) * adjoint(basis_element(N, bp));
  MatrixXcd G = MatrixXcd::Zero(dM * dN, dM * dN);
  for (Index a = 0; a < dM; ++a)
    for (Index ap = 0; ap < dM; ++ap) {
      const Element prod = adjoint(basis_element(M, ap)) * basis_element(M, a);
      if (max_abs(prod) == 0.0) continue;
      const Element img = phi(prod);
      for (Index b = 0; b < dN; ++b)
        for (Index bp = 0; bp < dN; ++bp)
          G(ap * dN + bp, a * dN + b) = trace(N, img * fprod[b * dN + bp]);
    }
  return G;
}

CyclicCorrespondence cp_to_correspondence(const CPMap& phi) {
  const auto& M = phi.source;
  const auto& N = phi.target;
  const Index dM = M.dim(), dN = N.dim();
  const MatrixXcd G = cp_gram(phi);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((G + G.adjoint()) / 2.0);
  const VectorXd& lam = es.eigenvalues();
  if (lam.size() > 0 && lam(0) < -1e-9)
    throw DomainError("c.p. input: H_phi form is not positive semidefinite (min eigenvalue " +
                      std::to_string(lam(0)) + ")");
  std::vector<Index> keep;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) > kGnsNullCutoff) keep.push_back(i);
  const Index d = static_cast<Index>(keep.size());

  // J c has ‖J c‖² = c* G c; J⁺ is its right inverse on the kept range.
  MatrixXcd J(d, dM * dN), Jp(dM * dN, d);
  for (Index r = 0; r < d; ++r) {
    const double s = std::sqrt(lam(keep[r]));
    J.row(r) = s * es.eigenvectors().col(keep[r]).adjoint();
    Jp.col(r) = es.eigenvectors().col(keep[r]) / s;
  }

  const MatrixXcd IdN = MatrixXcd::Identity(dN, dN);
  const MatrixXcd IdM = MatrixXcd::Identity(dM, dM);
  std::vector<MatrixXcd> left_rep, right_rep;
  for (Index a = 0; a < dM; ++a)
    left_rep.push_back(J * kron(left_multiplication(M, basis_element(M, a)), IdN) * Jp);
  for (Index b = 0; b < dN; ++b)
    right_rep.push_back(J * kron(IdM, right_multiplication(N, basis_element(N, b))) * Jp);

  CyclicCorrespondence out;
  out.corr = Correspondence(M, N, d, std::move(left_rep), std::move(right_rep));
  const VectorXcd one = kron(to_coords(M, identity(M)), to_coords(N, identity(N)));
  out.vector = J * one;
  out.quotient = J;
  return out;
}

CPMap vector_to_cp(const Correspondence& c, const VectorXcd& xi) {
  c.require_vector(xi);
  const auto& M = c.left_alg();
  const auto& N = c.right_alg();
  // Columns of T: ξ times the orthonormal basis e_β/√λ of L²(N).
  MatrixXcd T(c.dim(), N.dim());
  for (Index b = 0; b < N.dim(); ++b)
    T.col(b) = c.right_rep()[b] * xi / std::sqrt(N.weight(N.unit(b).block));
  const VectorXcd one = to_l2(N, identity(N));

  MatrixXcd action(N.dim(), M.dim());
  for (Index a = 0; a < M.dim(); ++a) {
    const MatrixXcd Y = T.adjoint() * c.left_rep()[a] * T;
    const Element y = from_l2(N, Y * one);
    const double residual = (Y - left_multiplication(N, y)).norm();
    if (residual > 1e-8 * scale_of(Y))
      throw StructuralError("vector_to_cp: T* m T is not in the right commutant (residual " +
                            std::to_string(residual) + ")");
    action.col(a) = to_coords(N, y);
  }
  return CPMap(M, N, action);
}

std::vector<CyclicSummand> cyclic_decomposition(const Correspondence& c, std::uint64_t seed) {
  const auto& M = c.left_alg();
  const auto& N = c.right_alg();
  Rng rng(seed);
  std::vector<CyclicSummand> out;
  for (Index k = 0; k < M.num_blocks(); ++k)
    for (Index l = 0; l < N.num_blocks(); ++l) {
      // Orthonormal vectors in the range of e^{(k)}_11 · f^{(l)}_11 generate
      // mutually orthogonal irreducible summands.
      const MatrixXcd E = c.left_action(matrix_unit(M, k, 0, 0)) *
                          c.right_action(matrix_unit(N, l, 0, 0));
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es((E + E.adjoint()) / 2.0);
      for (Index i = 0; i < c.dim(); ++i) {
        if (es.eigenvalues()(i) < 0.5) continue;
        const MatrixXcd basis = orbit_basis(c, es.eigenvectors().col(i));
        CyclicSummand s;
        s.basis = basis;
        s.corr = restrict_to(c, basis);

        // Among 16 seeded candidates take the one with the largest orbit,
        // ties broken by norm.
        VectorXcd best;
        Index best_rank = -1;
        double best_norm = -1.0;
        for (int trial = 0; trial < 16; ++trial) {
          const VectorXcd local = gaussian_vector(basis.cols(), rng);
          const VectorXcd sub = renormalize_subtracial(s.corr, local).vector;
          const Index rank = orbit_basis(s.corr, sub).cols();
          const double nrm = sub.norm();
          if (rank > best_rank || (rank == best_rank && nrm > best_norm)) {
            best_rank = rank;
            best_norm = nrm;
            best = sub;
          }
        }
        s.vector = basis * best;
        s.phi = vector_to_cp(s.corr, best);
        out.push_back(std::move(s));
      }
    }
  return out;
}

IntertwinerResult equivariant_unitary(const Correspondence& c1, const Correspondence& c2,
                                      std::uint64_t seed) {
  if (!(c1.left_alg() == c2.left_alg()) || !(c1.right_alg() == c2.right_alg()))
    throw StructuralError("equivariant_unitary: algebras differ");
  IntertwinerResult res;
  const Index d1 = c1.dim(), d2 = c2.dim();
  if (d1 != d2) {
    res.residual = std::numeric_limits<double>::infinity();
    return res;
  }
  const Index n = d1 * d2;
  if (n == 0) {
    res.unitary = MatrixXcd(0, 0);
    return res;
  }
  // vec(A X − X B) = (I ⊗ A − Bᵀ ⊗ I) vec X, accumulated as a normal matrix.
  const MatrixXcd I1 = MatrixXcd::Identity(d1, d1);
  const MatrixXcd I2 = MatrixXcd::Identity(d2, d2);
  MatrixXcd normal = MatrixXcd::Zero(n, n);
  const auto add = [&](const MatrixXcd& A2, const MatrixXcd& B1) {
    const MatrixXcd op = kron(I1, A2) - kron(B1.transpose(), I2);
    normal += op.adjoint() * op;
  };
  for (std::size_t a = 0; a < c1.left_rep().size(); ++a) add(c2.left_rep()[a], c1.left_rep()[a]);
  for (std::size_t b = 0; b < c1.right_rep().size(); ++b)
    add(c2.right_rep()[b], c1.right_rep()[b]);

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(normal);
  const double cut = 1e-10 * std::max(1.0, es.eigenvalues()(n - 1));
  Rng rng(seed);
  VectorXcd x = VectorXcd::Zero(n);
  for (Index i = 0; i < n && es.eigenvalues()(i) <= cut; ++i) {
    x += complex_gaussian(rng) * es.eigenvectors().col(i);
    ++res.intertwiner_dim;
  }
  if (res.intertwiner_dim == 0) {
    res.residual = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    return res;
  }
  const MatrixXcd X = Eigen::Map<const MatrixXcd>(x.data(), d2, d1);
  Eigen::JacobiSVD<MatrixXcd> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(d1 - 1) < 1e-8 * svd.singularValues()(0)) {
    res.residual = svd.singularValues()(d1 - 1) / svd.singularValues()(0);
    return res;
  }
  const MatrixXcd U = svd.matrixU() * svd.matrixV().adjoint();
  double r = (U.adjoint() * U - I1).norm();
  for (std::size_t a = 0; a < c1.left_rep().size(); ++a)
    r = std::max(r, (c2.left_rep()[a] * U - U * c1.left_rep()[a]).norm());
  for (std::size_t b = 0; b < c1.right_rep().size(); ++b)
    r = std::max(r, (c2.right_rep()[b] * U - U * c1.right_rep()[b]).norm());
  res.residual = r;
  res.unitary = U;
  return res;
}

}  // namespace corrkit
