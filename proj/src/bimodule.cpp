#include "corrkit/bimodule.hpp"

#include "corrkit/boundcalc.hpp"

namespace corrkit {

Correspondence::Correspondence(TracialAlgebra left, TracialAlgebra right, Index dim,
                               std::vector<MatrixXcd> left_rep,
                               std::vector<MatrixXcd> right_rep)
    : left_(std::move(left)),
      right_(std::move(right)),
      dim_(dim),
      left_rep_(std::move(left_rep)),
      right_rep_(std::move(right_rep)) {
  if (dim_ < 0) throw StructuralError("correspondence: negative dimension");
  if (static_cast<Index>(left_rep_.size()) != left_.dim())
    throw StructuralError("correspondence: left_rep needs one matrix per matrix unit");
  if (static_cast<Index>(right_rep_.size()) != right_.dim())
    throw StructuralError("correspondence: right_rep needs one matrix per matrix unit");
  for (const auto& m : left_rep_)
    if (m.rows() != dim_ || m.cols() != dim_)
      throw StructuralError("correspondence: left_rep matrix has wrong shape");
  for (const auto& m : right_rep_)
    if (m.rows() != dim_ || m.cols() != dim_)
      throw StructuralError("correspondence: right_rep matrix has wrong shape");
}

namespace {

MatrixXcd combine(const std::vector<MatrixXcd>& rep, const VectorXcd& coords, Index dim) {
  MatrixXcd m = MatrixXcd::Zero(dim, dim);
  for (Index a = 0; a < coords.size(); ++a)
    if (coords(a) != cd(0)) m += coords(a) * rep[a];
  return m;
}

}  // namespace

MatrixXcd Correspondence::left_action(const Element& a) const {
  return combine(left_rep_, to_coords(left_, a), dim_);
}

MatrixXcd Correspondence::right_action(const Element& b) const {
  return combine(right_rep_, to_coords(right_, b), dim_);
}

namespace {

struct UnitProduct {
  bool nonzero;
  Index coord;
};

// e^{(k)}_{ij} e^{(k')}_{i'j'} = δ_{kk'} δ_{ji'} e^{(k)}_{ij'}
UnitProduct unit_product(const TracialAlgebra& alg, Index a, Index b) {
  const auto x = alg.unit(a);
  const auto y = alg.unit(b);
  if (x.block != y.block || x.col != y.row) return {false, 0};
  return {true, alg.coordinate(x.block, x.row, y.col)};
}

Index unit_adjoint(const TracialAlgebra& alg, Index a) {
  const auto x = alg.unit(a);
  return alg.coordinate(x.block, x.col, x.row);
}

double multiplicativity(const TracialAlgebra& alg, const std::vector<MatrixXcd>& rep, Index dim,
                        bool anti) {
  double r = 0.0;
  const MatrixXcd zero = MatrixXcd::Zero(dim, dim);
  for (Index a = 0; a < alg.dim(); ++a) {
    for (Index b = 0; b < alg.dim(); ++b) {
      const auto p = unit_product(alg, a, b);
      const MatrixXcd& lhs = p.nonzero ? rep[p.coord] : zero;
      const MatrixXcd rhs = anti ? (rep[b] * rep[a]).eval() : (rep[a] * rep[b]).eval();
      r = std::max(r, (lhs - rhs).norm());
    }
  }
  MatrixXcd unit = MatrixXcd::Zero(dim, dim);
  for (Index k = 0; k < alg.num_blocks(); ++k)
    for (Index i = 0; i < alg.block_size(k); ++i) unit += rep[alg.coordinate(k, i, i)];
  r = std::max(r, (unit - MatrixXcd::Identity(dim, dim)).norm());
  return r;
}

double star_defect(const TracialAlgebra& alg, const std::vector<MatrixXcd>& rep) {
  double r = 0.0;
  for (Index a = 0; a < alg.dim(); ++a)
    r = std::max(r, (rep[unit_adjoint(alg, a)] - rep[a].adjoint()).norm());
  return r;
}

double boundedness_excess(const std::vector<MatrixXcd>& rep) {
  // Matrix units have operator norm 1.
  double r = 0.0;
  for (const auto& m : rep) r = std::max(r, matrix_op_norm(m) - 1.0);
  return std::max(0.0, r);
}

}  // namespace

ValidationReport validate(const Correspondence& c, double tol,
                          const std::vector<SortDeclaration>& declared) {
  ValidationReport rep;
  rep.tolerance = tol;
  const Index d = c.dim();
  rep.homomorphism = std::max(multiplicativity(c.left_alg(), c.left_rep(), d, false),
                              multiplicativity(c.right_alg(), c.right_rep(), d, true));
  rep.star = std::max(star_defect(c.left_alg(), c.left_rep()),
                      star_defect(c.right_alg(), c.right_rep()));
  for (const auto& l : c.left_rep())
    for (const auto& r : c.right_rep())
      rep.commutation = std::max(rep.commutation, (l * r - r * l).norm());
  rep.boundedness =
      std::max(boundedness_excess(c.left_rep()), boundedness_excess(c.right_rep()));
  for (const auto& decl : declared) {
    c.require_vector(decl.vector);
    const auto cert = radon_nikodym(c, decl.vector);
    rep.sort_membership = std::max(rep.sort_membership, cert.bound() - decl.K);
  }
  rep.passed = rep.worst() <= tol;
  return rep;
}

Correspondence trivial_correspondence(const TracialAlgebra& alg) {
  std::vector<MatrixXcd> left, right;
  for (Index a = 0; a < alg.dim(); ++a) {
    const Element e = basis_element(alg, a);
    left.push_back(left_multiplication(alg, e));
    right.push_back(right_multiplication(alg, e));
  }
  return Correspondence(alg, alg, alg.dim(), std::move(left), std::move(right));
}

namespace {

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

}  // namespace

Correspondence coarse_correspondence(const TracialAlgebra& left, const TracialAlgebra& right) {
  const MatrixXcd id_l = MatrixXcd::Identity(left.dim(), left.dim());
  const MatrixXcd id_r = MatrixXcd::Identity(right.dim(), right.dim());
  std::vector<MatrixXcd> lrep, rrep;
  for (Index a = 0; a < left.dim(); ++a)
    lrep.push_back(kron(left_multiplication(left, basis_element(left, a)), id_r));
  for (Index b = 0; b < right.dim(); ++b)
    rrep.push_back(kron(id_l, right_multiplication(right, basis_element(right, b))));
  return Correspondence(left, right, left.dim() * right.dim(), std::move(lrep), std::move(rrep));
}

Correspondence direct_sum(const std::vector<Correspondence>& parts,
                          const std::vector<Index>& multiplicities) {
  if (parts.empty()) throw StructuralError("direct_sum: no parts");
  if (parts.size() != multiplicities.size())
    throw StructuralError("direct_sum: parts and multiplicities differ in length");
  const auto& left = parts.front().left_alg();
  const auto& right = parts.front().right_alg();
  Index dim = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (!(parts[p].left_alg() == left) || !(parts[p].right_alg() == right))
      throw StructuralError("direct_sum: parts act on different algebras");
    if (multiplicities[p] < 1) throw StructuralError("direct_sum: multiplicity must be >= 1");
    dim += multiplicities[p] * parts[p].dim();
  }
  std::vector<MatrixXcd> lrep(left.dim(), MatrixXcd::Zero(dim, dim));
  std::vector<MatrixXcd> rrep(right.dim(), MatrixXcd::Zero(dim, dim));
  Index off = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Index d = parts[p].dim();
    for (Index copy = 0; copy < multiplicities[p]; ++copy) {
      for (Index a = 0; a < left.dim(); ++a) lrep[a].block(off, off, d, d) = parts[p].left_rep()[a];
      for (Index b = 0; b < right.dim(); ++b)
        rrep[b].block(off, off, d, d) = parts[p].right_rep()[b];
      off += d;
    }
  }
  return Correspondence(left, right, dim, std::move(lrep), std::move(rrep));
}

MatrixXcd direct_sum_embedding(const std::vector<Correspondence>& parts,
                               const std::vector<Index>& multiplicities, std::size_t part,
                               Index copy) {
  Index dim = 0;
  Index off = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (p < part) off += multiplicities[p] * parts[p].dim();
    dim += multiplicities[p] * parts[p].dim();
  }
  off += copy * parts[part].dim();
  MatrixXcd e = MatrixXcd::Zero(dim, parts[part].dim());
  e.block(off, 0, parts[part].dim(), parts[part].dim()).setIdentity();
  return e;
}

Correspondence irreducible_correspondence(const TracialAlgebra& left, const TracialAlgebra& right,
                                          Index left_block, Index right_block) {
  const Index n = left.block_size(left_block);
  const Index m = right.block_size(right_block);
  const Index dim = n * m;
  std::vector<MatrixXcd> lrep, rrep;
  for (Index a = 0; a < left.dim(); ++a) {
    const auto u = left.unit(a);
    MatrixXcd e = MatrixXcd::Zero(n, n);
    if (u.block == left_block) e(u.row, u.col) = 1.0;
    lrep.push_back(kron(e, MatrixXcd::Identity(m, m)));
  }
  for (Index b = 0; b < right.dim(); ++b) {
    const auto u = right.unit(b);
    MatrixXcd e = MatrixXcd::Zero(m, m);
    if (u.block == right_block) e(u.col, u.row) = 1.0;  // transpose
    rrep.push_back(kron(MatrixXcd::Identity(n, n), e));
  }
  return Correspondence(left, right, dim, std::move(lrep), std::move(rrep));
}

Correspondence rotate(const Correspondence& c, const MatrixXcd& u) {
  if (u.rows() != c.dim() || u.cols() != c.dim()) throw StructuralError("rotate: wrong size");
  std::vector<MatrixXcd> l, r;
  for (const auto& m : c.left_rep()) l.push_back(u * m * u.adjoint());
  for (const auto& m : c.right_rep()) r.push_back(u * m * u.adjoint());
  return Correspondence(c.left_alg(), c.right_alg(), c.dim(), std::move(l), std::move(r));
}

Correspondence restrict_to(const Correspondence& c, const MatrixXcd& basis) {
  if (basis.rows() != c.dim()) throw StructuralError("restrict_to: basis has wrong length");
  std::vector<MatrixXcd> l, r;
  for (const auto& m : c.left_rep()) l.push_back(basis.adjoint() * m * basis);
  for (const auto& m : c.right_rep()) r.push_back(basis.adjoint() * m * basis);
  return Correspondence(c.left_alg(), c.right_alg(), basis.cols(), std::move(l), std::move(r));
}

Correspondence random_correspondence(const TracialAlgebra& left, const TracialAlgebra& right,
                                     Index max_dim, Rng& rng) {
  std::uniform_int_distribution<Index> lk(0, left.num_blocks() - 1);
  std::uniform_int_distribution<Index> rk(0, right.num_blocks() - 1);
  std::vector<Correspondence> parts;
  Index dim = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Index k = lk(rng);
    const Index l = rk(rng);
    const Index d = left.block_size(k) * right.block_size(l);
    if (dim + d > max_dim) continue;
    parts.push_back(irreducible_correspondence(left, right, k, l));
    dim += d;
    if (parts.size() >= 2 && std::uniform_real_distribution<double>(0, 1)(rng) < 0.4) break;
  }
  if (parts.empty()) throw DomainError("random_correspondence: max_dim too small");
  const std::vector<Index> mult(parts.size(), 1);
  const Correspondence sum = direct_sum(parts, mult);
  return rotate(sum, haar_unitary(sum.dim(), rng));
}

VectorXcd unit_vector(const TracialAlgebra& alg) { return to_l2(alg, identity(alg)); }

MatrixXcd orbit_basis(const Correspondence& c, const VectorXcd& xi, double rel_tol) {
  c.require_vector(xi);
  const Index nl = c.left_alg().dim();
  const Index nr = c.right_alg().dim();
  MatrixXcd rxi(c.dim(), nr);
  for (Index b = 0; b < nr; ++b) rxi.col(b) = c.right_rep()[b] * xi;
  MatrixXcd orbit(c.dim(), nl * nr);
  for (Index a = 0; a < nl; ++a) orbit.middleCols(a * nr, nr) = c.left_rep()[a] * rxi;
  Eigen::JacobiSVD<MatrixXcd> svd(orbit, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return MatrixXcd(c.dim(), 0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace corrkit
