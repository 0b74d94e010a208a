#include "doctest.h"
#include "support.hpp"
#include "corrkit/statial.hpp"

using namespace corrkit;
using namespace corrkit::testing;

namespace {

Element tracial_density(const TracialAlgebra& alg) {
  Element rho = zero(alg);
  for (Index k = 0; k < alg.num_blocks(); ++k) rho[k].diagonal().setConstant(alg.weight(k));
  return rho;
}

Element pure_density(const TracialAlgebra& alg, Index block, const VectorXcd& v) {
  Element rho = zero(alg);
  rho[block] = v.normalized() * v.normalized().adjoint();
  return rho;
}

// Exact two-sided multiplier constant for a single state, from generalized eigenvalues.
double hilbert_multiplier_oracle(const Element& a, const TracialAlgebra& alg, const Element& rho) {
  const Index n = alg.dim();
  MatrixXcd G(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      G(i, j) = pairing(rho, adjoint(basis_element(alg, i)) * basis_element(alg, j));
  const MatrixXcd La = left_multiplication(alg, a), Ra = right_multiplication(alg, a);
  return std::max(generalized_max(La.adjoint() * G * La, G), generalized_max(Ra.adjoint() * G * Ra, G));
}

}  // namespace

TEST_CASE("family construction validates densities") {
  const auto m2 = TracialAlgebra::full(2);
  CHECK_THROWS_AS(StatialFamily(m2, {}, false), DomainError);
  CHECK_THROWS_AS(StatialFamily(m2, {diag_element(m2, {1.0, -0.5})}, false), DomainError);
  CHECK_THROWS_AS(StatialFamily(m2, {diag_element(m2, {0.5, 0.4})}, false), DomainError);
}

TEST_CASE("statial norm: worked values") {
  const auto m2 = TracialAlgebra::full(2);
  const StatialFamily tr(m2, {tracial_density(m2)}, false);
  CHECK(statial_norm(matrix_unit(m2, 0, 0, 1), tr) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(statial_norm(zero(m2), tr) == 0.0);

  Rng rng(701);
  const StatialFamily pure(m2, {pure_density(m2, 0, gaussian_vector(2, rng))}, true);
  for (int t = 0; t < 50; ++t) {
    const Element x = random_element(m2, rng);
    CHECK(statial_norm(x, pure) == doctest::Approx(op_norm(x)).epsilon(1e-10));
  }
}

TEST_CASE("property: norm inequalities and symmetries") {
  Rng rng(702);
  double over = 0.0, adj = 0.0, sides = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto alg = random_algebra(rng, 3, 3, 14);
    std::vector<Element> ds;
    for (int i = 0; i < 3; ++i) {
      Element rho = random_positive(alg, rng);
      ds.push_back((1.0 / std::real(matrix_trace(rho))) * rho);
    }
    const bool full = t % 2 == 0;
    const StatialFamily fam(alg, ds, full);
    const Element x = random_element(alg, rng);
    over = std::max(over, statial_norm(x, fam) - op_norm(x));
    adj = std::max(adj, std::abs(statial_norm(adjoint(x), fam) - statial_norm(x, fam)));
    if (full)
      sides = std::max(sides, std::abs(statial_full_norm(x, fam, false) - statial_full_norm(x, fam, true)));
  }
  CHECK(over <= 1e-12);
  CHECK(adj < 1e-12);
  CHECK(sides < 1e-12);
}

TEST_CASE("a family whose hull is every state recovers the operator norm") {
  const auto c3 = TracialAlgebra::markov({1, 1, 1});
  std::vector<Element> deltas;
  for (Index k = 0; k < 3; ++k) deltas.push_back(block_unit(c3, k));
  const StatialFamily fam(c3, deltas, false);
  Rng rng(703);
  for (int t = 0; t < 50; ++t) {
    const Element x = random_element(c3, rng);
    CHECK(statial_norm(x, fam) == doctest::Approx(op_norm(x)).epsilon(1e-8));
  }
}

TEST_CASE("faithfulness") {
  const auto m2 = TracialAlgebra::full(2);
  Rng rng(704);
  Element faithful = random_positive(m2, rng) + 0.1 * identity(m2);
  faithful = (1.0 / std::real(matrix_trace(faithful))) * faithful;
  CHECK(faithful_check(StatialFamily(m2, {pure_density(m2, 0, VectorXcd::Unit(2, 0)), faithful}, false)).faithful);

  const StatialFamily pure(m2, {diag_element(m2, {1.0, 0.0})}, false);
  const auto r = faithful_check(pure);
  CHECK_FALSE(r.faithful);
  const double n = l2_norm(m2, r.witness);
  REQUIRE(n > 0.0);
  CHECK(statial_norm(r.witness, pure) < 1e-10);
  CHECK(std::abs(std::abs(r.witness[0](1, 1)) / max_abs(r.witness) - 1.0) < 1e-12);

  CHECK(faithful_check(StatialFamily(m2, {diag_element(m2, {1.0, 0.0})}, true)).faithful);
}

TEST_CASE("fullness sampling") {
  const auto m2 = TracialAlgebra::full(2);
  CHECK(full_check(StatialFamily(m2, {tracial_density(m2)}, false), 32, 1).max_deviation < 1e-9);
  const StatialFamily pure(m2, {diag_element(m2, {1.0, 0.0})}, false);
  CHECK(full_check(pure, 32, 2).max_deviation > 0.1);

  Rng rng(705);
  std::vector<Element> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(pure_density(m2, 0, gaussian_vector(2, rng)));
  const auto g = full_check(StatialFamily(m2, grid, false), 32, 3);
  CHECK(g.max_deviation > 0.0);
  CHECK(g.max_deviation < full_check(pure, 32, 3).max_deviation);
  CHECK_THROWS_AS(full_check(StatialFamily(m2, grid, true), 4, 3), PreconditionError);
}

TEST_CASE("multiplier bounds: worked values") {
  const auto m2 = TracialAlgebra::full(2);
  const StatialFamily tr(m2, {tracial_density(m2)}, false);
  const auto s = multiplier_bound(cd(0.0, 2.0) * identity(m2), tr);
  CHECK(s.lo == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s.hi == doctest::Approx(4.0).epsilon(1e-12));

  Rng rng(706);
  const Element a = random_element(m2, rng);
  const StatialFamily full(m2, {diag_element(m2, {0.9, 0.1})}, true);
  CHECK(multiplier_bound(a, full).hi == doctest::Approx(std::pow(op_norm(a), 2)).epsilon(1e-12));

  const StatialFamily pure(m2, {diag_element(m2, {1.0, 0.0})}, false);
  CHECK_THROWS_AS(multiplier_bound(a, pure), PreconditionError);
}

TEST_CASE("property: Hilbert-case intervals contain the exact multiplier constant") {
  Rng rng(707);
  for (int t = 0; t < 50; ++t) {
    const auto alg = random_algebra(rng, 3, 3, 14);
    const Element rho = tracial_density(alg);
    const StatialFamily fam(alg, {rho}, false);
    const Element a = random_element(alg, rng);
    const double exact = hilbert_multiplier_oracle(a, alg, rho);
    const auto iv = multiplier_bound(a, fam);
    CHECK(iv.lo <= exact + 1e-8);
    CHECK(iv.hi >= exact - 1e-8);
    CHECK(exact == doctest::Approx(std::pow(op_norm(a), 2)).epsilon(1e-10));
  }
}

TEST_CASE("property: intervals are ordered and narrow with more probes") {
  Rng rng(708);
  for (int t = 0; t < 30; ++t) {
    const auto alg = random_algebra(rng, 2, 3, 14);
    std::vector<Element> ds;
    for (int i = 0; i < 2; ++i) {
      Element rho = random_positive(alg, rng) + 0.05 * identity(alg);
      ds.push_back((1.0 / std::real(matrix_trace(rho))) * rho);
    }
    const StatialFamily fam(alg, ds, false);
    const Element a = random_element(alg, rng);
    const auto few = multiplier_bound(a, fam, {16, 9});
    const auto many = multiplier_bound(a, fam, {128, 9});
    CHECK(few.lo <= few.hi * (1.0 + 1e-10));
    CHECK(many.lo <= many.hi * (1.0 + 1e-10));
    CHECK(many.width() <= few.width() + 1e-12);
  }
}

TEST_CASE("sequence tails") {
  const auto m2 = TracialAlgebra::full(2);
  const StatialFamily tr(m2, {tracial_density(m2)}, false);
  const double K = 4.0;
  std::vector<StatialTerm> constant, growing, mixed;
  for (int i = 1; i <= 20; ++i) {
    constant.push_back({std::sqrt(K) * identity(m2), tr});
    growing.push_back({std::sqrt(double(i) * K) * identity(m2), tr});
    mixed.push_back({std::sqrt(i % 2 == 0 ? K / 2.0 : 2.0 * K) * identity(m2), tr});
  }
  CHECK(statial_sequence_tail(constant, K).tail_fraction == 1.0);
  CHECK(statial_sequence_tail(growing, K).tail_fraction == 0.0);
  CHECK(statial_sequence_tail(mixed, K).tail_fraction == 0.5);
}
