#include "doctest.h"
#include "support.hpp"

using namespace corrkit;
using corrkit::testing::diag_element;

TEST_CASE("algebra construction validates blocks and weights") {
  CHECK_THROWS_AS(TracialAlgebra({}, {}), DomainError);
  CHECK_THROWS_AS(TracialAlgebra({2}, {0.4}), DomainError);
  CHECK_THROWS_AS(TracialAlgebra({2, 1}, {0.5}), DomainError);
  CHECK_THROWS_AS(TracialAlgebra({0}, {1.0}), DomainError);
  CHECK_THROWS_AS(TracialAlgebra({1, 1}, {1.5, -0.5}), DomainError);
  CHECK_THROWS_AS(TracialAlgebra::full(9), DomainError);
  CHECK_NOTHROW(TracialAlgebra::full(8));
  const auto alg = TracialAlgebra({2, 1}, {0.25, 0.5});
  CHECK(alg.dim() == 5);
  CHECK(alg.num_blocks() == 2);
}

TEST_CASE("trace of a matrix unit in M_2") {
  const auto m2 = TracialAlgebra::full(2);
  CHECK(std::abs(trace(m2, matrix_unit(m2, 0, 0, 0)) - 0.5) < 1e-15);
  CHECK(std::abs(trace(m2, identity(m2)) - 1.0) < 1e-15);
  CHECK(std::abs(trace(m2, matrix_unit(m2, 0, 0, 1))) < 1e-15);
}

TEST_CASE("functional calculus on diag(4,1)") {
  const auto m2 = TracialAlgebra::full(2);
  const Element x = diag_element(m2, {4.0, 1.0});
  const Element capped = functional_calculus(x, [](double t) { return std::min(t, 1.0); });
  CHECK(max_abs(capped - identity(m2)) < 1e-14);
  const Element f = functional_calculus(x, [](double t) { return std::min(1.0, 1.0 / std::sqrt(t)); });
  CHECK(max_abs(f - diag_element(m2, {0.5, 1.0})) < 1e-14);
}

TEST_CASE("functional calculus rejects non-self-adjoint input") {
  const auto m2 = TracialAlgebra::full(2);
  CHECK_THROWS_AS(functional_calculus(matrix_unit(m2, 0, 0, 1), [](double t) { return t; }),
                  DomainError);
}

TEST_CASE("positivity check reports the smallest eigenvalue") {
  const auto m2 = TracialAlgebra::full(2);
  const auto r = positivity_check(diag_element(m2, {1.0, -1.0}), 1e-12);
  CHECK_FALSE(r.positive);
  CHECK(std::abs(r.min_eigenvalue + 1.0) < 1e-14);
  CHECK(positivity_check(diag_element(m2, {1.0, 0.0}), 1e-12).positive);
}

TEST_CASE("mismatched block structure is a structural error") {
  const auto a = TracialAlgebra::full(2);
  const auto b = TracialAlgebra::markov({1, 1});
  CHECK_THROWS_AS(identity(a) * identity(b), StructuralError);
  CHECK_THROWS_AS(trace(a, identity(b)), StructuralError);
}

TEST_CASE("property: trace is tracial, positive and normalized") {
  Rng rng(101);
  double worst = 0.0, min_pos = 1.0;
  for (int t = 0; t < 200; ++t) {
    const auto alg = random_algebra(rng, 3, 4, 40);
    const Element x = random_element(alg, rng), y = random_element(alg, rng);
    worst = std::max(worst, std::abs(trace(alg, x * y) - trace(alg, y * x)) /
                                std::max(1.0, l2_norm(alg, x) * l2_norm(alg, y)));
    worst = std::max(worst, std::abs(trace(alg, identity(alg)) - 1.0));
    min_pos = std::min(min_pos, std::real(trace(alg, adjoint(x) * x)));
  }
  CHECK(worst < 1e-12);
  CHECK(min_pos > 0.0);
}

TEST_CASE("property: coordinates and L2 coordinates round-trip") {
  Rng rng(102);
  for (int t = 0; t < 100; ++t) {
    const auto alg = random_algebra(rng, 3, 4, 40);
    const Element x = random_element(alg, rng), y = random_element(alg, rng);
    CHECK(max_abs(from_coords(alg, to_coords(alg, x)) - x) < 1e-14);
    CHECK(max_abs(from_l2(alg, to_l2(alg, x)) - x) < 1e-12);
    // L² coordinates are orthonormal for ⟨x, y⟩ = τ(y* x).
    const cd ip = to_l2(alg, y).dot(to_l2(alg, x));
    CHECK(std::abs(ip - l2_inner(alg, x, y)) < 1e-12 * std::max(1.0, std::abs(ip)));
  }
}

TEST_CASE("property: multiplication matrices represent the product") {
  Rng rng(103);
  for (int t = 0; t < 100; ++t) {
    const auto alg = random_algebra(rng, 3, 4, 40);
    const Element x = random_element(alg, rng), y = random_element(alg, rng);
    const VectorXcd yc = to_coords(alg, y);
    CHECK((left_multiplication(alg, x) * yc - to_coords(alg, x * y)).norm() < 1e-12);
    CHECK((right_multiplication(alg, x) * yc - to_coords(alg, y * x)).norm() < 1e-12);
  }
}

TEST_CASE("property: functional calculus is a *-homomorphism on polynomials") {
  Rng rng(104);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto alg = random_algebra(rng, 3, 4, 40);
    const Element h = random_hermitian(alg, rng);
    const Element sq = functional_calculus(h, [](double s) { return s * s; });
    worst = std::max(worst, max_abs(sq - h * h) / std::max(1.0, max_abs(h * h)));
    const Element p = spectral_projection_above(spectral_decompose(h), 0.0);
    worst = std::max(worst, max_abs(p * p - p));
    worst = std::max(worst, self_adjoint_defect(p));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("property: operator norm dominates the normalized L2 norm") {
  Rng rng(105);
  for (int t = 0; t < 100; ++t) {
    const auto alg = random_algebra(rng, 3, 4, 40);
    const Element x = random_element(alg, rng);
    CHECK(l2_norm(alg, x) <= op_norm(x) * (1.0 + 1e-12));
  }
}
