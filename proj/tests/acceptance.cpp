// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance <name>...  run the named criteria

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "support.hpp"
#include "corrkit/sigmafin.hpp"
#include "corrkit/statial.hpp"

using namespace corrkit;
using namespace corrkit::testing;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

class Detail {
 public:
  Detail() { os_.precision(3); }
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  operator std::string() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Largest |eigenvalue| over the blocks of a self-adjoint element, computed independently.
double hermitian_norm(const Element& x) {
  double n = 0.0;
  for (const auto& b : x.blocks) {
    if (b.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((b + b.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    n = std::max(n, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return n;
}

// τ(e_a x) for the a-th matrix unit: λ_k x_ji.
cd trace_against_unit(const TracialAlgebra& alg, Index a, const Element& x) {
  const auto u = alg.unit(a);
  return alg.weight(u.block) * x[u.block](u.col, u.row);
}

constexpr std::uint64_t kCorpusSeed = 20240601;
constexpr int kCorpusSize = 1000;
constexpr Index kCorpusDim = 32;

Outcome radon_nikodym_exactness() {
  Rng rng(kCorpusSeed);
  double identity = 0.0, norm_gap = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < kCorpusSize; ++t) {
    const auto c = random_corpus_member(rng, kCorpusDim);
    const VectorXcd xi = random_vector(c, rng).normalized();
    const auto cert = radon_nikodym(c, xi);
    for (Index a = 0; a < c.left_alg().dim(); ++a) {
      const Element e = basis_element(c.left_alg(), a);
      const cd lhs = xi.dot(c.left_action(e) * xi);
      identity = std::max(identity, std::abs(lhs - trace_against_unit(c.left_alg(), a, cert.b_left)));
    }
    for (Index a = 0; a < c.right_alg().dim(); ++a) {
      const Element e = basis_element(c.right_alg(), a);
      const cd lhs = xi.dot(c.right_action(e) * xi);
      identity = std::max(identity, std::abs(lhs - trace_against_unit(c.right_alg(), a, cert.d_right)));
    }
    norm_gap = std::max(norm_gap, std::abs(cert.K_left - hermitian_norm(cert.b_left)));
    norm_gap = std::max(norm_gap, std::abs(cert.K_right - hermitian_norm(cert.d_right)));
  }
  const double secs = seconds_since(t0);
  return {identity < 1e-10 && norm_gap < 1e-10 && secs < 60.0,
          Detail() << kCorpusSize << " instances, identity residual " << identity << " (< 1e-10), "
                   << "|K - op norm| " << norm_gap << " (< 1e-10), " << secs << " s (< 60 s)"};
}

Outcome cutoff_bound() {
  Rng rng(kCorpusSeed);
  double worst = -1.0;
  for (int t = 0; t < kCorpusSize; ++t) {
    const auto c = random_corpus_member(rng, kCorpusDim);
    const VectorXcd xi = random_vector(c, rng).normalized();
    const double K = radon_nikodym(c, xi).K_left;
    for (double R : {K / 4.0, K / 2.0, K}) {
      const auto out = cutoff(c, xi, R);
      worst = std::max(worst, radon_nikodym(c, out.vector).K_left - R);
    }
  }
  return {worst <= 1e-9, Detail() << 3 * kCorpusSize << " cutoffs, max(K_out - R) " << worst << " (<= 1e-9)"};
}

Outcome renormalization() {
  Rng rng(kCorpusSeed + 1);
  double worst = -1.0;
  for (int t = 0; t < 1000; ++t) {
    const auto c = random_corpus_member(rng, kCorpusDim);
    const auto r = renormalize_subtracial(c, random_vector(c, rng));
    worst = std::max(worst, radon_nikodym(c, r.vector).bound() - 1.0);
  }
  const auto m2 = TracialAlgebra::full(2);
  const auto c = trivial_correspondence(m2);
  const VectorXcd out = renormalize_subtracial(c, hat(m2, diag_element(m2, {2.0, 1.0}))).vector;
  const double exact = (out - hat(m2, diag_element(m2, {0.5, 1.0}))).norm();
  return {worst <= 1e-9 && exact <= 1e-12,
          Detail() << "1000 trials, max(K - 1) " << worst << " (<= 1e-9); diag(2,1) -> diag(1/2,1) error "
                   << exact << " (<= 1e-12)"};
}

Outcome bounded_vector_arithmetic() {
  Rng rng(kCorpusSeed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = -1.0, convex = -1.0, action = -1.0;
  int sum_violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto c = random_corpus_member(rng, 16);
    const VectorXcd x = random_vector(c, rng), y = random_vector(c, rng);
    const double k1 = radon_nikodym(c, x).bound(), k2 = radon_nikodym(c, y).bound();
    const double gap = radon_nikodym(c, x + y).bound() - std::sqrt(k1 * k1 + k2 * k2);
    sum = std::max(sum, gap);
    sum_violations += gap > 1e-9;

    const double K = 0.5 + 3.0 * u(rng);
    const VectorXcd a = renormalize_to_bound(c, random_vector(c, rng), K).vector;
    const VectorXcd b = renormalize_to_bound(c, random_vector(c, rng), K).vector;
    const VectorXcd d = renormalize_to_bound(c, random_vector(c, rng), K).vector;
    VectorXd w(3);
    for (int i = 0; i < 3; ++i) w(i) = u(rng);
    w /= w.sum();
    convex = std::max(convex, radon_nikodym(c, w(0) * a + w(1) * b + w(2) * d).bound() - K);

    const Element m = random_element(c.left_alg(), rng);
    const double nm = op_norm(m);
    action = std::max(action, radon_nikodym(c, c.act_left(m, x)).K_left -
                                  nm * nm * radon_nikodym(c, x).K_left * (1.0 + 1e-12));
  }
  return {sum <= 1e-9 && convex <= 1e-9 && action <= 1e-9,
          Detail() << "sum rule sqrt(K1^2+K2^2): max excess " << sum << " with " << sum_violations
                   << "/1000 violations; convexity max excess " << convex << "; action rule max excess "
                   << action << " (each <= 1e-9)"};
}

MatrixXcd orbit_gram(const Correspondence& c, const VectorXcd& xi) {
  MatrixXcd V(c.dim(), c.left_alg().dim() * c.right_alg().dim());
  Index col = 0;
  for (Index a = 0; a < c.left_alg().dim(); ++a)
    for (Index b = 0; b < c.right_alg().dim(); ++b)
      V.col(col++) = c.act_right(c.act_left(basis_element(c.left_alg(), a), xi), basis_element(c.right_alg(), b));
  return V.adjoint() * V;
}

Outcome cp_correspondence_round_trip() {
  Rng rng(kCorpusSeed + 3);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto c = random_corpus_member(rng, 16);
    const VectorXcd xi = renormalize_subtracial(c, random_vector(c, rng)).vector;
    const auto h = cp_to_correspondence(vector_to_cp(c, xi));
    worst = std::max(worst, max_entry(orbit_gram(c, xi) - orbit_gram(h.corr, h.vector)));
  }
  return {worst < 1e-9, Detail() << "200 subtracial vectors, max Gram entry gap " << worst << " (< 1e-9)"};
}

Outcome cyclic_decomposition_criterion() {
  const auto m2 = TracialAlgebra::full(2);
  const auto parts = cyclic_decomposition(coarse_correspondence(m2, m2));
  double residual = 0.0;
  bool iso = parts.size() == 4;
  for (const auto& p : parts) {
    const auto u = equivariant_unitary(p.corr, trivial_correspondence(m2));
    iso = iso && u.unitary.has_value();
    residual = std::max(residual, u.residual);
  }
  iso = iso && residual < 1e-8;

  Rng rng(kCorpusSeed + 4);
  int recovered = 0, trials = 0;
  for (Index k = 1; k <= 5; ++k)
    for (int rep = 0; rep < 4; ++rep) {
      const auto left = random_algebra(rng, 3, 2, 14), right = random_algebra(rng, 3, 2, 14);
      std::vector<Correspondence> irreps;
      for (Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Index> lb(0, left.num_blocks() - 1), rb(0, right.num_blocks() - 1);
        irreps.push_back(irreducible_correspondence(left, right, lb(rng), rb(rng)));
      }
      const auto sum = direct_sum(irreps, std::vector<Index>(irreps.size(), 1));
      const auto c = rotate(sum, haar_unitary(sum.dim(), rng));
      ++trials;
      recovered += static_cast<Index>(cyclic_decomposition(c, 100 + trials).size()) == k;
    }
  return {iso && recovered == trials,
          Detail() << "coarse(M2,M2): " << parts.size() << " summands, intertwiner residual " << residual
                   << " (< 1e-8); rotated sums of k <= 5 irreducibles recovered " << recovered << "/" << trials};
}

// Exhaustive grid lower bound for the disjoint-block pair: ξ sees only p₁, η only p₂.
double disjoint_block_lower_bound() {
  double best = std::numeric_limits<double>::infinity();
  for (int i = -40; i <= 40; ++i)
    for (int j = -40; j <= 40; ++j) best = std::min(best, std::max(1.0, std::pow(0.05 * i, 2) + std::pow(0.05 * j, 2)));
  return best;
}

Outcome semidiscrete_control_criterion() {
  Detail d;
  bool ok = true;
  for (Index n = 1; n <= 3; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = semidiscrete_control(TracialAlgebra::full(n), 1, 1e-6);
    const double secs = seconds_since(t0);
    ok = ok && rep.contained && rep.max_residual < 1e-6 && secs < 120.0;
    d << "n=" << n << ": residual " << rep.max_residual << " in " << secs << " s; ";
  }
  const auto c2 = TracialAlgebra({1, 1}, {0.5, 0.5});
  const auto neg = weak_containment_report(irreducible_correspondence(c2, c2, 0, 0),
                                           irreducible_correspondence(c2, c2, 1, 1), 2, 1e-6);
  const double lower = disjoint_block_lower_bound();
  ok = ok && neg.max_residual >= lower - 1e-9;
  d << "negative control residual " << neg.max_residual << " vs lower bound " << lower;
  return {ok, d};
}

Correspondence central_host(Rng& rng, int t) {
  const auto alg = random_algebra(rng, 2, 2, 14);
  const auto triv = trivial_correspondence(alg);
  if (t % 2 == 0) return rotate(triv, haar_unitary(triv.dim(), rng));
  const auto sum = direct_sum({triv, coarse_correspondence(alg, alg)}, {1, 1});
  return rotate(sum, haar_unitary(sum.dim(), rng));
}

Outcome averaged_central_vector_criterion() {
  Rng rng(kCorpusSeed + 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0, instances = 0;
  double dist_excess = -1.0, bound_excess = -1.0;
  while (instances < 200) {
    const auto c = central_host(rng, instances);
    const MatrixXcd Z = central_subspace(c);
    if (Z.cols() == 0 || Z.cols() == c.dim()) continue;
    const VectorXcd z = (Z * gaussian_vector(Z.cols(), rng)).normalized();
    const VectorXcd xi = (z + 0.02 * u(rng) * gaussian_vector(c.dim(), rng).normalized()).normalized();
    double delta = 0.0;
    for (const auto& e : default_generators(c.left_alg())) delta += commutator_defect(c, xi, {e});
    delta *= 2.0;
    if (delta >= 0.9) continue;
    const double K = radon_nikodym(c, xi).bound();
    AveragedCentralOptions opts;
    opts.seed = 7000 + instances;
    const auto r = averaged_central_vector(c, xi, K, delta, opts);
    ++instances;
    const double de = r.distance - 2.0 * delta, be = r.bound - K / std::pow(1.0 - delta, 2);
    dist_excess = std::max(dist_excess, de);
    bound_excess = std::max(bound_excess, be);
    violations += r.degenerate || de > 1e-9 || be > 1e-9;
  }
  const auto m2 = TracialAlgebra::full(2);
  double agreement = 0.0;
  for (const auto& c : {trivial_correspondence(m2), coarse_correspondence(m2, m2)}) {
    const VectorXcd xi = gaussian_vector(c.dim(), rng).normalized();
    agreement = std::max(agreement, (sampled_min_norm_point(c, xi, 64, 77) - central_projection(c, xi).central_part).norm());
  }
  return {violations == 0 && agreement < 5e-3,
          Detail() << instances << " instances, " << violations << " violations (max distance excess "
                   << dist_excess << ", max bound excess " << bound_excess
                   << "); 64-sample min-norm agreement " << agreement << " (< 5e-3)"};
}

Outcome uniformization() {
  Rng rng(kCorpusSeed + 6);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  double bound_excess = -1.0, last = 0.0;
  int unbounded_terms = 0;
  for (int t = 0; t < 50; ++t) {
    const auto c = random_corpus_member(rng, 16);
    const double K = u(rng);
    const VectorXcd limit = renormalize_to_bound(c, random_vector(c, rng), K).vector;
    const VectorXcd spike = 30.0 * gaussian_vector(c.dim(), rng);
    VectorSequence s;
    for (int i = 0; i < 64; ++i) {
      s.terms.push_back(limit + std::pow(2.0, -0.5 * i) * spike);
      unbounded_terms += radon_nikodym(c, s.terms.back()).bound() > K;
    }
    s.limit = limit;
    const auto out = uniformize_sequence(c, s, K);
    for (const auto& v : out.terms) bound_excess = std::max(bound_excess, radon_nikodym(c, v).bound() - K);
    last = std::max(last, out.distances.back());
  }
  return {bound_excess <= 1e-8 && last < 1e-6,
          Detail() << "50 sequences of 64 (" << unbounded_terms << " input terms above K), max(K_out - K) "
                   << bound_excess << " (<= 1e-8), max last distance " << last << " (< 1e-6)"};
}

Element random_density(const TracialAlgebra& alg, Rng& rng) {
  Element rho = random_positive(alg, rng) + 0.05 * identity(alg);
  return (1.0 / std::real(matrix_trace(rho))) * rho;
}

double right_bound_oracle(const Element& a, const FaithfulState& phi) {
  const auto& alg = phi.algebra();
  const Index n = alg.dim();
  MatrixXcd T(n, n), D(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Element ei = basis_element(alg, i), ej = basis_element(alg, j);
      T(i, j) = phi(adjoint(ei * a) * (ej * a));
      D(i, j) = phi(adjoint(ei) * ej);
    }
  return generalized_max(T, D);
}

Outcome sigma_finite_suite() {
  Rng rng(kCorpusSeed + 7);
  double oracle = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto alg = random_algebra(rng, 3, 3, 14);
    const FaithfulState phi(alg, random_density(alg, rng));
    const Element a = random_element(alg, rng);
    const double k = phi_right_bound(a, phi);
    oracle = std::max(oracle, std::abs(k - right_bound_oracle(a, phi)) / std::max(1.0, k));
  }

  std::uniform_real_distribution<double> ts(-5.0, 5.0);
  double laws = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto alg = random_algebra(rng, 3, 3, 14);
    const FaithfulState phi(alg, random_density(alg, rng));
    const Element x = random_element(alg, rng), y = random_element(alg, rng);
    const double s = ts(rng), r = ts(rng);
    laws = std::max(laws, max_abs(modular_flow(x, phi, s + r) - modular_flow(modular_flow(x, phi, r), phi, s)));
    laws = std::max(laws, std::abs(phi(modular_flow(x, phi, s)) - phi(x)));
    laws = std::max(laws, max_abs(modular_flow(x * y, phi, s) - modular_flow(x, phi, s) * modular_flow(y, phi, s)) /
                              std::max(1.0, op_norm(x) * op_norm(y)));
    laws = std::max(laws, max_abs(modular_flow(adjoint(x), phi, s) - adjoint(modular_flow(x, phi, s))));
    laws = std::max(laws, max_abs(modular_flow(identity(alg), phi, s) - identity(alg)));
  }

  const auto m2 = TracialAlgebra::full(2);
  double phase_err = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.8})
    for (double t : {-3.0, -0.5, 0.7, 2.0}) {
      const FaithfulState phi(m2, diag_element(m2, {p, 1.0 - p}));
      const cd phase = std::exp(cd(0, t * std::log(p / (1.0 - p))));
      phase_err = std::max(phase_err, max_abs(modular_flow(matrix_unit(m2, 0, 0, 1), phi, t) -
                                              phase * matrix_unit(m2, 0, 0, 1)));
    }

  double proj = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto alg = random_algebra(rng, 2, 3, 14);
    const FaithfulState phi(alg, random_density(alg, rng));
    proj = std::max(proj, density_projection(haar_unitary(alg, rng), phi, 1e3).distance);
  }
  return {oracle < 1e-9 && laws < 1e-10 && phase_err < 1e-10 && proj < 1e-3,
          Detail() << "right bound vs oracle " << oracle << " (< 1e-9, 500); flow laws " << laws
                   << " (< 1e-10); e12 phase " << phase_err << " (< 1e-10); ||p_K u - u|| at K=1e3 " << proj
                   << " (< 1e-3)"};
}

double hilbert_multiplier_oracle(const Element& a, const TracialAlgebra& alg, const Element& rho) {
  const Index n = alg.dim();
  MatrixXcd G(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) G(i, j) = pairing(rho, adjoint(basis_element(alg, i)) * basis_element(alg, j));
  const MatrixXcd La = left_multiplication(alg, a), Ra = right_multiplication(alg, a);
  return std::max(generalized_max(La.adjoint() * G * La, G), generalized_max(Ra.adjoint() * G * Ra, G));
}

Outcome statial_suite() {
  Rng rng(kCorpusSeed + 8);
  double pure = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto alg = TracialAlgebra::full(t % 2 == 0 ? 2 : 3);
    Element rho = zero(alg);
    const VectorXcd v = gaussian_vector(alg.block_size(0), rng).normalized();
    rho[0] = v * v.adjoint();
    const Element x = random_element(alg, rng);
    const double op = op_norm(x);
    pure = std::max(pure, std::abs(statial_norm(x, StatialFamily(alg, {rho}, true)) - op) / std::max(1.0, op));
  }

  int witnessed = 0, families = 0;
  while (families < 100) {
    const auto alg = random_algebra(rng, 3, 3, 14);
    if (alg.dim() == 1) continue;
    std::uniform_int_distribution<Index> pick(0, alg.num_blocks() - 1);
    const Index k = pick(rng);
    const VectorXcd v = gaussian_vector(alg.block_size(k), rng).normalized();
    Element P = identity(alg);
    P[k] -= v * v.adjoint();
    std::vector<Element> ds;
    for (int i = 0; i < 3; ++i) {
      Element rho = P * random_positive(alg, rng) * P;
      const double tr = std::real(matrix_trace(rho));
      if (tr < 1e-12) continue;
      ds.push_back((1.0 / tr) * rho);
    }
    if (ds.empty()) ds.push_back((1.0 / std::real(matrix_trace(P))) * P);
    const StatialFamily fam(alg, ds, false);
    ++families;
    const auto r = faithful_check(fam);
    const double n = r.faithful ? 0.0 : l2_norm(alg, r.witness);
    const double w = r.faithful ? 0.0 : statial_norm(r.witness, fam);
    witnessed += !r.faithful && n > 0.0 && w * w <= 1e-12 * n * n;
  }

  int contained = 0;
  const int hilbert = 200;
  for (int t = 0; t < hilbert; ++t) {
    const auto alg = random_algebra(rng, 3, 3, 14);
    Element rho = zero(alg);
    for (Index k = 0; k < alg.num_blocks(); ++k) rho[k].diagonal().setConstant(alg.weight(k));
    const Element a = random_element(alg, rng);
    const double exact = hilbert_multiplier_oracle(a, alg, rho);
    const auto iv = multiplier_bound(a, StatialFamily(alg, {rho}, false));
    contained += iv.lo <= exact + 1e-8 && iv.hi >= exact - 1e-8;
  }
  return {pure < 1e-10 && witnessed == families && contained == hilbert,
          Detail() << "pure full-closure norm vs op norm " << pure << " (< 1e-10, 500); witnesses " << witnessed
                   << "/" << families << "; Hilbert-case intervals containing the exact value " << contained << "/"
                   << hilbert};
}

const std::map<std::string, std::function<Outcome()>>& criteria() {
  static const std::map<std::string, std::function<Outcome()>> table = {
      {"radon_nikodym_exactness", radon_nikodym_exactness},
      {"cutoff_bound", cutoff_bound},
      {"renormalization", renormalization},
      {"bounded_vector_arithmetic", bounded_vector_arithmetic},
      {"cp_correspondence_round_trip", cp_correspondence_round_trip},
      {"cyclic_decomposition", cyclic_decomposition_criterion},
      {"semidiscrete_control", semidiscrete_control_criterion},
      {"averaged_central_vector", averaged_central_vector_criterion},
      {"uniformization", uniformization},
      {"sigma_finite_suite", sigma_finite_suite},
      {"statial_suite", statial_suite}};
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> names;
  for (int i = 1; i < argc; ++i) names.emplace_back(argv[i]);
  if (names.empty())
    for (const auto& [name, fn] : criteria()) names.push_back(name);

  int failures = 0;
  for (const auto& name : names) {
    const auto it = criteria().find(name);
    if (it == criteria().end()) {
      std::cout << "FAIL " << name << ": unknown criterion\n";
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failures += !o.passed;
  }
  return failures == 0 ? 0 : 1;
}
