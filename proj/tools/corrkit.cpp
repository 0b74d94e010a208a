// corrkit command-line front end.
//
// Exit codes: 0 when every check passes, 1 when a check fails, 2 on input errors.

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "corrkit/io.hpp"

using namespace corrkit;
using corrkit::io::json;

namespace {

constexpr const char* kSchemaVersion = "1.0";

struct Global {
  double tol = 1e-9;
  std::uint64_t seed = 1;
  Index mult = 8;
  std::string out;
  bool no_timestamp = false;
};

class Report {
 public:
  json inputs = json::object();
  json results = json::object();

  void check(const std::string& name, double value, double tolerance, bool passed) {
    checks_.push_back(
        {{"name", name}, {"value", value}, {"tolerance", tolerance}, {"passed", passed}});
    passed_ = passed_ && passed;
  }
  bool passed() const { return passed_; }

  json finish(const std::string& command, const Global& g, double seconds) const {
    json doc = {{"schema_version", kSchemaVersion},
                {"command", command},
                {"settings", {{"tol", g.tol}, {"seed", g.seed}, {"mult", g.mult}}},
                {"inputs", inputs},
                {"results", results},
                {"checks", checks_},
                {"passed", passed_}};
    if (!g.no_timestamp) {
      const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      std::ostringstream ts;
      ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
      doc["timestamp"] = ts.str();
      doc["wall_clock_seconds"] = seconds;
    }
    return doc;
  }

 private:
  json checks_ = json::array();
  bool passed_ = true;
};

json vector_list(const std::vector<VectorXcd>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(io::from_vector(v));
  return out;
}

json profile(const TailProfile& p) { return {{"values", p.values}, {"tail_sup", p.tail_sup}}; }

json validation(const ValidationReport& v) {
  return {{"homomorphism", v.homomorphism}, {"star", v.star},
          {"commutation", v.commutation},   {"boundedness", v.boundedness},
          {"sort_membership", v.sort_membership}, {"tolerance", v.tolerance},
          {"passed", v.passed}};
}

json fell_json(const WeakContainmentReport& rep) {
  json results = json::array();
  for (const auto& r : rep.results)
    results.push_back({{"residual", r.residual},
                       {"converged", r.converged},
                       {"starts_run", r.starts_run},
                       {"witnesses", vector_list(r.witnesses)}});
  return {{"queries", results},
          {"max_residual", rep.max_residual},
          {"tolerance", rep.tolerance},
          {"contained", rep.contained},
          {"converged", rep.converged},
          {"runtime_seconds", rep.seconds}};
}

Element read_element(const TracialAlgebra& alg, const std::string& path) {
  return io::to_element(alg, io::read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrkit: correspondences of finite-dimensional tracial algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--tol", g.tol, "Tolerance for pass/fail checks")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized routines")->capture_default_str();
  app.add_option("--mult", g.mult, "Multiplicity cap for Fell witnesses")->capture_default_str();
  app.add_option("--out", g.out, "Write the JSON report here instead of stdout");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit timestamp and wall-clock fields");

  Report report;
  std::string command;
  std::function<void()> action;

  // Shared option storage; each subcommand binds the ones it needs.
  std::string algebra_path, corr_path, vector_path, seq_path, cp_path, source_path, target_path,
      state_path, element_path, family_path, side = "left";
  double R = 1.0, K = 1.0, delta = 0.1, eps = 1e-6, t = 0.0, norm_cap = 1e6;
  int samples = 256;

  const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                        std::function<void()> fn) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->callback([&, fn, full = parent->get_name() + " " + name]() {
      command = full;
      action = fn;
    });
    return sub;
  };

  // algebra
  CLI::App* algebra = app.add_subcommand("algebra", "Tracial algebra descriptors");
  algebra->require_subcommand(1);
  leaf(algebra, "check", "Validate an algebra descriptor", [&] {
    const auto alg = io::to_algebra(io::read_file(algebra_path));
    report.inputs["algebra"] = algebra_path;
    double total = 0.0;
    for (Index k = 0; k < alg.num_blocks(); ++k)
      total += alg.weight(k) * static_cast<double>(alg.block_size(k));
    report.results = {{"algebra", io::from_algebra(alg)}, {"dim", alg.dim()}, {"trace_of_unit", total}};
    report.check("trace normalization", std::abs(total - 1.0), g.tol, std::abs(total - 1.0) <= g.tol);
  })->add_option("--algebra", algebra_path)->required();

  // corr
  CLI::App* corr = app.add_subcommand("corr", "Correspondences");
  corr->require_subcommand(1);
  leaf(corr, "validate", "Check the bimodule laws", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    report.inputs["corr"] = corr_path;
    const auto v = validate(c, g.tol);
    report.results = {{"dim", c.dim()}, {"validation", validation(v)}};
    report.check("bimodule laws", v.worst(), g.tol, v.passed);
  })->add_option("--corr", corr_path)->required();
  leaf(corr, "decompose", "Cyclic decomposition", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    report.inputs["corr"] = corr_path;
    const auto parts = cyclic_decomposition(c, g.seed);
    json summands = json::array();
    Index total = 0;
    for (const auto& s : parts) {
      total += s.corr.dim();
      summands.push_back({{"dim", s.corr.dim()}, {"cyclic_vector", io::from_vector(s.vector)},
                          {"phi_action", io::from_matrix(s.phi.action)}});
    }
    report.results = {{"dim", c.dim()}, {"summands", summands}, {"count", parts.size()}};
    report.check("dimensions add up", static_cast<double>(std::abs(total - c.dim())), 0.0, total == c.dim());
  })->add_option("--corr", corr_path)->required();

  // bound
  CLI::App* bound = app.add_subcommand("bound", "Bound certificates");
  bound->require_subcommand(1);
  auto* certify = leaf(bound, "certify", "Radon-Nikodym certificate of a vector", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto xi = io::to_vector(io::read_file(vector_path));
    report.inputs = {{"corr", corr_path}, {"vector", vector_path}};
    const auto cert = radon_nikodym(c, xi);
    const auto pl = positivity_check(cert.b_left, g.tol);
    const auto pr = positivity_check(cert.d_right, g.tol);
    report.results = {{"certificate", io::from_certificate(cert)}};
    report.check("b_left positive", pl.min_eigenvalue, g.tol, pl.positive);
    report.check("d_right positive", pr.min_eigenvalue, g.tol, pr.positive);
  });
  certify->add_option("--corr", corr_path)->required();
  certify->add_option("--vector", vector_path)->required();
  auto* cut = leaf(bound, "cutoff", "Spectral cutoff at level R", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto xi = io::to_vector(io::read_file(vector_path));
    report.inputs = {{"corr", corr_path}, {"vector", vector_path}, {"R", R}, {"side", side}};
    const Side s = side == "right" ? Side::Right : Side::Left;
    const auto res = cutoff_side(c, xi, R, s);
    const double after = op_norm(radon_nikodym_element(c, res.vector, s));
    report.results = {{"vector", io::from_vector(res.vector)},
                      {"projection", io::from_element(res.projection)},
                      {"bound_after", after}};
    report.check("output is R-bounded", after - R, g.tol, after <= R + g.tol);
  });
  cut->add_option("--corr", corr_path)->required();
  cut->add_option("--vector", vector_path)->required();
  cut->add_option("--R", R)->required();
  cut->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
  auto* renorm = leaf(bound, "renormalize", "Renormalize to a K-bounded vector", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto xi = io::to_vector(io::read_file(vector_path));
    report.inputs = {{"corr", corr_path}, {"vector", vector_path}, {"K", K}};
    const auto res = renormalize_to_bound(c, xi, K);
    const double after = radon_nikodym(c, res.vector).bound();
    report.results = {{"vector", io::from_vector(res.vector)},
                      {"input_certificate", io::from_certificate(res.input)},
                      {"bound_after", after},
                      {"distance", (xi - res.vector).norm()},
                      {"distance_bound", res.distance_bound}};
    report.check("output is K-bounded", after - K, g.tol, after <= K + g.tol);
  });
  renorm->add_option("--corr", corr_path)->required();
  renorm->add_option("--vector", vector_path)->required();
  renorm->add_option("--K", K)->capture_default_str();

  // cp
  CLI::App* cp = app.add_subcommand("cp", "Completely positive maps");
  cp->require_subcommand(1);
  leaf(cp, "check", "Complete positivity, *-preservation, subtraciality", [&] {
    const auto phi = io::to_cp_map(io::read_file(cp_path));
    report.inputs["cp"] = cp_path;
    const auto r = check_cp(phi, g.tol);
    report.results = {{"choi_min_eigenvalue", r.choi_min_eigenvalue},
                      {"star_residual", r.star_residual},
                      {"unit_gap_min_eigenvalue", r.unit_gap_min_eigenvalue},
                      {"trace_gap_min_eigenvalue", r.trace_gap_min_eigenvalue},
                      {"subtracial", r.subtracial}};
    report.check("completely positive", r.choi_min_eigenvalue, g.tol, r.completely_positive);
    report.check("star preserving", r.star_residual, g.tol, r.star_preserving);
  })->add_option("--cp", cp_path)->required();
  leaf(cp, "correspondence", "Build H_phi with its cyclic vector", [&] {
    const auto phi = io::to_cp_map(io::read_file(cp_path));
    report.inputs["cp"] = cp_path;
    const auto h = cp_to_correspondence(phi);
    const auto v = validate(h.corr, g.tol);
    report.results = {{"correspondence", io::from_correspondence(h.corr)},
                      {"cyclic_vector", io::from_vector(h.vector)},
                      {"validation", validation(v)}};
    report.check("bimodule laws", v.worst(), g.tol, v.passed);
  })->add_option("--cp", cp_path)->required();
  auto* fromvec = leaf(cp, "from-vector", "The c.p. map of a vector", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto xi = io::to_vector(io::read_file(vector_path));
    report.inputs = {{"corr", corr_path}, {"vector", vector_path}};
    const auto phi = vector_to_cp(c, xi);
    const auto r = check_cp(phi, g.tol);
    report.results = {{"source", io::from_algebra(phi.source)},
                      {"target", io::from_algebra(phi.target)},
                      {"action", io::from_matrix(phi.action)},
                      {"subtracial", r.subtracial}};
    report.check("completely positive", r.choi_min_eigenvalue, g.tol, r.completely_positive);
  });
  fromvec->add_option("--corr", corr_path)->required();
  fromvec->add_option("--vector", vector_path)->required();

  // fell
  CLI::App* fell = app.add_subcommand("fell", "Fell residuals and weak containment");
  fell->add_option("--source", source_path);
  fell->add_option("--target", target_path);
  fell->add_option("--eps", eps)->capture_default_str();
  fell->callback([&] {
    if (command.rfind("fell semidiscrete", 0) == 0) return;
    command = "fell";
    action = [&] {
      if (source_path.empty() || target_path.empty())
        throw io::InputError("fell needs --source and --target");
      const auto s = io::to_correspondence(io::read_file(source_path));
      const auto tg = io::to_correspondence(io::read_file(target_path));
      report.inputs = {{"source", source_path}, {"target", target_path}, {"eps", eps}};
      FellOptions opts;
      opts.seed = g.seed;
      const auto rep = weak_containment_report(s, tg, g.mult, eps, std::nullopt, opts);
      report.results = fell_json(rep);
      report.check("contained", rep.max_residual, eps, rep.contained);
    };
  });
  leaf(fell, "semidiscrete", "trivial(M) against coarse(M,M)", [&] {
    const auto alg = io::to_algebra(io::read_file(algebra_path));
    report.inputs = {{"algebra", algebra_path}, {"eps", eps}};
    FellOptions opts;
    opts.seed = g.seed;
    const auto rep = semidiscrete_control(alg, g.mult, eps, opts);
    report.results = fell_json(rep);
    std::clog << "semidiscrete control: " << rep.seconds << " s\n";
    report.check("contained", rep.max_residual, eps, rep.contained);
  })->add_option("--algebra", algebra_path)->required();

  // central
  CLI::App* central = app.add_subcommand("central", "Central vectors");
  central->require_subcommand(1);
  auto* project = leaf(central, "project", "Projection onto central vectors", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto xi = io::to_vector(io::read_file(vector_path));
    report.inputs = {{"corr", corr_path}, {"vector", vector_path}};
    const auto r = central_projection(c, xi);
    const double after = commutator_defect(c, r.central_part, default_generators(c.left_alg()));
    report.results = {{"defect", r.defect}, {"central_part", io::from_vector(r.central_part)},
                      {"distance", r.distance}, {"defect_after", after}};
    report.check("projection is central", after, 1e-10, after <= 1e-10);
  });
  project->add_option("--corr", corr_path)->required();
  project->add_option("--vector", vector_path)->required();
  auto* average = leaf(central, "average", "Averaged central vector", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto xi = io::to_vector(io::read_file(vector_path));
    report.inputs = {{"corr", corr_path}, {"vector", vector_path}, {"K", K}, {"delta", delta}};
    AveragedCentralOptions opts;
    opts.samples = samples;
    opts.seed = g.seed;
    const auto r = averaged_central_vector(c, xi, K, delta, opts);
    report.results = {{"eta", io::from_vector(r.eta)}, {"degenerate", r.degenerate},
                      {"sampled_sup", r.sampled_sup}, {"certified_sup", r.certified_sup},
                      {"distance", r.distance}, {"bound", r.bound}};
    report.check("distance within 2 delta", r.distance - r.distance_limit, 1e-9,
                 !r.degenerate && r.distance <= r.distance_limit + 1e-9);
    report.check("bound within K/(1-delta)^2", r.bound - r.bound_limit, 1e-9,
                 !r.degenerate && r.bound <= r.bound_limit + 1e-9);
  });
  average->add_option("--corr", corr_path)->required();
  average->add_option("--vector", vector_path)->required();
  average->add_option("--K", K)->required();
  average->add_option("--delta", delta)->required();
  average->add_option("--samples", samples)->capture_default_str();
  auto* search = leaf(central, "search", "Almost-central K-bounded unit vector", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    report.inputs = {{"corr", corr_path}, {"K", K}, {"delta", delta}};
    AlmostCentralOptions opts;
    opts.seed = g.seed;
    const auto r = almost_central_search(c, default_generators(c.left_alg()), delta, K, opts);
    report.results = {{"found", r.found}, {"converged", r.converged},
                      {"xi", io::from_vector(r.xi)}, {"commutator", r.commutator},
                      {"left_trace", r.left_trace}, {"right_trace", r.right_trace},
                      {"bound", r.bound}, {"residual", r.residual}};
    report.check("witness found", r.residual, 1e-10, r.found);
  });
  search->add_option("--corr", corr_path)->required();
  search->add_option("--K", K)->required();
  search->add_option("--delta", delta)->required();

  // sigma
  CLI::App* sigma = app.add_subcommand("sigma", "Faithful states and modular flow");
  sigma->require_subcommand(1);
  leaf(sigma, "gns", "GNS Gram matrix", [&] {
    const auto phi = io::to_state(io::read_file(state_path));
    report.inputs["state"] = state_path;
    const auto h = gns(phi);
    report.results = {{"gram", io::from_matrix(h.gram)},
                      {"gram_min_eigenvalue", h.gram_min_eigenvalue},
                      {"left_faithful", h.left_faithful}};
    report.check("Gram positive definite", h.gram_min_eigenvalue, kFaithfulCutoff,
                 h.gram_min_eigenvalue > kFaithfulCutoff);
    report.check("left representation faithful", h.left_faithful ? 0.0 : 1.0, 0.0, h.left_faithful);
  })->add_option("--state", state_path)->required();
  auto* rb = leaf(sigma, "bound", "phi-right bound, sharp norm and sort membership", [&] {
    const auto phi = io::to_state(io::read_file(state_path));
    const auto a = read_element(phi.algebra(), element_path);
    report.inputs = {{"state", state_path}, {"element", element_path}, {"K", K}, {"N", R}};
    const auto m = sort_membership_sigma(a, phi, K, R);
    report.results = {{"right_bound", m.right_bound}, {"op_norm", m.op_norm},
                      {"sharp_norm", sharp_norm(a, phi)}, {"member", m.member}};
    report.check("sort membership", m.right_bound - K, 1e-10, m.member);
  });
  rb->add_option("--state", state_path)->required();
  rb->add_option("--element", element_path)->required();
  rb->add_option("--K", K)->capture_default_str();
  rb->add_option("--N", R, "Operator-norm cap")->capture_default_str();
  auto* flow = leaf(sigma, "flow", "Modular flow at time t", [&] {
    const auto phi = io::to_state(io::read_file(state_path));
    const auto x = read_element(phi.algebra(), element_path);
    report.inputs = {{"state", state_path}, {"element", element_path}, {"t", t}};
    const auto y = modular_flow(x, phi, t);
    const double inv = std::abs(phi(y) - phi(x));
    report.results = {{"value", io::from_element(y)}, {"state_invariance", inv}};
    report.check("state invariance", inv, 1e-10, inv <= 1e-10);
  });
  flow->add_option("--state", state_path)->required();
  flow->add_option("--element", element_path)->required();
  flow->add_option("--t", t)->required();
  auto* ocn = leaf(sigma, "ocneanu", "Ideal and multiplier tail profiles", [&] {
    const auto j = io::read_file(seq_path);
    report.inputs = {{"seq", seq_path}, {"norm_cap", norm_cap}};
    const auto alg = io::to_algebra(j.at("algebra"));
    std::vector<SigmaTerm> seq;
    for (const auto& term : j.at("terms"))
      seq.push_back({io::to_element(alg, term.at("x")), io::to_element(alg, term.at("density"))});
    std::vector<Element> tests;
    if (j.contains("tests"))
      for (const auto& e : j.at("tests")) tests.push_back(io::to_element(alg, e));
    const auto d = ocneanu_predicates(alg, seq, tests, norm_cap);
    report.results = {{"ideal", profile(d.ideal)}, {"test", profile(d.test)},
                      {"left_multiplier", profile(d.left_multiplier)},
                      {"right_multiplier", profile(d.right_multiplier)},
                      {"max_op_norm", d.max_op_norm}};
    report.check("ideal tail", d.ideal.tail_sup, g.tol, d.ideal.tail_sup <= g.tol);
  });
  ocn->add_option("--seq", seq_path)->required();
  ocn->add_option("--norm-cap", norm_cap)->capture_default_str();
  auto* lim = leaf(sigma, "limit", "Modular flow along a convergent sequence", [&] {
    const auto j = io::read_file(seq_path);
    report.inputs = {{"seq", seq_path}, {"t", t}};
    const auto alg = io::to_algebra(j.at("algebra"));
    std::vector<SigmaTerm> seq;
    for (const auto& term : j.at("terms"))
      seq.push_back({io::to_element(alg, term.at("x")), io::to_element(alg, term.at("density"))});
    std::optional<Element> lx;
    std::optional<FaithfulState> ls;
    if (j.contains("limit")) {
      lx = io::to_element(alg, j.at("limit").at("x"));
      ls = FaithfulState(alg, io::to_element(alg, j.at("limit").at("density")));
    }
    const auto p = modular_limit_check(alg, seq, lx, ls, t);
    report.results = {{"residual", profile(p)}};
    report.check("tail residual", p.tail_sup, g.tol, p.tail_sup <= g.tol);
  });
  lim->add_option("--seq", seq_path)->required();
  lim->add_option("--t", t)->capture_default_str();

  // statial
  CLI::App* statial = app.add_subcommand("statial", "State families");
  statial->require_subcommand(1);
  auto* snorm = leaf(statial, "norm", "The 2-seminorm of an element", [&] {
    const auto fam = io::to_family(io::read_file(family_path));
    const auto x = read_element(fam.alg, element_path);
    report.inputs = {{"family", family_path}, {"element", element_path}};
    const double n = statial_norm(x, fam);
    const double op = op_norm(x);
    report.results = {{"statial_norm", n}, {"op_norm", op}};
    report.check("dominated by operator norm", n - op, 1e-12, n <= op + 1e-12);
  });
  snorm->add_option("--family", family_path)->required();
  snorm->add_option("--element", element_path)->required();
  leaf(statial, "faithful", "Faithfulness with witness", [&] {
    const auto fam = io::to_family(io::read_file(family_path));
    report.inputs["family"] = family_path;
    const auto r = faithful_check(fam);
    report.results = {{"faithful", r.faithful}, {"min_eigenvalue", r.min_eigenvalue}};
    if (!r.faithful) {
      report.results["witness"] = io::from_element(r.witness);
      report.results["witness_norm"] = statial_norm(r.witness, fam);
    }
    report.check("faithful", r.min_eigenvalue, 1e-12, r.faithful);
  })->add_option("--family", family_path)->required();
  auto* sfull = leaf(statial, "full", "Deviation from conjugation invariance", [&] {
    const auto fam = io::to_family(io::read_file(family_path));
    report.inputs = {{"family", family_path}, {"samples", samples}};
    const auto r = full_check(fam, samples, g.seed);
    report.results = {{"max_deviation", r.max_deviation}, {"samples", r.samples}};
    report.check("invariant under sampled conjugation", r.max_deviation, g.tol,
                 r.max_deviation <= g.tol);
  });
  sfull->add_option("--family", family_path)->required();
  sfull->add_option("--samples", samples)->capture_default_str();
  auto* smult = leaf(statial, "multiplier", "Multiplier bound interval", [&] {
    const auto fam = io::to_family(io::read_file(family_path));
    const auto a = read_element(fam.alg, element_path);
    report.inputs = {{"family", family_path}, {"element", element_path}};
    MultiplierOptions opts;
    opts.seed = g.seed;
    const auto iv = multiplier_bound(a, fam, opts);
    report.results = {{"lo", iv.lo}, {"hi", iv.hi}, {"width", iv.width()}};
    report.check("interval ordered", iv.lo - iv.hi, 1e-8, iv.lo <= iv.hi + 1e-8);
  });
  smult->add_option("--family", family_path)->required();
  smult->add_option("--element", element_path)->required();
  auto* stail = leaf(statial, "tail", "Uniform multiplier bound along a sequence", [&] {
    const auto j = io::read_file(seq_path);
    report.inputs = {{"seq", seq_path}, {"K", K}};
    std::vector<StatialTerm> seq;
    for (const auto& term : j.at("terms")) {
      const auto fam = io::to_family(term.at("family"));
      seq.push_back({io::to_element(fam.alg, term.at("a")), fam});
    }
    MultiplierOptions opts;
    opts.seed = g.seed;
    const auto r = statial_sequence_tail(seq, K, opts);
    json iv = json::array();
    for (const auto& i : r.intervals) iv.push_back({{"lo", i.lo}, {"hi", i.hi}});
    report.results = {{"intervals", iv}, {"tail_fraction", r.tail_fraction}};
    report.check("uniformly bounded tail", 1.0 - r.tail_fraction, 0.0, r.tail_fraction >= 1.0);
  });
  stail->add_option("--seq", seq_path)->required();
  stail->add_option("--K", K)->required();

  // seq
  CLI::App* seqcmd = app.add_subcommand("seq", "Sequences of vectors");
  seqcmd->require_subcommand(1);
  auto* uni = leaf(seqcmd, "uniformize", "Uniformly K-bounded replacement sequence", [&] {
    const auto c = io::to_correspondence(io::read_file(corr_path));
    const auto s = io::to_sequence(io::read_file(seq_path));
    report.inputs = {{"corr", corr_path}, {"seq", seq_path}, {"K", K}};
    const auto r = uniformize_sequence(c, s, K);
    double worst = 0.0;
    for (const auto& cert : r.certificates) worst = std::max(worst, cert.bound());
    report.results = {{"terms", vector_list(r.terms)}, {"distances", r.distances},
                      {"max_bound", worst}, {"stage_bound", r.stage_bound},
                      {"composite_bound", r.composite_bound},
                      {"rounds_left", r.rounds_left}, {"rounds_right", r.rounds_right}};
    report.check("uniformly K-bounded", worst - K, 1e-8, worst <= K + 1e-8);
    report.check("last term near the limit", r.distances.back(), g.tol,
                 r.distances.back() <= g.tol);
  });
  uni->add_option("--corr", corr_path)->required();
  uni->add_option("--seq", seq_path)->required();
  uni->add_option("--K", K)->required();
  auto* connes = leaf(seqcmd, "connes", "Tail of the cut-off 2-norms of tracial terms", [&] {
    const auto j = io::read_file(seq_path);
    report.inputs = {{"seq", seq_path}, {"K", K}};
    std::vector<TracialTerm> terms;
    for (const auto& term : j.at("terms")) {
      const auto alg = io::to_algebra(term.at("algebra"));
      terms.push_back({alg, io::to_element(alg, term.at("x"))});
    }
    const auto p = connes_tail(terms, K);
    report.results = {{"profile", profile(p)}};
    report.check("tail vanishes", p.tail_sup, g.tol, p.tail_sup <= g.tol);
  });
  connes->add_option("--seq", seq_path)->required();
  connes->add_option("--K", K)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "corrkit: input error: " << e.what() << "\n";
    return 2;
  } catch (const io::InputError& e) {
    std::cerr << "corrkit: input error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    report.results["solver_error"] = e.what();
    report.check("solver converged", e.achieved(), g.tol, false);
  } catch (const std::runtime_error& e) {
    std::cerr << "corrkit: input error: " << e.what() << "\n";
    return 2;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = report.finish(command, g, seconds).dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(g.out);
    if (!out) {
      std::cerr << "corrkit: cannot write " << g.out << "\n";
      return 2;
    }
    out << text;
  }
  return report.passed() ? 0 : 1;
}
