#include <cmath>

#include "doctest.h"
#include "mhls/lab/chain.hpp"
#include "mhls/lab/checks.hpp"
#include "mhls/lab/probes.hpp"
#include "mhls/lab/report.hpp"
#include "mhls/lab/search.hpp"
#include "mhls/lorentz.hpp"
#include "mhls/operators.hpp"

using namespace mhls;
using namespace mhls::lab;

TEST_CASE("chain action on the dyadic chain") {
  const ChainInstance c{{1.0, 0.5, 0.25, 0.125}, 0.5};
  const auto v = chain_action(c);
  REQUIRE(v.size() == 4);
  const std::vector<double> expected{-0.70711, -0.29289, 0.29289, 3.12132};
  for (std::size_t i = 0; i < 4; ++i) CHECK(v[i] == doctest::Approx(expected[i]).epsilon(1e-5));
  CHECK(check_chain_action(c).pass);

  const auto trivial = chain_action(ChainInstance{{1.0}, 0.5});
  CHECK(trivial == std::vector<double>{0.0});
  CHECK_THROWS_AS(chain_action(ChainInstance{{1.0, 0.5, 0.5}, 0.5}), Error);
}

TEST_CASE("pointwise and J1 bounds on dyadic chains") {
  for (int depth = 1; depth <= 30; ++depth) {
    ChainInstance c{{1.0}, 0.5};
    for (int n = 1; n <= depth; ++n) c.r.push_back(std::ldexp(1.0, -n));
    CHECK(check_pointwise_bound(c).pass);
    CHECK(check_chain_action(c).pass);
    const auto [tree, w] = chain_tree(c);
    CHECK(check_j1(tree, w, 0.5).pass);
  }
}

TEST_CASE("weak-type constant on the depth-10 dyadic chain") {
  CHECK(weak_type_constant(0.5) == doctest::Approx(3.0));
  ChainInstance c{{1.0}, 0.5};
  for (int n = 1; n <= 10; ++n) c.r.push_back(std::ldexp(1.0, -n));
  const auto [tree, w] = chain_tree(c);
  const auto out = check_weak_type_atomic(tree, w, 0.5);
  CHECK(out.pass);
  CHECK(out.ratio <= 3.0);
  // F = chi_Omega has I^A F = 0.
  CHECK(check_weak_type_atomic(tree, 0, 0.5).ratio == 0.0);
}

TEST_CASE("J2 bounds on the dyadic chain") {
  ChainInstance c{{1.0, 0.5, 0.25, 0.125}, 0.5};
  const auto [tree, w] = chain_tree(c);
  const auto out = check_j2_uniform_bound(tree, w, 0.5);
  CHECK(out.pass);
  // Bounds on w_3: [-r^{-1/2}, 2 r^{-1/2}] = [-2.82843, 5.65685].
  CHECK(std::pow(0.125, -0.5) == doctest::Approx(2.82843).epsilon(1e-5));
  auto dyadic = build_tree(tree_spec::Dyadic{4});
  for (AtomId id = 0; id < dyadic->size(); ++id) CHECK(check_j2_uniform_bound(dyadic, id, 0.5).pass);
}

TEST_CASE("duality") {
  auto tree = random_tree(5, 6, 3);
  const auto f = SimpleFunction::constant(tree, tree->depth(), 2.0);
  const auto g = random_function(tree, 3 <= tree->depth() ? 3 : tree->depth(), 6);
  const auto pair = duality_pairings(f, g, 0.5);
  CHECK(std::abs(pair.forward) < 1e-14);
  CHECK(std::abs(pair.adjoint) < 1e-12);
  CHECK(check_duality(f, g, 0.5).pass);

  // f = g = normalized chain function: E[(I^A F) F] from the chain values.
  ChainInstance c{{1.0, 0.6, 0.3, 0.05}, 0.4};
  const auto [ct, w] = chain_tree(c);
  const auto F = atomic_function(ct, w, 1.0 / 0.05);
  const auto both = duality_pairings(F, F, 0.4);
  // F is 1/r_N on w_N, so the pairing is (I^A F)(w_N).
  const double closed = chain_action(c).back();
  CHECK(both.forward == doctest::Approx(closed).epsilon(1e-12));
  CHECK(both.adjoint == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("martingale-transform property") {
  CHECK(atomic_truncation_defect(0.5) > 1e-3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto tree = random_tree(seed, 6, 3);
    CHECK(check_transform(random_function(tree, tree->depth(), seed + 100), 0.5).pass);
  }
}

TEST_CASE("uniform proportionality") {
  for (int m : {2, 3, 5}) CHECK(uniform_proportionality_gap(m, 4, 0.5, 1) < 1e-12);
}

TEST_CASE("sharpness ratio") {
  const auto e = probe_exponents(0.5);
  CHECK(1.0 / e.p - 1.0 / e.q == doctest::Approx(0.5).epsilon(1e-12));
  for (double s : {0.5, 0.25, 1e-3}) CHECK(sharpness_ratio(s, e) == doctest::Approx(sharpness_ratio_generic(s, e)).epsilon(1e-10));
  const auto e2 = Exponents::from_alpha_p(0.5, 4.0 / 3.0);
  for (double s : {0.25, 0.01, 1e-5}) {
    const double r = sharpness_ratio(s, e2);
    CHECK(r >= 0.5);
    CHECK(r <= 2.0);
  }
  CHECK(sharpness_report(e, dyadic_skews(1, 20)).pass);
}

TEST_CASE("unboundedness probe") {
  const auto e = probe_exponents(0.5);
  const auto sweep = unboundedness_sweep(e, dyadic_skews(2, 20));
  CHECK(sweep.slope == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(unboundedness_sweep(e, dyadic_skews(2, 20), OperatorKind::Atomic).max_over_min < 4.0);
  CHECK(loglog_slope({1, 2, 4}, {1, 0.5, 0.25}) == doctest::Approx(-1.0));
}

TEST_CASE("ensembles are reproducible and ordered") {
  EnsembleConfig cfg;
  cfg.trials = 40;
  cfg.max_depth = 6;
  cfg.alphas = {0.25, 0.75};
  const auto a = run_ensemble("duality", cfg);
  const auto b = run_ensemble("duality", cfg);
  CHECK(a.rows.size() == 80);
  CHECK(a.pass);
  CHECK(report_to_csv(a) == report_to_csv(b));
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].trial == i);
  REQUIRE(a.witness.has_value());
  CHECK(reevaluate_witness(a) == doctest::Approx(a.worst_case).epsilon(1e-9));
  for (const auto& id : experiment_ids()) {
    EnsembleConfig small;
    small.trials = 5;
    small.max_depth = 5;
    small.p = 1.5;
    const auto r = run_ensemble(id, small);
    CHECK(r.rows.size() == 5);
    if (experiment(id).hard) CHECK_MESSAGE(r.pass, id);
  }
  CHECK_THROWS_AS(experiment("nonsense"), Error);
}

TEST_CASE("report serialization") {
  ExperimentReport empty;
  empty.experiment = "duality";
  CHECK(report_to_csv(empty) == "experiment,seed,trial,ratio,bound,pass\n");
  empty.rows.push_back({42, 0, 0.5, 1.0, true});
  CHECK(report_to_csv(empty) == "experiment,seed,trial,ratio,bound,pass\nduality,42,0,0.5,1,1\n");

  EnsembleConfig cfg;
  cfg.trials = 6;
  cfg.max_depth = 5;
  const auto r = run_ensemble("j2", cfg);
  const auto text = emit_report(r, ReportFormat::Json);
  const auto back = report_from_json(nlohmann::json::parse(text));
  CHECK(emit_report(back, ReportFormat::Json) == text);
  CHECK(back.rows == r.rows);
  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_report_format("xml"), Error);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("extremal search") {
  SearchConfig cfg;
  cfg.budget = 600;
  cfg.max_depth = 4;
  const auto r = extremal_search(cfg);
  CHECK(r.pass);
  CHECK(r.worst_case > 0.0);
  REQUIRE(r.witness.has_value());
  const auto& w = *r.witness;
  CHECK(search_objective(cfg.kind, w.functions.front(), cfg.exponents) == doctest::Approx(r.worst_case).epsilon(1e-9));
  CHECK(reevaluate_witness(r) == doctest::Approx(r.worst_case).epsilon(1e-9));
  const auto again = extremal_search(cfg);
  CHECK(again.worst_case == r.worst_case);
}
