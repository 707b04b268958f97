#include "mhls/lab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>

#include "mhls/lab/search.hpp"
#include "mhls/lorentz.hpp"
#include "mhls/rng.hpp"

namespace mhls::lab {

namespace {

double scaled_gap(double a, double b, double scale) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b), scale});
}

AtomId random_atom(const FiltrationTree& tree, Rng& rng, std::optional<int> level = {}) {
  std::vector<AtomId> candidates;
  for (const Atom& a : tree.atoms()) {
    if (level ? a.level == *level : !a.synthetic) candidates.push_back(a.id);
  }
  return candidates[static_cast<std::size_t>(
      rng.integer(0, static_cast<std::int64_t>(candidates.size()) - 1))];
}

SimpleFunction normalized_atomic(const TreePtr& tree, AtomId w) {
  return atomic_function(tree, w, 1.0 / tree->atom(w).probability);
}

Exponents exponents_or_default(double alpha, const std::optional<double>& p) {
  if (p) return Exponents::from_alpha_p(alpha, *p);
  return Exponents::from_alpha_p(alpha, 2.0 / (1.0 + alpha));
}

double resolve(const std::optional<double>& override_value, double fallback) {
  return override_value ? *override_value : fallback;
}

// Generators.

Witness gen_tree_two_functions(std::uint64_t seed, double alpha, const EnsembleConfig& cfg) {
  Rng rng(seed);
  auto tree = random_tree(rng.bits(), cfg.max_depth, cfg.max_children);
  const int d = tree->depth();
  const int lf = static_cast<int>(rng.integer(0, d));
  const int lg = static_cast<int>(rng.integer(0, d));
  auto f = random_function(tree, lf, rng.bits());
  auto g = random_function(tree, lg, rng.bits());
  return {tree, {f, g}, std::nullopt, alpha};
}

Witness gen_tree_function(std::uint64_t seed, double alpha, const EnsembleConfig& cfg) {
  Rng rng(seed);
  auto tree = random_tree(rng.bits(), cfg.max_depth, cfg.max_children);
  const int level = static_cast<int>(rng.integer(0, tree->depth()));
  return {tree, {random_function(tree, level, rng.bits())}, std::nullopt, alpha};
}

Witness gen_tree_terminal(std::uint64_t seed, double alpha, const EnsembleConfig& cfg) {
  Rng rng(seed);
  auto tree = random_tree(rng.bits(), std::min(cfg.max_depth, 8), cfg.max_children);
  return {tree, {random_function(tree, tree->depth(), rng.bits())}, std::nullopt, alpha};
}

Witness gen_chain(std::uint64_t seed, double alpha, const EnsembleConfig& cfg) {
  const auto c = random_chain(seed, alpha, std::max(1, cfg.max_depth));
  const auto ct = chain_tree(c);
  return {ct.tree, {normalized_atomic(ct.tree, ct.deepest)}, ct.deepest, alpha};
}

Witness gen_tree_atom(std::uint64_t seed, double alpha, const EnsembleConfig& cfg) {
  Rng rng(seed);
  auto tree = random_tree(rng.bits(), cfg.max_depth, cfg.max_children);
  const AtomId w = random_atom(*tree, rng);
  return {tree, {normalized_atomic(tree, w)}, w, alpha};
}

Witness gen_tree_shallow_atom(std::uint64_t seed, double alpha, const EnsembleConfig& cfg) {
  Rng rng(seed);
  auto tree = random_tree(rng.bits(), cfg.max_depth, cfg.max_children);
  const int level = static_cast<int>(rng.integer(0, tree->depth() - 1));
  const AtomId w = random_atom(*tree, rng, level);
  return {tree, {normalized_atomic(tree, w)}, w, alpha};
}

ChainInstance chain_of_witness(const Witness& w) {
  return {chain_through(*w.tree, w.atom.value()), w.alpha};
}

std::map<std::string, Experiment> make_registry() {
  std::map<std::string, Experiment> reg;
  auto add = [&](Experiment e) { reg.emplace(e.id, std::move(e)); };

  add({"duality", gen_tree_two_functions,
       [](const Witness& w, double tol) {
         return check_duality(w.functions.at(0), w.functions.at(1), w.alpha, tol);
       },
       1e-9, true});
  add({"chain", gen_chain,
       [](const Witness& w, double tol) { return check_chain_action(chain_of_witness(w), tol); },
       1e-12, true});
  add({"pointwise", gen_chain,
       [](const Witness& w, double tol) { return check_pointwise_bound(chain_of_witness(w), tol); },
       1e-12, true});
  add({"weak1", gen_tree_atom,
       [](const Witness& w, double tol) {
         return check_weak_type_atomic(w.tree, w.atom.value(), w.alpha, tol);
       },
       1e-9, true});
  add({"j1", gen_tree_atom,
       [](const Witness& w, double tol) { return check_j1(w.tree, w.atom.value(), w.alpha, tol); },
       1e-12, true});
  add({"j2", gen_tree_shallow_atom,
       [](const Witness& w, double tol) {
         return check_j2_uniform_bound(w.tree, w.atom.value(), w.alpha, tol);
       },
       1e-9, true});
  add({"transform", gen_tree_terminal,
       [](const Witness& w, double tol) { return check_transform(w.functions.at(0), w.alpha, tol); },
       1e-12, true});

  add({"weak1-general", gen_tree_function,
       [](const Witness& w, double) {
         const auto& f = w.functions.at(0);
         const double q = 1.0 / (1.0 - w.alpha);
         const double l1 = lp_norm(f, 1.0);
         const double weak = lorentz_norm(apply(OperatorKind::Atomic, f, w.alpha), q, kInfinity);
         return TrialOutcome{l1 > 0.0 ? weak / l1 : 0.0, weak_type_constant(w.alpha), true};
       },
       0.0, false});
  add({"weak2-direct", gen_tree_function,
       [](const Witness& w, double) {
         const auto& f = w.functions.at(0);
         const double denom = lorentz_norm(f, 1.0 / w.alpha, 1.0);
         const double sup = lp_norm(apply(OperatorKind::Atomic, f, w.alpha), kInfinity);
         return TrialOutcome{denom > 0.0 ? sup / denom : 0.0, 0.0, true};
       },
       0.0, false});
  add({"duality-sanity", gen_tree_two_functions,
       [](const Witness& w, double) {
         const auto& f = w.functions.at(0);
         const auto& g = w.functions.at(1);
         const double q = 1.0 / (1.0 - w.alpha);
         const double q_dual = q / (q - 1.0);
         const double denom = lorentz_norm(f, q, kInfinity) * lorentz_norm(g, q_dual, 1.0);
         const double ratio = denom > 0.0 ? std::abs(pairing(f, g)) / denom : 0.0;
         return TrialOutcome{ratio, 4.0, true};
       },
       0.0, false});
  add({"maximal", gen_tree_terminal,
       [](const Witness& w, double) {
         // Partial sums of I^A need not form a martingale; report sup_k |S_k| in L_q.
         const auto& f = w.functions.at(0);
         const double alpha = w.alpha;
         const auto e = exponents_or_default(alpha, std::nullopt);
         const auto sums = truncated_transform(MartingaleSequence::from_terminal(f), alpha,
                                               OperatorKind::Atomic, f.level());
         std::vector<double> sup{0.0};
         const auto& tree = *f.tree();
         for (int n = 1; n <= f.level(); ++n) {
           const auto parents = tree.parents(n);
           const auto s = sums.sums[static_cast<std::size_t>(n)].values();
           std::vector<double> next(s.size());
           for (std::size_t v = 0; v < s.size(); ++v) next[v] = std::max(sup[parents[v]], std::abs(s[v]));
           sup = std::move(next);
         }
         const SimpleFunction star(f.tree(), f.level(), std::move(sup));
         const double lp = lp_norm(f, e.p);
         return TrialOutcome{lp > 0.0 ? lp_norm(star, e.q) / lp : 0.0, 0.0, true};
       },
       0.0, false});
  return reg;
}

const std::map<std::string, Experiment>& registry() {
  static const auto reg = make_registry();
  return reg;
}

}  // namespace

const Experiment& experiment(const std::string& id) {
  const auto& reg = registry();
  const auto it = reg.find(id);
  if (it == reg.end()) throw Error(ErrorCode::InvalidSpec, "unknown experiment '" + id + "'");
  return it->second;
}

std::vector<std::string> experiment_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, e] : registry()) ids.push_back(id);
  return ids;
}

ExperimentReport run_ensemble(const Experiment& e, const EnsembleConfig& config) {
  if (config.alphas.empty()) throw Error(ErrorCode::InvalidSpec, "no alpha values");
  for (double a : config.alphas) check_alpha(a);
  const double tol = resolve(config.tolerance, e.default_tolerance);
  const std::size_t n_alpha = config.alphas.size();
  const std::size_t total = config.trials * n_alpha;

  std::vector<TrialRow> rows(total);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto t = static_cast<std::size_t>(i);
    const std::uint64_t seed = derive_seed(config.seed, t / n_alpha);
    const double alpha = config.alphas[t % n_alpha];
    try {
      const auto instance = e.generate(seed, alpha, config);
      const auto outcome = e.evaluate(instance, tol);
      rows[t] = {seed, t, outcome.ratio, outcome.bound, outcome.pass};
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentReport report;
  report.experiment = e.id;
  report.seed = config.seed;
  report.alpha = config.alphas.front();
  report.p = config.p;
  report.trials = total;
  report.tolerance = tol;
  report.rows = std::move(rows);

  std::size_t failures = 0;
  std::optional<std::size_t> worst;
  double worst_score = -std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    failures += row.pass ? 0 : 1;
    const double score = row.bound > 0.0 ? row.ratio / row.bound : row.ratio;
    if (score > worst_score) {
      worst_score = score;
      worst = row.trial;
    }
  }
  report.pass = !e.hard || failures == 0;
  report.metrics["failures"] = static_cast<double>(failures);
  if (worst) {
    const auto& row = report.rows[*worst];
    report.worst_case = row.ratio;
    report.metrics["worst_over_bound"] = worst_score;
    const double alpha = config.alphas[*worst % n_alpha];
    report.alpha = alpha;
    report.witness = e.generate(row.seed, alpha, config);
  }
  return report;
}

ExperimentReport run_ensemble(const std::string& id, const EnsembleConfig& config) {
  return run_ensemble(experiment(id), config);
}

double reevaluate_witness(const ExperimentReport& report) {
  if (!report.witness) throw Error(ErrorCode::InvalidSpec, "report carries no witness");
  if (report.experiment.starts_with("search-")) {
    if (!report.p || !report.q) throw Error(ErrorCode::InvalidSpec, "search report without p, q");
    const auto kind = parse_operator_kind(report.experiment.substr(7));
    return search_objective(kind, report.witness->functions.at(0),
                            Exponents::checked(report.alpha, *report.p, *report.q));
  }
  return experiment(report.experiment).evaluate(*report.witness, report.tolerance).ratio;
}

// ---------------------------------------------------------------------------

DualityPairings duality_pairings(const SimpleFunction& f, const SimpleFunction& g, double alpha) {
  if (f.tree() != g.tree()) throw Error(ErrorCode::TreeMismatch, "f and g live on different trees");
  return {pairing(apply(OperatorKind::Atomic, f, alpha), g),
          pairing(f, apply_atomic_adjoint(g, alpha))};
}

TrialOutcome check_duality(const SimpleFunction& f, const SimpleFunction& g, double alpha,
                           double tolerance) {
  const auto pair = duality_pairings(f, g, alpha);
  const double scale = std::max(std::abs(pair.forward), std::abs(pair.adjoint));
  const double gap = std::abs(pair.forward - pair.adjoint);
  // Relative agreement for pairings of size >= 1, absolute 1e-12 below.
  const double threshold = scale < 1.0 ? 1e-12 : tolerance;
  const double ratio = gap / std::max(1.0, scale);
  return {ratio, threshold, ratio <= threshold};
}

TrialOutcome check_chain_action(const ChainInstance& c, double tolerance) {
  const auto closed = chain_action(c);
  const auto ct = chain_tree(c);
  const auto out = apply_atomic(MartingaleSequence::from_terminal(normalized_atomic(ct.tree, ct.deepest)),
                                c.alpha);
  const auto leaves = broadcast(out, ct.tree->depth());
  const auto shell = shell_of_leaves(*ct.tree, ct.deepest);
  double worst = 0.0;
  for (std::size_t x = 0; x < shell.size(); ++x) {
    const auto s = static_cast<std::size_t>(shell[x]);
    worst = std::max(worst, scaled_gap(leaves[x], closed[s], std::pow(c.r[s], c.alpha - 1.0)));
  }
  return {worst, tolerance, worst <= tolerance};
}

TrialOutcome check_pointwise_bound(const ChainInstance& c, double slack) {
  const auto bounds = pointwise_bounds(c);
  const auto ct = chain_tree(c);
  const auto out = apply_atomic(MartingaleSequence::from_terminal(normalized_atomic(ct.tree, ct.deepest)),
                                c.alpha);
  const auto leaves = broadcast(out, ct.tree->depth());
  const auto shell = shell_of_leaves(*ct.tree, ct.deepest);
  double worst = 0.0;
  bool pass = true;
  for (std::size_t x = 0; x < shell.size(); ++x) {
    const double b = bounds[static_cast<std::size_t>(shell[x])];
    const double v = std::abs(leaves[x]);
    worst = std::max(worst, v / b);
    pass = pass && v <= b + slack * std::max(1.0, b);
  }
  return {worst, 1.0, pass};
}

double weak_type_constant(double alpha) {
  check_alpha(alpha);
  return (2.0 - alpha) / (1.0 - alpha);
}

TrialOutcome check_weak_type_atomic(const TreePtr& tree, AtomId w, double alpha, double slack) {
  const double q = 1.0 / (1.0 - check_alpha(alpha));
  const auto f = normalized_atomic(tree, w);
  const double weak = lorentz_norm(apply(OperatorKind::Atomic, f, alpha), q, kInfinity);
  const double bound = weak_type_constant(alpha);
  return {weak, bound, weak <= bound + slack};
}

TrialOutcome check_j1(const TreePtr& tree, AtomId w, double alpha, double tolerance) {
  const ChainInstance c{chain_through(*tree, w), alpha};
  const auto closed = chain_j1(c);
  const auto bounds = j1_bounds(c);
  const int level = tree->atom(w).level;
  const auto split = split_adjoint(normalized_atomic(tree, w), alpha, level);
  const auto shell = shell_of_leaves(*tree, w);
  double worst = 0.0;
  bool within = true;
  for (std::size_t x = 0; x < shell.size(); ++x) {
    const auto s = static_cast<std::size_t>(shell[x]);
    const double v = split.near[x];
    worst = std::max(worst, scaled_gap(v, closed[s], std::pow(c.r[s], alpha - 1.0)));
    within = within && std::abs(v) <= bounds[s] + tolerance * std::max(1.0, bounds[s]);
  }
  return {worst, tolerance, within && worst <= tolerance};
}

TrialOutcome check_j2_uniform_bound(const TreePtr& tree, AtomId w, double alpha, double slack) {
  check_alpha(alpha);
  const Atom& atom = tree->atom(w);
  const double scale = std::pow(atom.probability, alpha - 1.0);
  const double lower = -scale;
  const double upper = scale / alpha;
  const auto split = split_adjoint(normalized_atomic(tree, w), alpha, atom.level);
  const auto [lo, hi] = tree->leaf_range(atom.level, atom.index);
  double top = 0.0;
  double bottom = 0.0;
  bool outside_zero = true;
  for (std::size_t x = 0; x < split.far.size(); ++x) {
    const double v = split.far[x];
    if (x >= lo && x < hi) {
      top = std::max(top, v);
      bottom = std::min(bottom, v);
    } else {
      outside_zero = outside_zero && v == 0.0;
    }
  }
  const double eps = slack * std::max(1.0, scale);
  const bool pass = outside_zero && bottom >= lower - eps && top <= upper + eps;
  return {std::max(top * alpha, -bottom) / scale, 1.0, pass};
}

TrialOutcome check_transform(const SimpleFunction& f, double alpha, double tolerance) {
  const auto m = MartingaleSequence::from_terminal(f);
  double worst = 0.0;
  for (auto kind : {OperatorKind::NakaiSadasue, OperatorKind::Tilde}) {
    const auto sums = truncated_transform(m, alpha, kind, m.horizon());
    double size = 1.0;
    for (const auto& s : sums.sums) size = std::max(size, lp_norm(s, kInfinity));
    worst = std::max(worst, martingale_defect(sums) / size);
  }
  return {worst, tolerance, worst <= tolerance};
}

double atomic_truncation_defect(double alpha) {
  NodeSpec root{1.0,
                {NodeSpec{0.9, {NodeSpec{0.6, {}}, NodeSpec{0.3, {}}}},
                 NodeSpec{0.1, {NodeSpec{0.05, {}}, NodeSpec{0.05, {}}}}}};
  auto tree = build_tree(tree_spec::Explicit{root});
  const SimpleFunction f(tree, 2, {1.0, -2.0, 1.0, -1.0});
  const auto sums = truncated_transform(MartingaleSequence::from_terminal(f), alpha,
                                        OperatorKind::Atomic, 2);
  return martingale_defect(sums);
}

double uniform_proportionality_gap(int m, int depth, double alpha, std::uint64_t seed) {
  auto tree = build_tree(tree_spec::Uniform{m, depth});
  const auto f = random_function(tree, depth, seed);
  const auto mart = MartingaleSequence::from_terminal(f);
  const auto i_alpha = apply_i_alpha(mart, alpha);
  const auto atomic = apply_atomic(mart, alpha);
  const auto tilde = apply_tilde(mart, alpha);
  const double factor = std::pow(static_cast<double>(m), alpha);
  const double scale = std::max(lp_norm(i_alpha, kInfinity), std::numeric_limits<double>::min());
  double gap = 0.0;
  for (std::size_t x = 0; x < i_alpha.size(); ++x) {
    gap = std::max({gap, std::abs(i_alpha[x] - factor * atomic[x]),
                    std::abs(i_alpha[x] - factor * tilde[x])});
  }
  return gap / scale;
}

ChainInstance random_chain(std::uint64_t seed, double alpha, int max_horizon) {
  Rng rng(seed);
  const auto horizon = static_cast<std::size_t>(rng.integer(1, max_horizon));
  ChainInstance c{{1.0}, alpha};
  for (std::size_t n = 1; n <= horizon; ++n) c.r.push_back(c.r.back() * rng.uniform(0.05, 0.95));
  return c;
}

TreePtr random_tree(std::uint64_t seed, int max_depth, int max_children) {
  Rng rng(seed);
  tree_spec::Random spec;
  spec.depth = static_cast<int>(rng.integer(1, std::max(1, max_depth)));
  spec.max_children = static_cast<int>(rng.integer(2, std::max(2, max_children)));
  spec.min_ratio = rng.uniform(0.01, 0.5);
  spec.stop_probability = 0.3;
  spec.seed = rng.bits();
  return build_tree(spec);
}

SimpleFunction random_function(const TreePtr& tree, int level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(tree->level_size(level));
  for (auto& v : values) v = rng.uniform(-1.0, 1.0);
  return SimpleFunction(tree, level, std::move(values));
}

}  // namespace mhls::lab
