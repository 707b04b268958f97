#include "mhls/lab/search.hpp"

#include <algorithm>
#include <cmath>

#include "mhls/lorentz.hpp"
#include "mhls/rng.hpp"

namespace mhls::lab {

namespace {

struct Shape {
  std::vector<Shape> children;
  std::vector<double> logits;
};

Shape grow(Rng& rng, int remaining, bool is_root, int max_children) {
  Shape s;
  if (remaining == 0 || (!is_root && rng.uniform() < 0.25)) return s;
  const auto k = static_cast<std::size_t>(rng.integer(2, max_children));
  for (std::size_t i = 0; i < k; ++i) {
    s.children.push_back(grow(rng, remaining - 1, false, max_children));
    s.logits.push_back(rng.normal());
  }
  return s;
}

NodeSpec to_nodes(const Shape& s, double p, double floor) {
  NodeSpec node{p, {}};
  if (s.children.empty()) return node;
  const auto k = static_cast<double>(s.children.size());
  const double lift = std::min(floor, 1.0 / k);
  const double top = *std::max_element(s.logits.begin(), s.logits.end());
  double total = 0.0;
  std::vector<double> w(s.logits.size());
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] = std::exp(s.logits[i] - top);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double fraction = lift + (1.0 - k * lift) * (w[i] / total);
    node.children.push_back(to_nodes(s.children[i], p * fraction, floor));
  }
  // Absorb rounding so the children sum to the parent.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < node.children.size(); ++i) sum += node.children[i].p;
  node.children.back().p = p - sum;
  return node;
}

void perturb(Shape& s, Rng& rng, double sigma) {
  for (auto& l : s.logits) l += sigma * rng.normal();
  for (auto& c : s.children) perturb(c, rng, sigma);
}

TreePtr realize(const Shape& s, double floor) {
  NodeSpec root = to_nodes(s, 1.0, floor);
  return build_tree(tree_spec::Explicit{std::move(root)});
}

}  // namespace

double search_objective(OperatorKind kind, const SimpleFunction& f, const Exponents& e) {
  const double denom = lp_norm(f, e.p);
  if (denom == 0.0) return 0.0;
  return lp_norm(apply(kind, f, e.alpha), e.q) / denom;
}

ExperimentReport extremal_search(const SearchConfig& config) {
  if (config.budget < 1) throw Error(ErrorCode::InvalidSpec, "search budget must be >= 1");
  if (!(config.min_ratio > 0.0 && config.min_ratio <= 0.5)) {
    throw Error(ErrorCode::InvalidSpec, "min_ratio must lie in (0, 1/2]");
  }
  const auto& e = config.exponents;
  Rng rng(config.seed);
  Shape shape = grow(rng, static_cast<int>(rng.integer(1, std::max(1, config.max_depth))), true,
                     std::max(2, config.max_children));
  TreePtr tree = realize(shape, config.min_ratio);
  const std::size_t leaves = tree->level_size(tree->depth());
  std::vector<double> values(leaves);
  for (auto& v : values) v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 1.5);

  auto evaluate = [&](const TreePtr& t, const std::vector<double>& v) {
    return search_objective(config.kind, SimpleFunction(t, t->depth(), v), e);
  };

  std::size_t evals = 0;
  double best = evaluate(tree, values);
  ++evals;

  ExperimentReport report;
  report.experiment = "search-" + std::string(to_string(config.kind));
  report.seed = config.seed;
  report.alpha = e.alpha;
  report.p = e.p;
  report.q = e.q;
  report.rows.push_back({config.seed, evals, best, 0.0, true});

  double step = 0.5;
  while (evals < config.budget) {
    bool improved = false;
    for (std::size_t i = 0; i < leaves && evals < config.budget; ++i) {
      for (double factor : {1.0 + step, 1.0 - step}) {
        if (evals >= config.budget) break;
        const double old = values[i];
        values[i] = old * factor;
        const double r = evaluate(tree, values);
        ++evals;
        if (r > best) {
          best = r;
          improved = true;
          break;
        }
        values[i] = old;
      }
    }
    for (int move = 0; move < config.tree_moves_per_sweep && evals < config.budget; ++move) {
      Shape candidate = shape;
      perturb(candidate, rng, 0.5);
      TreePtr t = realize(candidate, config.min_ratio);
      const double r = evaluate(t, values);
      ++evals;
      if (r > best) {
        best = r;
        shape = std::move(candidate);
        tree = std::move(t);
        improved = true;
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-6) step = 0.5;
    }
    report.rows.push_back({config.seed, evals, best, 0.0, true});
  }

  report.trials = evals;
  report.worst_case = best;
  report.pass = true;
  report.metrics["best_ratio"] = best;
  report.metrics["evaluations"] = static_cast<double>(evals);
  report.metrics["min_ratio"] = config.min_ratio;
  report.witness = Witness{tree, {SimpleFunction(tree, tree->depth(), values)}, std::nullopt, e.alpha};
  return report;
}

}  // namespace mhls::lab
