#include "mhls/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhls/kernels.hpp"

namespace mhls {

SimpleFunction condition(const SimpleFunction& f, int n) {
  const auto& tree = *f.tree();
  if (n < 0 || n > tree.depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "cannot condition on level " + std::to_string(n));
  }
  if (n >= f.level()) return broadcast(f, n);
  std::vector<double> current(f.values().begin(), f.values().end());
  for (int k = f.level() - 1; k >= n; --k) {
    std::vector<double> next(tree.level_size(k));
    kernels::condition_one_level(tree, k, current, next);
    current = std::move(next);
  }
  return SimpleFunction(f.tree(), n, std::move(current));
}

SimpleFunction condition(const TreePtr& tree, const SimpleFunction& f, int n) {
  if (tree != f.tree() && !(tree && f.tree() && *tree == *f.tree())) {
    throw Error(ErrorCode::TreeMismatch, "function belongs to a different tree");
  }
  return condition(f, n);
}

MartingaleSequence MartingaleSequence::from_terminal(SimpleFunction terminal) {
  const int horizon = terminal.level();
  std::vector<SimpleFunction> stages;
  stages.reserve(static_cast<std::size_t>(horizon) + 1);
  stages.push_back(terminal);
  for (int n = horizon - 1; n >= 0; --n) stages.push_back(condition(stages.back(), n));
  std::reverse(stages.begin(), stages.end());
  return MartingaleSequence(std::move(terminal), std::move(stages));
}

std::vector<SimpleFunction> differences(const MartingaleSequence& m) {
  std::vector<SimpleFunction> out;
  out.reserve(static_cast<std::size_t>(m.horizon()));
  for (int n = 1; n <= m.horizon(); ++n) {
    out.push_back(m.stage(n) - broadcast(m.stage(n - 1), n));
  }
  return out;
}

SimpleFunction maximal_function(const MartingaleSequence& m) {
  const auto& tree = *m.tree();
  std::vector<double> current{std::abs(m.stage(0)[0])};
  for (int n = 1; n <= m.horizon(); ++n) {
    std::vector<double> next(tree.level_size(n));
    kernels::broadcast_one_level(tree, n, current, next);
    const auto fn = m.stage(n).values();
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(next[i], std::abs(fn[i]));
    current = std::move(next);
  }
  return SimpleFunction(m.tree(), m.horizon(), std::move(current));
}

SimpleFunction atomic_function(const TreePtr& tree, AtomId w, double scale) {
  const Atom& atom = tree->atom(w);
  std::vector<double> values(tree->level_size(atom.level), 0.0);
  values[atom.index] = scale;
  return SimpleFunction(tree, atom.level, std::move(values));
}

MartingaleSequence sharpness_martingale(const TreePtr& tree, AtomId w, AtomId v) {
  const Atom& outer = tree->atom(w);
  const Atom& inner = tree->atom(v);
  if (!inner.parent || *inner.parent != w) {
    throw Error(ErrorCode::InvalidSpec, "v must be a child of w");
  }
  const double gap = outer.probability - inner.probability;
  if (gap <= 1e-12 * outer.probability) {
    throw Error(ErrorCode::DegenerateSplit, "P(v) equals P(w)");
  }
  std::vector<double> values(tree->level_size(inner.level), 0.0);
  for (AtomId c : outer.children()) {
    values[tree->atom(c).index] = c == v ? 1.0 / inner.probability : -1.0 / gap;
  }
  return MartingaleSequence::from_terminal(SimpleFunction(tree, inner.level, std::move(values)));
}

}  // namespace mhls
