#include "mhls/reference.hpp"

#include <algorithm>
#include <cmath>

namespace mhls::reference {

std::vector<std::vector<std::size_t>> ancestor_table(const FiltrationTree& tree) {
  const int depth = tree.depth();
  const auto leaves = tree.level(depth);
  std::vector<std::vector<std::size_t>> table(static_cast<std::size_t>(depth) + 1,
                                              std::vector<std::size_t>(leaves.size()));
  for (std::size_t x = 0; x < leaves.size(); ++x) {
    const Atom* a = &leaves[x];
    while (true) {
      table[static_cast<std::size_t>(a->level)][x] = a->index;
      if (!a->parent) break;
      a = &tree.atom(*a->parent);
    }
  }
  return table;
}

std::vector<double> leaf_values(const SimpleFunction& f) {
  const auto& tree = *f.tree();
  const auto table = ancestor_table(tree);
  const auto& anc = table[static_cast<std::size_t>(f.level())];
  std::vector<double> out(anc.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = f[anc[x]];
  return out;
}

std::vector<double> conditional_on_leaves(const FiltrationTree& tree,
                                          const std::vector<std::vector<std::size_t>>& ancestors,
                                          const std::vector<double>& h, int n) {
  const auto leaf_p = tree.probabilities(tree.depth());
  const auto atom_p = tree.probabilities(n);
  std::vector<double> per_atom(atom_p.size());
  for (std::size_t w = 0; w < per_atom.size(); ++w) {
    const auto [lo, hi] = tree.leaf_range(n, w);
    double sum = 0.0;
    for (std::size_t x = lo; x < hi; ++x) sum += leaf_p[x] * h[x];
    per_atom[w] = sum / atom_p[w];
  }
  const auto& anc = ancestors[static_cast<std::size_t>(n)];
  std::vector<double> out(h.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = per_atom[anc[x]];
  return out;
}

namespace {

double forward_coefficient(const FiltrationTree& tree,
                           const std::vector<std::vector<std::size_t>>& anc, OperatorKind kind,
                           int n, std::size_t x, double alpha) {
  const auto k = static_cast<std::size_t>(n);
  switch (kind) {
    case OperatorKind::NakaiSadasue:
      return std::pow(tree.atom(n - 1, anc[k - 1][x]).probability, alpha);
    case OperatorKind::Tilde: {
      const Atom& parent = tree.atom(n - 1, anc[k - 1][x]);
      double smallest = 1.0;
      for (AtomId c : parent.children()) smallest = std::min(smallest, tree.atom(c).probability);
      return std::pow(smallest, alpha);
    }
    case OperatorKind::Atomic:
      return std::pow(tree.atom(n, anc[k][x]).probability, alpha);
    case OperatorKind::AtomicAdjoint:
      break;
  }
  return 0.0;
}

}  // namespace

std::vector<double> apply(OperatorKind kind, const SimpleFunction& f, double alpha) {
  check_alpha(alpha);
  const auto& tree = *f.tree();
  const int depth = tree.depth();
  const auto anc = ancestor_table(tree);
  const auto g = leaf_values(f);
  const std::size_t leaves = g.size();
  std::vector<double> out(leaves, 0.0);

  if (kind == OperatorKind::AtomicAdjoint) {
    for (int n = 1; n <= depth; ++n) {
      const auto gn = conditional_on_leaves(tree, anc, g, std::min(n, f.level()));
      std::vector<double> h(leaves);
      for (std::size_t x = 0; x < leaves; ++x) {
        h[x] = std::pow(tree.atom(n, anc[static_cast<std::size_t>(n)][x]).probability, alpha) * gn[x];
      }
      const auto coarse = conditional_on_leaves(tree, anc, h, n - 1);
      for (std::size_t x = 0; x < leaves; ++x) out[x] += h[x] - coarse[x];
    }
    return out;
  }

  std::vector<double> prev = conditional_on_leaves(tree, anc, g, 0);
  for (int n = 1; n <= f.level(); ++n) {
    const auto current = conditional_on_leaves(tree, anc, g, n);
    for (std::size_t x = 0; x < leaves; ++x) {
      out[x] += forward_coefficient(tree, anc, kind, n, x, alpha) * (current[x] - prev[x]);
    }
    prev = current;
  }
  return out;
}

}  // namespace mhls::reference
