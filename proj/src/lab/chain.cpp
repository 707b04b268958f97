#include "mhls/lab/chain.hpp"

#include <cmath>
#include <string>

#include "mhls/operators.hpp"

namespace mhls::lab {

void ChainInstance::validate() const {
  check_alpha(alpha);
  if (r.empty() || r.front() != 1.0) throw Error(ErrorCode::InvalidSpec, "chain must start at 1");
  for (std::size_t n = 1; n < r.size(); ++n) {
    if (!(r[n] < r[n - 1]) || !(r[n] > 0.0)) {
      throw Error(ErrorCode::NonDecreasingChain, "chain is not strictly decreasing at " +
                                                     std::to_string(n));
    }
  }
}

std::vector<double> chain_through(const FiltrationTree& tree, AtomId w) {
  const Atom* a = &tree.atom(w);
  std::vector<double> r(static_cast<std::size_t>(a->level) + 1);
  while (true) {
    r[static_cast<std::size_t>(a->level)] = a->probability;
    if (!a->parent) break;
    a = &tree.atom(*a->parent);
  }
  r.front() = 1.0;
  return r;
}

std::vector<int> shell_of_leaves(const FiltrationTree& tree, AtomId w) {
  const Atom& target = tree.atom(w);
  std::vector<int> shell(tree.level_size(tree.depth()), 0);
  // Walk w's ancestors; each one's leaf range is inside the previous one.
  const Atom* a = &target;
  std::vector<const Atom*> path;
  while (true) {
    path.push_back(a);
    if (!a->parent) break;
    a = &tree.atom(*a->parent);
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const auto [lo, hi] = tree.leaf_range((*it)->level, (*it)->index);
    for (std::size_t x = lo; x < hi; ++x) shell[x] = (*it)->level;
  }
  return shell;
}

std::vector<double> chain_action(const ChainInstance& c) {
  c.validate();
  const int horizon = c.horizon();
  const auto& r = c.r;
  const double a = c.alpha;
  std::vector<double> out(static_cast<std::size_t>(horizon) + 1, 0.0);
  if (horizon == 0) return out;
  double partial = 0.0;  // sum_{k <= n} r_k^a (1/r_k - 1/r_{k-1})
  for (int n = 0; n < horizon; ++n) {
    const auto k = static_cast<std::size_t>(n);
    if (n > 0) partial += std::pow(r[k], a) * (1.0 / r[k] - 1.0 / r[k - 1]);
    const double sibling = r[k] - r[k + 1];  // b_{n+1} on w_n \ w_{n+1}
    out[k] = partial - std::pow(sibling, a) / r[k];
  }
  const auto last = static_cast<std::size_t>(horizon);
  partial += std::pow(r[last], a) * (1.0 / r[last] - 1.0 / r[last - 1]);
  out[last] = partial;
  return out;
}

std::vector<double> chain_j1(const ChainInstance& c) {
  c.validate();
  const int horizon = c.horizon();
  const double a = c.alpha;
  std::vector<double> out(static_cast<std::size_t>(horizon) + 1, 0.0);
  if (horizon == 0) return out;
  auto power = [&](int k) { return k > horizon ? 0.0 : std::pow(c.r[static_cast<std::size_t>(k)], a); };
  double value = -power(1);
  out[0] = value;
  for (int n = 1; n <= horizon; ++n) {
    value += (power(n) - power(n + 1)) / c.r[static_cast<std::size_t>(n)];
    out[static_cast<std::size_t>(n)] = value;
  }
  return out;
}

std::vector<double> pointwise_bounds(const ChainInstance& c) {
  c.validate();
  std::vector<double> out(c.r.size());
  for (std::size_t n = 0; n < c.r.size(); ++n) {
    const double s = std::pow(c.r[n], c.alpha - 1.0);
    out[n] = (s - 1.0) / (1.0 - c.alpha) + s;
  }
  return out;
}

std::vector<double> j1_bounds(const ChainInstance& c) {
  c.validate();
  std::vector<double> out(c.r.size());
  for (std::size_t n = 0; n < c.r.size(); ++n) {
    const double s = std::pow(c.r[n], c.alpha - 1.0);
    out[n] = 1.0 + c.alpha * (s - 1.0) / (1.0 - c.alpha) + s;
  }
  return out;
}

ChainTree chain_tree(const ChainInstance& c) {
  c.validate();
  auto tree = build_tree(tree_spec::Chain{c.r});
  // w_{n+1} is the first child of w_n.
  AtomId w = 0;
  for (int n = 0; n < c.horizon(); ++n) w = tree->atom(w).first_child;
  return {tree, w};
}

}  // namespace mhls::lab
