#include "mhls/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhls/rng.hpp"

namespace mhls {

namespace {

int max_depth(const NodeSpec& node) {
  int d = 0;
  for (const auto& child : node.children) d = std::max(d, 1 + max_depth(child));
  return d;
}

void validate_node(const NodeSpec& node, int level, ErrorCode on_invalid) {
  if (!std::isfinite(node.p) || node.p <= 0.0 || node.p > 1.0 + kSumTolerance) {
    throw Error(on_invalid, "atom probability " + std::to_string(node.p) + " at level " +
                                std::to_string(level) + " is outside (0, 1]");
  }
  if (node.p < kMinProbability) {
    throw Error(ErrorCode::ProbabilityUnderflow,
                "atom probability below 1e-300 at level " + std::to_string(level));
  }
  if (node.children.empty()) return;
  double sum = 0.0;
  for (const auto& child : node.children) {
    validate_node(child, level + 1, on_invalid);
    if (child.p > node.p + kSumTolerance) {
      throw Error(on_invalid, "child heavier than its parent at level " + std::to_string(level + 1));
    }
    sum += child.p;
  }
  if (std::abs(sum - node.p) > kSumTolerance) {
    throw Error(on_invalid, "children of an atom at level " + std::to_string(level) + " sum to " +
                                std::to_string(sum) + " instead of " + std::to_string(node.p));
  }
}

NodeSpec dyadic_like(int m, int depth, double p) {
  NodeSpec node{p, {}};
  if (depth > 0) {
    node.children.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) node.children.push_back(dyadic_like(m, depth - 1, p / m));
  }
  return node;
}

NodeSpec chain_nodes(const std::vector<double>& r) {
  if (r.empty()) throw Error(ErrorCode::InvalidSpec, "chain needs at least r_0 = 1");
  if (std::abs(r[0] - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::InvalidSpec, "chain must start at r_0 = 1");
  }
  for (std::size_t n = 1; n < r.size(); ++n) {
    if (!(r[n] < r[n - 1])) {
      throw Error(ErrorCode::NonDecreasingChain,
                  "r_" + std::to_string(n) + " is not below r_" + std::to_string(n - 1));
    }
    if (r[n] < kMinProbability) {
      throw Error(ErrorCode::ProbabilityUnderflow, "chain probability below 1e-300");
    }
  }
  NodeSpec root{1.0, {}};
  NodeSpec* cursor = &root;
  for (std::size_t n = 1; n < r.size(); ++n) {
    cursor->children.push_back(NodeSpec{r[n], {}});
    cursor->children.push_back(NodeSpec{r[n - 1] - r[n], {}});
    cursor = &cursor->children.front();
  }
  return root;
}

// Child fractions: normalized uniforms, redrawn while any falls below the floor.
std::vector<double> draw_fractions(Rng& rng, int k, double min_ratio) {
  std::vector<double> w(static_cast<std::size_t>(k));
  if (k * min_ratio >= 1.0 - 1e-12) {
    std::fill(w.begin(), w.end(), 1.0 / k);
    return w;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double total = 0.0;
    for (auto& x : w) {
      x = rng.uniform();
      total += x;
    }
    if (total <= 0.0) continue;
    bool ok = true;
    for (auto& x : w) {
      x /= total;
      ok = ok && x >= min_ratio;
    }
    if (ok) return w;
  }
  // Acceptance is tiny only when k * min_ratio is close to 1; mix towards the floor.
  double total = 0.0;
  for (auto& x : w) {
    x = rng.uniform();
    total += x;
  }
  for (auto& x : w) x = min_ratio + (1.0 - k * min_ratio) * (x / total);
  return w;
}

void grow_random(NodeSpec& node, Rng& rng, const tree_spec::Random& spec, int remaining,
                 bool is_root) {
  if (remaining == 0) return;
  if (!is_root && spec.stop_probability > 0.0 && rng.uniform() < spec.stop_probability) return;
  const int cap = std::max(2, std::min(spec.max_children,
                                       static_cast<int>(std::floor(1.0 / spec.min_ratio + 1e-9))));
  const int k = static_cast<int>(rng.integer(2, cap));
  const auto fractions = draw_fractions(rng, k, spec.min_ratio);
  node.children.reserve(fractions.size());
  for (double f : fractions) {
    const double p = node.p * f;
    if (p < kMinProbability) {
      throw Error(ErrorCode::ProbabilityUnderflow, "random tree atom below 1e-300");
    }
    node.children.push_back(NodeSpec{p, {}});
  }
  for (auto& child : node.children) grow_random(child, rng, spec, remaining - 1, false);
}

NodeSpec random_nodes(const tree_spec::Random& spec) {
  if (spec.depth < 0) throw Error(ErrorCode::InvalidSpec, "negative depth");
  if (!(spec.min_ratio > 0.0 && spec.min_ratio <= 0.5)) {
    throw Error(ErrorCode::InvalidSpec, "min_ratio must lie in (0, 1/2]");
  }
  if (spec.max_children < 2) throw Error(ErrorCode::InvalidSpec, "max_children must be >= 2");
  if (!(spec.stop_probability >= 0.0 && spec.stop_probability < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "stop_probability must lie in [0, 1)");
  }
  Rng rng(spec.seed);
  NodeSpec root{1.0, {}};
  grow_random(root, rng, spec, spec.depth, true);
  return root;
}

struct SpecToNodes {
  NodeSpec operator()(const tree_spec::Dyadic& s) const {
    if (s.depth < 0) throw Error(ErrorCode::InvalidSpec, "negative depth");
    return dyadic_like(2, s.depth, 1.0);
  }
  NodeSpec operator()(const tree_spec::Uniform& s) const {
    if (s.depth < 0) throw Error(ErrorCode::InvalidSpec, "negative depth");
    if (s.m < 1) throw Error(ErrorCode::InvalidSpec, "uniform split needs m >= 1");
    return dyadic_like(s.m, s.depth, 1.0);
  }
  NodeSpec operator()(const tree_spec::Chain& s) const { return chain_nodes(s.probabilities); }
  NodeSpec operator()(const tree_spec::Random& s) const { return random_nodes(s); }
  NodeSpec operator()(const tree_spec::Explicit& s) const { return s.root; }
};

}  // namespace

FiltrationTree FiltrationTree::from_nodes(const NodeSpec& root_in, ErrorCode on_invalid) {
  if (std::abs(root_in.p - 1.0) > kSumTolerance) {
    throw Error(on_invalid, "root atom must have probability 1");
  }
  NodeSpec root = root_in;
  root.p = 1.0;
  validate_node(root, 0, on_invalid);

  FiltrationTree tree;
  tree.depth_ = max_depth(root);
  const int depth = tree.depth_;

  // Level-by-level expansion; a null spec marks a synthetic continuation.
  struct Pending {
    const NodeSpec* spec;
    double p;
    bool synthetic;
    std::size_t parent_index;
  };
  std::vector<Pending> current{{&root, 1.0, false, 0}};
  tree.level_offset_.push_back(0);
  for (int n = 0; n <= depth; ++n) {
    std::vector<double> probs;
    std::vector<std::size_t> parents;
    probs.reserve(current.size());
    parents.reserve(current.size());
    const std::size_t base = tree.atoms_.size();
    for (std::size_t i = 0; i < current.size(); ++i) {
      Atom a;
      a.id = base + i;
      a.level = n;
      a.index = i;
      a.probability = current[i].p;
      if (n > 0) a.parent = tree.level_offset_[static_cast<std::size_t>(n - 1)] + current[i].parent_index;
      a.synthetic = current[i].synthetic;
      tree.atoms_.push_back(a);
      probs.push_back(a.probability);
      parents.push_back(current[i].parent_index);
    }
    tree.probabilities_.push_back(std::move(probs));
    tree.parents_.push_back(n == 0 ? std::vector<std::size_t>{} : std::move(parents));
    tree.level_offset_.push_back(tree.atoms_.size());

    if (n == depth) {
      tree.child_offsets_.emplace_back();
      break;
    }
    std::vector<Pending> next;
    std::vector<std::size_t> offsets{0};
    offsets.reserve(current.size() + 1);
    const std::size_t next_base = tree.atoms_.size();
    for (std::size_t i = 0; i < current.size(); ++i) {
      Atom& a = tree.atoms_[base + i];
      a.first_child = next_base + next.size();
      const NodeSpec* spec = current[i].spec;
      if (spec != nullptr && !spec->children.empty()) {
        for (const auto& child : spec->children) next.push_back({&child, child.p, false, i});
      } else {
        next.push_back({nullptr, current[i].p, true, i});
      }
      a.child_count = next_base + next.size() - a.first_child;
      offsets.push_back(next.size());
    }
    tree.child_offsets_.push_back(std::move(offsets));
    current = std::move(next);
  }

  // Leaf ranges, bottom-up.
  tree.leaf_begin_.resize(static_cast<std::size_t>(depth) + 1);
  {
    auto& last = tree.leaf_begin_[static_cast<std::size_t>(depth)];
    const std::size_t leaves = tree.level_size(depth);
    last.resize(leaves + 1);
    for (std::size_t i = 0; i <= leaves; ++i) last[i] = i;
  }
  for (int n = depth - 1; n >= 0; --n) {
    const auto& offsets = tree.child_offsets_[static_cast<std::size_t>(n)];
    const auto& below = tree.leaf_begin_[static_cast<std::size_t>(n + 1)];
    auto& here = tree.leaf_begin_[static_cast<std::size_t>(n)];
    here.resize(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) here[i] = below[offsets[i]];
  }
  return tree;
}

void FiltrationTree::check_level(int n) const {
  if (n < 0 || n > depth_) {
    throw Error(ErrorCode::LevelOutOfRange,
                "level " + std::to_string(n) + " outside [0, " + std::to_string(depth_) + "]");
  }
}

std::size_t FiltrationTree::level_size(int n) const {
  check_level(n);
  const auto k = static_cast<std::size_t>(n);
  return level_offset_[k + 1] - level_offset_[k];
}

const Atom& FiltrationTree::atom(AtomId id) const {
  if (id >= atoms_.size()) throw Error(ErrorCode::AtomNotFound, "atom id " + std::to_string(id));
  return atoms_[id];
}

const Atom& FiltrationTree::atom(int level, std::size_t index) const {
  if (index >= level_size(level)) {
    throw Error(ErrorCode::AtomNotFound, "atom index " + std::to_string(index) + " at level " +
                                             std::to_string(level));
  }
  return atoms_[level_offset_[static_cast<std::size_t>(level)] + index];
}

std::span<const Atom> FiltrationTree::level(int n) const {
  check_level(n);
  const auto k = static_cast<std::size_t>(n);
  return std::span<const Atom>(atoms_).subspan(level_offset_[k], level_offset_[k + 1] - level_offset_[k]);
}

std::span<const double> FiltrationTree::probabilities(int n) const {
  check_level(n);
  return probabilities_[static_cast<std::size_t>(n)];
}

std::span<const std::size_t> FiltrationTree::parents(int n) const {
  check_level(n);
  if (n == 0) throw Error(ErrorCode::LevelOutOfRange, "level 0 has no parents");
  return parents_[static_cast<std::size_t>(n)];
}

std::span<const std::size_t> FiltrationTree::child_offsets(int n) const {
  check_level(n);
  if (n == depth_) throw Error(ErrorCode::LevelOutOfRange, "deepest level has no children");
  return child_offsets_[static_cast<std::size_t>(n)];
}

std::pair<std::size_t, std::size_t> FiltrationTree::leaf_range(int n, std::size_t index) const {
  const auto& begins = leaf_begin_.at(static_cast<std::size_t>(n));
  if (index + 1 >= begins.size()) {
    throw Error(ErrorCode::AtomNotFound, "atom index " + std::to_string(index));
  }
  return {begins[index], begins[index + 1]};
}

NodeSpec FiltrationTree::to_nodes() const {
  // Rebuild bottom-up so each node owns its subtree.
  std::vector<NodeSpec> below;
  for (int n = depth_; n >= 0; --n) {
    const auto lvl = level(n);
    std::vector<NodeSpec> here(lvl.size());
    for (std::size_t i = 0; i < lvl.size(); ++i) {
      here[i].p = lvl[i].probability;
      for (AtomId c : lvl[i].children()) {
        const Atom& child = atoms_[c];
        if (!child.synthetic) here[i].children.push_back(std::move(below[child.index]));
      }
    }
    below = std::move(here);
  }
  NodeSpec root = std::move(below.front());
  root.p = 1.0;
  return root;
}

TreePtr build_tree(const TreeSpec& spec) {
  const NodeSpec root = std::visit(SpecToNodes{}, spec);
  return std::make_shared<const FiltrationTree>(
      FiltrationTree::from_nodes(root, ErrorCode::InvalidSpec));
}

double regularity_coefficient(const FiltrationTree& tree) {
  double rho = 1.0;
  for (const Atom& a : tree.atoms()) {
    if (!a.parent) continue;
    rho = std::min(rho, a.probability / tree.atom(*a.parent).probability);
  }
  return rho;
}

}  // namespace mhls
