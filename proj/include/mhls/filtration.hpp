#pragma once

// Finite atomic filtrations stored as probability trees.
//
// Atoms are kept in breadth-first order, so the atoms of one level occupy a
// contiguous block and the children of consecutive atoms are consecutive in
// the next level. Every branch reaches the common depth D: an atom that stops
// splitting early is continued by synthetic single children carrying its own
// mass, which makes the filtration constant along that branch.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ranges>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "mhls/error.hpp"

namespace mhls {

using AtomId = std::size_t;

/// Nested description of a tree; the root's probability is taken to be 1.
struct NodeSpec {
  double p = 1.0;
  std::vector<NodeSpec> children;

  bool operator==(const NodeSpec&) const = default;
};

namespace tree_spec {

struct Dyadic {
  int depth = 0;
};

struct Uniform {
  int m = 2;
  int depth = 0;
};

/// Nested chain w_0 > w_1 > ... > w_N with P(w_n) = probabilities[n].
struct Chain {
  std::vector<double> probabilities;
};

struct Random {
  std::uint64_t seed = 42;
  int depth = 0;
  int max_children = 2;
  double min_ratio = 0.1;
  // Chance that a non-root atom stops splitting (it is then leaf-extended).
  double stop_probability = 0.0;
};

struct Explicit {
  NodeSpec root;
};

}  // namespace tree_spec

using TreeSpec = std::variant<tree_spec::Dyadic, tree_spec::Uniform, tree_spec::Chain,
                              tree_spec::Random, tree_spec::Explicit>;

struct Atom {
  AtomId id = 0;
  int level = 0;
  std::size_t index = 0;  // position within its level
  double probability = 1.0;
  std::optional<AtomId> parent;
  AtomId first_child = 0;
  std::size_t child_count = 0;
  bool synthetic = false;  // created by leaf extension

  auto children() const { return std::views::iota(first_child, first_child + child_count); }
  bool operator==(const Atom&) const = default;
};

class FiltrationTree {
public:
  /// Validates `root` (children sums within 1e-12, masses in (0, 1]) and
  /// leaf-extends it to its maximal depth. Inconsistent masses raise
  /// `on_invalid`; masses below 1e-300 raise ProbabilityUnderflow.
  static FiltrationTree from_nodes(const NodeSpec& root,
                                   ErrorCode on_invalid = ErrorCode::InvalidSpec);

  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t level_size(int n) const;

  const Atom& atom(AtomId id) const;
  const Atom& atom(int level, std::size_t index) const;
  std::span<const Atom> level(int n) const;
  std::span<const Atom> atoms() const noexcept { return atoms_; }

  /// P(w) for the atoms of level n, in level order.
  std::span<const double> probabilities(int n) const;
  /// For n >= 1: index within level n-1 of each atom's parent.
  std::span<const std::size_t> parents(int n) const;
  /// For n < D: children of atom i at level n are [offsets[i], offsets[i+1]) in level n+1.
  std::span<const std::size_t> child_offsets(int n) const;
  /// Descendants of (n, index) at level D, as a half-open index range.
  std::pair<std::size_t, std::size_t> leaf_range(int n, std::size_t index) const;

  /// The tree without synthetic atoms.
  NodeSpec to_nodes() const;

  bool operator==(const FiltrationTree& other) const { return atoms_ == other.atoms_; }

private:
  FiltrationTree() = default;
  void check_level(int n) const;

  int depth_ = 0;
  std::vector<Atom> atoms_;
  std::vector<std::size_t> level_offset_;               // D + 2 entries
  std::vector<std::vector<double>> probabilities_;      // per level
  std::vector<std::vector<std::size_t>> parents_;       // per level, empty at 0
  std::vector<std::vector<std::size_t>> child_offsets_; // per level, empty at D
  std::vector<std::vector<std::size_t>> leaf_begin_;    // per level, size+1 entries
};

using TreePtr = std::shared_ptr<const FiltrationTree>;

constexpr double kSumTolerance = 1e-12;
constexpr double kMinProbability = 1e-300;

TreePtr build_tree(const TreeSpec& spec);

/// min over parent/child pairs of P(child)/P(parent); synthetic pairs count as 1.
double regularity_coefficient(const FiltrationTree& tree);

}  // namespace mhls
