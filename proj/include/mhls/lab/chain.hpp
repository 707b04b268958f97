#pragma once

// Closed forms along a chain of nested atoms w_0 = Omega > w_1 > ... > w_N,
// r_n = P(w_n), for the normalized atomic function F = chi_{w_N} / r_N.
// Values are indexed by shell: entry n < N is the value on w_n \ w_{n+1},
// entry N the value on w_N.

#include <vector>

#include "mhls/martingale.hpp"

namespace mhls::lab {

struct ChainInstance {
  std::vector<double> r;  // r_0 = 1 > r_1 > ... > r_N > 0
  double alpha = 0.5;

  int horizon() const noexcept { return static_cast<int>(r.size()) - 1; }
  /// Throws NonDecreasingChain / InvalidSpec on a malformed chain.
  void validate() const;
};

/// Probabilities of w's ancestors, root first, ending with P(w).
std::vector<double> chain_through(const FiltrationTree& tree, AtomId w);

/// For each leaf of the tree, the largest n <= level(w) with the leaf inside w_n.
std::vector<int> shell_of_leaves(const FiltrationTree& tree, AtomId w);

/// I^A_alpha[F] on a chain tree (each w_n splits into w_{n+1} and one sibling).
std::vector<double> chain_action(const ChainInstance& c);

/// J1[G] for G = chi_{w_N} / r_N: -r_1^alpha + sum_{k <= n} (r_k^alpha - r_{k+1}^alpha) / r_k,
/// with r_{N+1} = 0. Holds on any tree, not only chain trees.
std::vector<double> chain_j1(const ChainInstance& c);

/// (r_n^{alpha-1} - 1) / (1 - alpha) + r_n^{alpha-1}, per shell.
std::vector<double> pointwise_bounds(const ChainInstance& c);

/// 1 + alpha (r_n^{alpha-1} - 1) / (1 - alpha) + r_n^{alpha-1}, per shell.
std::vector<double> j1_bounds(const ChainInstance& c);

/// The chain tree and its deepest atom w_N.
struct ChainTree {
  TreePtr tree;
  AtomId deepest;
};
ChainTree chain_tree(const ChainInstance& c);

}  // namespace mhls::lab
