#pragma once

// Serial reference evaluation straight from the definitions, on the leaves of
// the tree: conditional expectations are explicit sums over descendant
// leaves and coefficients are read from each leaf's ancestors. Quadratic in
// depth; kept for testing and benchmarking the level-sweep kernels.

#include <vector>

#include "mhls/operators.hpp"

namespace mhls::reference {

/// ancestors[n][x]: index within level n of the ancestor of leaf x.
std::vector<std::vector<std::size_t>> ancestor_table(const FiltrationTree& tree);

/// f evaluated on every leaf (level D).
std::vector<double> leaf_values(const SimpleFunction& f);

/// E(h | F_n) for a leaf-level h, evaluated on the leaves.
std::vector<double> conditional_on_leaves(const FiltrationTree& tree,
                                          const std::vector<std::vector<std::size_t>>& ancestors,
                                          const std::vector<double>& h, int n);

/// Any kind applied to f; forward kinds use the martingale generated by f.
/// Returned on the leaves.
std::vector<double> apply(OperatorKind kind, const SimpleFunction& f, double alpha);

}  // namespace mhls::reference
