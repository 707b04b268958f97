#pragma once

// Derivative-free search for large values of R(f, tree) = ||Op f||_q / ||f||_p.
//
// The tree shape is drawn once from the seed. Its masses are parametrized by
// unconstrained logits per sibling group, mapped to child fractions
// min_ratio + (1 - k min_ratio) softmax(logits). The search alternates
// coordinate-wise multiplicative moves on the leaf values (step halved when
// a sweep stalls) with Gaussian re-samplings of the logits; each move is kept
// only if it raises R.

#include <cstdint>

#include "mhls/lab/report.hpp"
#include "mhls/operators.hpp"

namespace mhls::lab {

struct SearchConfig {
  Exponents exponents{0.5, 4.0 / 3.0, 4.0};
  OperatorKind kind = OperatorKind::Atomic;
  std::size_t budget = 10000;  // objective evaluations
  std::uint64_t seed = 42;
  int max_depth = 6;
  int max_children = 3;
  double min_ratio = 0.01;  // floor on child / parent mass
  int tree_moves_per_sweep = 4;
};

double search_objective(OperatorKind kind, const SimpleFunction& f, const Exponents& e);

/// Always passes (reported-only); worst_case is the best ratio found and the
/// witness holds the maximizing tree and leaf values.
ExperimentReport extremal_search(const SearchConfig& config);

}  // namespace mhls::lab
