#pragma once

// Level-sweep kernels over the breadth-first tree layout. Each output entry
// is written by exactly one iteration, so results do not depend on the
// number of OpenMP threads.

#include <cstddef>
#include <span>

#include "mhls/filtration.hpp"

namespace mhls::kernels {

/// Loops shorter than this stay serial.
inline constexpr std::size_t kParallelThreshold = 1u << 14;

/// out[w] = sum_{v child of w} P(v) in[v] / P(w), mapping level n+1 onto level n.
void condition_one_level(const FiltrationTree& tree, int n, std::span<const double> in,
                         std::span<double> out);

/// out[v] = in[parent(v)], mapping level n-1 onto level n.
void broadcast_one_level(const FiltrationTree& tree, int n, std::span<const double> in,
                         std::span<double> out);

/// out[v] = acc[parent(v)] + term[v] for the atoms v of level n.
void extend_accumulate(const FiltrationTree& tree, int n, std::span<const double> acc,
                       std::span<const double> term, std::span<double> out);

}  // namespace mhls::kernels
