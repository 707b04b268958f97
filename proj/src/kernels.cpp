#include "mhls/kernels.hpp"

namespace mhls::kernels {

void condition_one_level(const FiltrationTree& tree, int n, std::span<const double> in,
                         std::span<double> out) {
  const auto offsets = tree.child_offsets(n);
  const auto parent_p = tree.probabilities(n);
  const auto child_p = tree.probabilities(n + 1);
  const auto count = static_cast<std::ptrdiff_t>(parent_p.size());
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(count) > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto w = static_cast<std::size_t>(i);
    double sum = 0.0;
    for (std::size_t v = offsets[w]; v < offsets[w + 1]; ++v) sum += child_p[v] * in[v];
    out[w] = sum / parent_p[w];
  }
}

void broadcast_one_level(const FiltrationTree& tree, int n, std::span<const double> in,
                         std::span<double> out) {
  const auto parents = tree.parents(n);
  const auto count = static_cast<std::ptrdiff_t>(parents.size());
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(count) > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    out[v] = in[parents[v]];
  }
}

void extend_accumulate(const FiltrationTree& tree, int n, std::span<const double> acc,
                       std::span<const double> term, std::span<double> out) {
  const auto parents = tree.parents(n);
  const auto count = static_cast<std::ptrdiff_t>(parents.size());
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(count) > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    out[v] = acc[parents[v]] + term[v];
  }
}

}  // namespace mhls::kernels
