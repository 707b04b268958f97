#pragma once

#include <vector>

#include "mhls/simple_function.hpp"

namespace mhls {

/// E(f | F_n). For n below level(f) this averages over descendants; for
/// n >= level(f) it re-expresses f at level n.
SimpleFunction condition(const SimpleFunction& f, int n);

/// As above, but first checks that f lives on `tree`.
SimpleFunction condition(const TreePtr& tree, const SimpleFunction& f, int n);

/// F_n = E(F | F_n), n = 0..level(F), generated from a terminal variable.
class MartingaleSequence {
public:
  static MartingaleSequence from_terminal(SimpleFunction terminal);

  const TreePtr& tree() const noexcept { return terminal_.tree(); }
  const SimpleFunction& terminal() const noexcept { return terminal_; }
  /// Terminal level N.
  int horizon() const noexcept { return terminal_.level(); }
  const std::vector<SimpleFunction>& stages() const noexcept { return stages_; }
  const SimpleFunction& stage(int n) const { return stages_.at(static_cast<std::size_t>(n)); }

private:
  MartingaleSequence(SimpleFunction terminal, std::vector<SimpleFunction> stages)
      : terminal_(std::move(terminal)), stages_(std::move(stages)) {}

  SimpleFunction terminal_;
  std::vector<SimpleFunction> stages_;
};

/// (dF_1, ..., dF_N) with dF_n = F_n - F_{n-1} at level n.
std::vector<SimpleFunction> differences(const MartingaleSequence& m);

/// Level-N function sup_n |F_n| along each root path.
SimpleFunction maximal_function(const MartingaleSequence& m);

/// a * chi_w at level(w).
SimpleFunction atomic_function(const TreePtr& tree, AtomId w, double scale);

/// The single-step martingale that jumps only inside w: 1/P(v) on the child v,
/// -1/(P(w) - P(v)) on the rest of w, and 0 off w.
MartingaleSequence sharpness_martingale(const TreePtr& tree, AtomId w, AtomId v);

}  // namespace mhls
