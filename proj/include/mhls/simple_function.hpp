#pragma once

#include <span>
#include <vector>

#include "mhls/filtration.hpp"

namespace mhls {

/// A random variable measurable with respect to F_level: one value per atom
/// of that level, in level order (depth-first, left to right).
class SimpleFunction {
public:
  SimpleFunction(TreePtr tree, int level, std::vector<double> values);

  static SimpleFunction constant(TreePtr tree, int level, double c);

  const TreePtr& tree() const noexcept { return tree_; }
  int level() const noexcept { return level_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// E[f] = sum over atoms of P(w) f(w).
  double expectation() const;

  SimpleFunction& operator+=(const SimpleFunction& other);
  SimpleFunction& operator-=(const SimpleFunction& other);
  SimpleFunction& operator*=(double c);

  /// Same tree object, same level, identical values.
  bool operator==(const SimpleFunction& other) const;

private:
  void require_compatible(const SimpleFunction& other) const;

  TreePtr tree_;
  int level_;
  std::vector<double> values_;
};

SimpleFunction operator+(SimpleFunction a, const SimpleFunction& b);
SimpleFunction operator-(SimpleFunction a, const SimpleFunction& b);
SimpleFunction operator*(double c, SimpleFunction f);

/// Pointwise product; both factors are lifted to the finer of the two levels.
SimpleFunction product(const SimpleFunction& a, const SimpleFunction& b);

/// E[a b].
double pairing(const SimpleFunction& a, const SimpleFunction& b);

/// Re-express f at a level n >= level(f) by copying values down the tree.
SimpleFunction broadcast(const SimpleFunction& f, int n);

/// b_n: the level-n function equal to P(w) on each atom w of F_n.
SimpleFunction b_function(const TreePtr& tree, int n);

/// b~_n: on each atom of F_{n-1}, the smallest probability among its children.
SimpleFunction tilde_b_function(const TreePtr& tree, int n);

}  // namespace mhls
