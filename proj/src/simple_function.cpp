#include "mhls/simple_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mhls/kernels.hpp"

namespace mhls {

SimpleFunction::SimpleFunction(TreePtr tree, int level, std::vector<double> values)
    : tree_(std::move(tree)), level_(level), values_(std::move(values)) {
  if (!tree_) throw Error(ErrorCode::InvalidSpec, "simple function without a tree");
  if (values_.size() != tree_->level_size(level_)) {
    throw Error(ErrorCode::InvariantViolation,
                "level " + std::to_string(level_) + " has " +
                    std::to_string(tree_->level_size(level_)) + " atoms but " +
                    std::to_string(values_.size()) + " values were given");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvariantViolation, "non-finite value");
  }
}

SimpleFunction SimpleFunction::constant(TreePtr tree, int level, double c) {
  const std::size_t n = tree->level_size(level);
  return SimpleFunction(std::move(tree), level, std::vector<double>(n, c));
}

double SimpleFunction::expectation() const {
  const auto p = tree_->probabilities(level_);
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) sum += p[i] * values_[i];
  return sum;
}

void SimpleFunction::require_compatible(const SimpleFunction& other) const {
  if (tree_ != other.tree_) throw Error(ErrorCode::TreeMismatch, "functions live on different trees");
  if (level_ != other.level_) {
    throw Error(ErrorCode::LevelMismatch, "levels " + std::to_string(level_) + " and " +
                                              std::to_string(other.level_) + " differ");
  }
}

SimpleFunction& SimpleFunction::operator+=(const SimpleFunction& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SimpleFunction& SimpleFunction::operator-=(const SimpleFunction& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SimpleFunction& SimpleFunction::operator*=(double c) {
  for (auto& v : values_) v *= c;
  return *this;
}

bool SimpleFunction::operator==(const SimpleFunction& other) const {
  return tree_ == other.tree_ && level_ == other.level_ && values_ == other.values_;
}

SimpleFunction operator+(SimpleFunction a, const SimpleFunction& b) { return a += b; }
SimpleFunction operator-(SimpleFunction a, const SimpleFunction& b) { return a -= b; }
SimpleFunction operator*(double c, SimpleFunction f) { return f *= c; }

SimpleFunction broadcast(const SimpleFunction& f, int n) {
  if (n < f.level()) {
    throw Error(ErrorCode::LevelMismatch, "cannot broadcast to a coarser level");
  }
  const auto& tree = *f.tree();
  std::vector<double> current(f.values().begin(), f.values().end());
  for (int k = f.level() + 1; k <= n; ++k) {
    std::vector<double> next(tree.level_size(k));
    kernels::broadcast_one_level(tree, k, current, next);
    current = std::move(next);
  }
  return SimpleFunction(f.tree(), n, std::move(current));
}

SimpleFunction product(const SimpleFunction& a, const SimpleFunction& b) {
  if (a.tree() != b.tree()) throw Error(ErrorCode::TreeMismatch, "functions live on different trees");
  const int n = std::max(a.level(), b.level());
  const SimpleFunction x = broadcast(a, n);
  const SimpleFunction y = broadcast(b, n);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  return SimpleFunction(a.tree(), n, std::move(out));
}

double pairing(const SimpleFunction& a, const SimpleFunction& b) {
  return product(a, b).expectation();
}

SimpleFunction b_function(const TreePtr& tree, int n) {
  const auto p = tree->probabilities(n);
  return SimpleFunction(tree, n, std::vector<double>(p.begin(), p.end()));
}

SimpleFunction tilde_b_function(const TreePtr& tree, int n) {
  if (n < 1 || n > tree->depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "b~_n needs 1 <= n <= depth, got " + std::to_string(n));
  }
  const auto offsets = tree->child_offsets(n - 1);
  const auto child_p = tree->probabilities(n);
  std::vector<double> out(tree->level_size(n - 1), std::numeric_limits<double>::infinity());
  for (std::size_t w = 0; w < out.size(); ++w) {
    for (std::size_t v = offsets[w]; v < offsets[w + 1]; ++v) out[w] = std::min(out[w], child_p[v]);
  }
  return SimpleFunction(tree, n - 1, std::move(out));
}

}  // namespace mhls
