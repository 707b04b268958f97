#include "mhls/operators.hpp"

#include <cmath>
#include <string>

#include "mhls/kernels.hpp"

namespace mhls {

namespace {

constexpr double kExponentTolerance = 1e-12;

void check_pq(double p, double q) {
  if (!(p > 1.0 && q > p && std::isfinite(q))) {
    throw Error(ErrorCode::InvalidExponent, "need 1 < p < q < infinity, got p = " +
                                                std::to_string(p) + ", q = " + std::to_string(q));
  }
}

std::vector<double> powers(std::span<const double> base, double alpha) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = std::pow(base[i], alpha);
  return out;
}

// Coefficient of dF_n for atom v of level n, read through its parent where
// the coefficient is F_{n-1}-measurable.
std::vector<double> coefficients_at_level(const TreePtr& tree, OperatorKind kind, int n,
                                          double alpha) {
  const auto parents = tree->parents(n);
  std::vector<double> out(parents.size());
  switch (kind) {
    case OperatorKind::NakaiSadasue: {
      const auto c = powers(tree->probabilities(n - 1), alpha);
      for (std::size_t v = 0; v < out.size(); ++v) out[v] = c[parents[v]];
      break;
    }
    case OperatorKind::Tilde: {
      const auto c = powers(tilde_b_function(tree, n).values(), alpha);
      for (std::size_t v = 0; v < out.size(); ++v) out[v] = c[parents[v]];
      break;
    }
    case OperatorKind::Atomic:
      out = powers(tree->probabilities(n), alpha);
      break;
    case OperatorKind::AtomicAdjoint:
      throw Error(ErrorCode::InvalidSpec, "the adjoint has no difference coefficients");
  }
  return out;
}

// term[v] = c_n(v) (F_n(v) - F_{n-1}(parent v)) at level n.
std::vector<double> forward_terms(const MartingaleSequence& m, OperatorKind kind, int n,
                                  double alpha) {
  const auto& tree = m.tree();
  const auto coeff = coefficients_at_level(tree, kind, n, alpha);
  const auto parents = tree->parents(n);
  const auto fn = m.stage(n).values();
  const auto prev = m.stage(n - 1).values();
  std::vector<double> term(fn.size());
  const auto count = static_cast<std::ptrdiff_t>(fn.size());
#pragma omp parallel for schedule(static) if (fn.size() > kernels::kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    term[v] = coeff[v] * (fn[v] - prev[parents[v]]);
  }
  return term;
}

// (E_n - E_{n-1}) M_n g at level n, given G_n = E_n g at level n.
std::vector<double> adjoint_term(const FiltrationTree& tree, int n, std::span<const double> g_n,
                                 double alpha) {
  auto h = powers(tree.probabilities(n), alpha);
  for (std::size_t v = 0; v < h.size(); ++v) h[v] *= g_n[v];
  std::vector<double> coarse(tree.level_size(n - 1));
  kernels::condition_one_level(tree, n - 1, h, coarse);
  const auto parents = tree.parents(n);
  for (std::size_t v = 0; v < h.size(); ++v) h[v] -= coarse[parents[v]];
  return h;
}

SimpleFunction forward(const MartingaleSequence& m, OperatorKind kind, double alpha) {
  check_alpha(alpha);
  const auto& tree = m.tree();
  std::vector<double> acc{0.0};
  for (int n = 1; n <= m.horizon(); ++n) {
    const auto term = forward_terms(m, kind, n, alpha);
    std::vector<double> next(term.size());
    kernels::extend_accumulate(*tree, n, acc, term, next);
    acc = std::move(next);
  }
  return SimpleFunction(tree, m.horizon(), std::move(acc));
}

// E_n g for n = 0..D: conditioning below level(g), broadcasting above.
std::vector<std::vector<double>> conditional_stages(const SimpleFunction& g) {
  const auto& tree = *g.tree();
  std::vector<std::vector<double>> stages(static_cast<std::size_t>(tree.depth()) + 1);
  const auto lvl = static_cast<std::size_t>(g.level());
  stages[lvl].assign(g.values().begin(), g.values().end());
  for (int n = g.level() - 1; n >= 0; --n) {
    const auto k = static_cast<std::size_t>(n);
    stages[k].resize(tree.level_size(n));
    kernels::condition_one_level(tree, n, stages[k + 1], stages[k]);
  }
  for (int n = g.level() + 1; n <= tree.depth(); ++n) {
    const auto k = static_cast<std::size_t>(n);
    stages[k].resize(tree.level_size(n));
    kernels::broadcast_one_level(tree, n, stages[k - 1], stages[k]);
  }
  return stages;
}

// Accumulates adjoint terms n in [first, last] starting from `acc` at level first-1,
// then broadcasts to level D.
std::vector<double> accumulate_adjoint(const FiltrationTree& tree,
                                       const std::vector<std::vector<double>>& stages,
                                       int first, int last, std::vector<double> acc,
                                       double alpha) {
  for (int n = first; n <= last; ++n) {
    const auto term = adjoint_term(tree, n, stages[static_cast<std::size_t>(n)], alpha);
    std::vector<double> next(term.size());
    kernels::extend_accumulate(tree, n, acc, term, next);
    acc = std::move(next);
  }
  for (int n = std::max(first, last + 1); n <= tree.depth(); ++n) {
    std::vector<double> next(tree.level_size(n));
    kernels::broadcast_one_level(tree, n, acc, next);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

double check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidExponent, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  return alpha;
}

Exponents Exponents::from_alpha_p(double alpha, double p) {
  check_alpha(alpha);
  const double inv_q = 1.0 / p - alpha;
  if (!(inv_q > 0.0)) {
    throw Error(ErrorCode::InvalidExponent, "1/p - alpha must be positive");
  }
  const double q = 1.0 / inv_q;
  check_pq(p, q);
  return {alpha, p, q};
}

Exponents Exponents::from_p_q(double p, double q) {
  check_pq(p, q);
  return {check_alpha(1.0 / p - 1.0 / q), p, q};
}

Exponents Exponents::checked(double alpha, double p, double q) {
  check_alpha(alpha);
  check_pq(p, q);
  if (std::abs(1.0 / p - 1.0 / q - alpha) > kExponentTolerance) {
    throw Error(ErrorCode::InvalidExponent, "1/p - 1/q differs from alpha by more than 1e-12");
  }
  return {alpha, p, q};
}

std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::NakaiSadasue: return "NakaiSadasue";
    case OperatorKind::Tilde: return "Tilde";
    case OperatorKind::Atomic: return "Atomic";
    case OperatorKind::AtomicAdjoint: return "AtomicAdjoint";
  }
  return "Unknown";
}

OperatorKind parse_operator_kind(std::string_view name) {
  if (name == "i" || name == "NakaiSadasue") return OperatorKind::NakaiSadasue;
  if (name == "tilde" || name == "Tilde") return OperatorKind::Tilde;
  if (name == "ia" || name == "Atomic") return OperatorKind::Atomic;
  if (name == "adjoint" || name == "AtomicAdjoint") return OperatorKind::AtomicAdjoint;
  throw Error(ErrorCode::InvalidSpec, "unknown operator '" + std::string(name) + "'");
}

bool is_martingale_transform(OperatorKind kind) noexcept {
  return kind == OperatorKind::NakaiSadasue || kind == OperatorKind::Tilde;
}

SimpleFunction coefficient(const TreePtr& tree, OperatorKind kind, int n, double alpha) {
  check_alpha(alpha);
  switch (kind) {
    case OperatorKind::NakaiSadasue: {
      const auto c = powers(tree->probabilities(n - 1), alpha);
      return SimpleFunction(tree, n - 1, c);
    }
    case OperatorKind::Tilde:
      return SimpleFunction(tree, n - 1, powers(tilde_b_function(tree, n).values(), alpha));
    case OperatorKind::Atomic:
      return SimpleFunction(tree, n, powers(tree->probabilities(n), alpha));
    case OperatorKind::AtomicAdjoint:
      break;
  }
  throw Error(ErrorCode::InvalidSpec, "the adjoint has no difference coefficients");
}

SimpleFunction apply_i_alpha(const MartingaleSequence& m, double alpha) {
  return forward(m, OperatorKind::NakaiSadasue, alpha);
}

SimpleFunction apply_tilde(const MartingaleSequence& m, double alpha) {
  return forward(m, OperatorKind::Tilde, alpha);
}

SimpleFunction apply_atomic(const MartingaleSequence& m, double alpha) {
  return forward(m, OperatorKind::Atomic, alpha);
}

SimpleFunction apply_atomic_adjoint(const SimpleFunction& g, double alpha) {
  check_alpha(alpha);
  const auto& tree = *g.tree();
  const auto stages = conditional_stages(g);
  auto acc = accumulate_adjoint(tree, stages, 1, tree.depth(), {0.0}, alpha);
  return SimpleFunction(g.tree(), tree.depth(), std::move(acc));
}

SimpleFunction apply(OperatorKind kind, const SimpleFunction& f, double alpha) {
  if (kind == OperatorKind::AtomicAdjoint) return apply_atomic_adjoint(f, alpha);
  return forward(MartingaleSequence::from_terminal(f), kind, alpha);
}

AdjointSplit split_adjoint(const SimpleFunction& g, double alpha, int level) {
  check_alpha(alpha);
  if (level != g.level()) {
    throw Error(ErrorCode::LevelMismatch, "split level " + std::to_string(level) +
                                              " differs from the level of g");
  }
  const auto& tree = *g.tree();
  const auto stages = conditional_stages(g);
  auto near = accumulate_adjoint(tree, stages, 1, level, {0.0}, alpha);
  auto far = accumulate_adjoint(tree, stages, level + 1, tree.depth(),
                                std::vector<double>(tree.level_size(level), 0.0), alpha);
  return {SimpleFunction(g.tree(), tree.depth(), std::move(near)),
          SimpleFunction(g.tree(), tree.depth(), std::move(far))};
}

PartialSums truncated_transform(const MartingaleSequence& m, double alpha, OperatorKind kind,
                                int horizon) {
  check_alpha(alpha);
  const auto& tree = m.tree();
  if (horizon < 0 || horizon > tree->depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "truncation level " + std::to_string(horizon));
  }
  PartialSums out{kind, {}, is_martingale_transform(kind)};
  out.sums.push_back(SimpleFunction::constant(tree, 0, 0.0));
  if (kind == OperatorKind::AtomicAdjoint) {
    const auto stages = conditional_stages(m.terminal());
    for (int n = 1; n <= horizon; ++n) {
      const auto term = adjoint_term(*tree, n, stages[static_cast<std::size_t>(n)], alpha);
      std::vector<double> next(term.size());
      kernels::extend_accumulate(*tree, n, out.sums.back().values(), term, next);
      out.sums.emplace_back(tree, n, std::move(next));
    }
    return out;
  }
  if (horizon > m.horizon()) {
    throw Error(ErrorCode::LevelOutOfRange, "truncation beyond the martingale horizon");
  }
  for (int n = 1; n <= horizon; ++n) {
    const auto term = forward_terms(m, kind, n, alpha);
    std::vector<double> next(term.size());
    kernels::extend_accumulate(*tree, n, out.sums.back().values(), term, next);
    out.sums.emplace_back(tree, n, std::move(next));
  }
  return out;
}

double martingale_defect(const PartialSums& s) {
  double worst = 0.0;
  for (std::size_t k = 1; k < s.sums.size(); ++k) {
    const auto projected = condition(s.sums[k], static_cast<int>(k) - 1);
    const auto prev = s.sums[k - 1].values();
    for (std::size_t i = 0; i < prev.size(); ++i) {
      worst = std::max(worst, std::abs(projected[i] - prev[i]));
    }
  }
  return worst;
}

}  // namespace mhls
