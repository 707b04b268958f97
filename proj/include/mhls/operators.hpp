#pragma once

// Martingale fractional integration operators on finite trees:
//
//   I_alpha[F]   = sum_n b_{n-1}^alpha dF_n   (coefficient F_{n-1}-measurable)
//   I~_alpha[F]  = sum_n b~_n^alpha    dF_n   (coefficient F_{n-1}-measurable)
//   I^A_alpha[F] = sum_n b_n^alpha     dF_n   (coefficient F_n-measurable)
//
// and the formal adjoint (I^A_alpha)* = sum_n (E_n - E_{n-1}) M_n, where M_n
// multiplies by b_n^alpha.

#include <string_view>
#include <utility>
#include <vector>

#include "mhls/martingale.hpp"

namespace mhls {

/// (alpha, p, q) with 1/p - 1/q = alpha and 1 < p < q < infinity.
struct Exponents {
  double alpha;
  double p;
  double q;

  static Exponents from_alpha_p(double alpha, double p);
  static Exponents from_p_q(double p, double q);
  /// All three given; the constraint is checked to 1e-12.
  static Exponents checked(double alpha, double p, double q);
};

/// Throws InvalidExponent unless alpha lies in (0, 1).
double check_alpha(double alpha);

enum class OperatorKind { NakaiSadasue, Tilde, Atomic, AtomicAdjoint };

std::string_view to_string(OperatorKind kind) noexcept;
/// Accepts "i", "tilde", "ia", "adjoint" and the enumerator names.
OperatorKind parse_operator_kind(std::string_view name);
bool is_martingale_transform(OperatorKind kind) noexcept;

/// The multiplier of dF_n for the forward kinds, at its natural level
/// (n-1 for NakaiSadasue and Tilde, n for Atomic).
SimpleFunction coefficient(const TreePtr& tree, OperatorKind kind, int n, double alpha);

SimpleFunction apply_i_alpha(const MartingaleSequence& m, double alpha);
SimpleFunction apply_tilde(const MartingaleSequence& m, double alpha);
SimpleFunction apply_atomic(const MartingaleSequence& m, double alpha);
/// Result at the tree depth D.
SimpleFunction apply_atomic_adjoint(const SimpleFunction& g, double alpha);

inline SimpleFunction apply_i_alpha(const MartingaleSequence& m, const Exponents& e) {
  return apply_i_alpha(m, e.alpha);
}
inline SimpleFunction apply_tilde(const MartingaleSequence& m, const Exponents& e) {
  return apply_tilde(m, e.alpha);
}
inline SimpleFunction apply_atomic(const MartingaleSequence& m, const Exponents& e) {
  return apply_atomic(m, e.alpha);
}
inline SimpleFunction apply_atomic_adjoint(const SimpleFunction& g, const Exponents& e) {
  return apply_atomic_adjoint(g, e.alpha);
}

/// Dispatch on kind; forward kinds take the martingale generated by f.
SimpleFunction apply(OperatorKind kind, const SimpleFunction& f, double alpha);

struct AdjointSplit {
  SimpleFunction near;  // J1: terms n <= N
  SimpleFunction far;   // J2: terms n > N
};

/// Splits the adjoint at the measurability level of g. `level` must equal level(g).
AdjointSplit split_adjoint(const SimpleFunction& g, double alpha, int level);

/// Partial sums S_0 = 0, S_k = sum_{n <= k} c_n dF_n at level k.
struct PartialSums {
  OperatorKind kind;
  std::vector<SimpleFunction> sums;
  /// Whether the coefficients are predictable, i.e. the kind is a
  /// martingale transform. Atomic truncations are returned with this false.
  bool transform;
};

/// Forward kinds use dF_n; AtomicAdjoint uses the adjoint terms of g.
PartialSums truncated_transform(const MartingaleSequence& m, double alpha, OperatorKind kind,
                                int horizon);

/// max_k max |E(S_k | F_{k-1}) - S_{k-1}|.
double martingale_defect(const PartialSums& s);

}  // namespace mhls
