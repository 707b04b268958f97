#pragma once

// Exact norms of simple functions. The distribution function of a simple
// function is a finite step function, so every integral below is a finite sum.

#include <limits>
#include <vector>

#include "mhls/simple_function.hpp"

namespace mhls {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// t -> P(|f| > t) as a right-continuous step function: equal to masses[i]
/// on [thresholds[i], thresholds[i+1]), with thresholds[0] = 0 and
/// masses.back() = 0 past max|f|.
struct DistributionFunction {
  std::vector<double> thresholds;
  std::vector<double> masses;

  double operator()(double t) const;
};

DistributionFunction distribution(const SimpleFunction& f);

/// (sum P(w) |f(w)|^p)^{1/p}, or max |f| for p = infinity.
double lp_norm(const SimpleFunction& f, double p);

/// || t P(|f| > t)^{1/p} ||_{L_q(dt/t)}, for p in [1, inf) and q in [1, inf].
double lorentz_norm(const SimpleFunction& f, double p, double q);
double lorentz_norm(const DistributionFunction& d, double p, double q);

/// lambda P(|f| > lambda)^{1/q}.
double weak_ratio(const SimpleFunction& f, double q, double lambda);

}  // namespace mhls
