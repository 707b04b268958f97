#pragma once

#include <vector>

#include "mhls/lab/report.hpp"
#include "mhls/operators.hpp"

namespace mhls::lab {

/// ||I^A F||_q / ||F||_p for the single-step martingale on Omega = v + (Omega \ v),
/// P(v) = s, in closed form (evaluated in log space).
double sharpness_ratio(double s, const Exponents& e);

/// The same ratio through the tree, martingale, operator and norm pipeline.
double sharpness_ratio_generic(double s, const Exponents& e);

/// ||Op F||_q / ||F||_p for the single-step martingale splitting Omega with
/// P(v) = skew, run through the generic pipeline. Op defaults to I_alpha.
double unboundedness_probe(double skew, const Exponents& e,
                           OperatorKind kind = OperatorKind::NakaiSadasue);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ProbeSweep {
  std::vector<double> skews;
  std::vector<double> ratios;
  double slope = 0.0;
  double max_over_min = 0.0;
};

/// 2^{-first}, ..., 2^{-last}.
std::vector<double> dyadic_skews(int first, int last);

ProbeSweep sharpness_sweep(const Exponents& e, const std::vector<double>& skews);
ProbeSweep unboundedness_sweep(const Exponents& e, const std::vector<double>& skews,
                               OperatorKind kind = OperatorKind::NakaiSadasue);

/// Exponents used by the probe sweeps: 1/q = 1/200, 1/p = alpha + 1/200.
Exponents probe_exponents(double alpha);

/// probe-sharpness: pass iff max/min < 4 and |ratio(smallest s) - 1| < 1e-2.
ExperimentReport sharpness_report(const Exponents& e, const std::vector<double>& skews);
/// probe-unbounded: pass iff the I_alpha slope is within 5% of -alpha and the
/// I^A sweep stays within a factor 4.
ExperimentReport unboundedness_report(const Exponents& e, const std::vector<double>& skews);

}  // namespace mhls::lab
