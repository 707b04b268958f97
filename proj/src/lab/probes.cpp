#include "mhls/lab/probes.hpp"

#include <algorithm>
#include <cmath>

#include "mhls/lorentz.hpp"

namespace mhls::lab {

namespace {

// log(exp(a) + exp(b))
double log_add(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void check_skew(double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidSpec, "skew must lie in (0, 1)");
}

TreePtr split_tree(double s) {
  return build_tree(tree_spec::Explicit{NodeSpec{1.0, {NodeSpec{s, {}}, NodeSpec{1.0 - s, {}}}}});
}

}  // namespace

double sharpness_ratio(double s, const Exponents& e) {
  check_skew(s);
  const double ls = std::log(s);
  const double lt = std::log1p(-s);
  const double power_q = 1.0 + (e.alpha - 1.0) * e.q;
  const double power_p = 1.0 - e.p;
  const double log_num = log_add(power_q * ls, power_q * lt) / e.q;
  const double log_den = log_add(power_p * ls, power_p * lt) / e.p;
  return std::exp(log_num - log_den);
}

double sharpness_ratio_generic(double s, const Exponents& e) {
  return unboundedness_probe(s, e, OperatorKind::Atomic);
}

double unboundedness_probe(double skew, const Exponents& e, OperatorKind kind) {
  check_skew(skew);
  auto tree = split_tree(skew);
  const auto m = sharpness_martingale(tree, 0, tree->atom(0).first_child);
  const auto out = kind == OperatorKind::AtomicAdjoint ? apply_atomic_adjoint(m.terminal(), e.alpha)
                                                       : apply(kind, m.terminal(), e.alpha);
  return lp_norm(out, e.q) / lp_norm(m.terminal(), e.p);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidSpec, "slope fit needs two or more paired points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<double> dyadic_skews(int first, int last) {
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

namespace {

ProbeSweep finish(std::vector<double> skews, std::vector<double> ratios) {
  ProbeSweep sweep;
  sweep.slope = loglog_slope(skews, ratios);
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  sweep.max_over_min = *hi / *lo;
  sweep.skews = std::move(skews);
  sweep.ratios = std::move(ratios);
  return sweep;
}

ExperimentReport probe_report(const std::string& id, const Exponents& e, const ProbeSweep& sweep,
                              double bound) {
  ExperimentReport r;
  r.experiment = id;
  r.seed = 0;
  r.alpha = e.alpha;
  r.p = e.p;
  r.q = e.q;
  r.trials = sweep.skews.size();
  for (std::size_t k = 0; k < sweep.skews.size(); ++k) {
    r.rows.push_back({0, k, sweep.ratios[k], bound, true});
  }
  r.metrics["slope"] = sweep.slope;
  r.metrics["max_over_min"] = sweep.max_over_min;
  return r;
}

}  // namespace

ProbeSweep sharpness_sweep(const Exponents& e, const std::vector<double>& skews) {
  std::vector<double> ratios;
  for (double s : skews) ratios.push_back(sharpness_ratio(s, e));
  return finish(skews, std::move(ratios));
}

ProbeSweep unboundedness_sweep(const Exponents& e, const std::vector<double>& skews,
                               OperatorKind kind) {
  std::vector<double> ratios;
  for (double s : skews) ratios.push_back(unboundedness_probe(s, e, kind));
  return finish(skews, std::move(ratios));
}

Exponents probe_exponents(double alpha) {
  return Exponents::from_p_q(1.0 / (alpha + 1.0 / 200.0), 200.0);
}

ExperimentReport sharpness_report(const Exponents& e, const std::vector<double>& skews) {
  const auto sweep = sharpness_sweep(e, skews);
  auto r = probe_report("probe-sharpness", e, sweep, 4.0);
  const auto smallest = std::min_element(skews.begin(), skews.end()) - skews.begin();
  const double tail = std::abs(sweep.ratios[static_cast<std::size_t>(smallest)] - 1.0);
  r.metrics["tail_deviation"] = tail;
  r.worst_case = sweep.max_over_min;
  r.tolerance = 1e-2;
  r.pass = sweep.max_over_min < 4.0 && tail < 1e-2;
  return r;
}

ExperimentReport unboundedness_report(const Exponents& e, const std::vector<double>& skews) {
  const auto sweep = unboundedness_sweep(e, skews, OperatorKind::NakaiSadasue);
  const auto contrast = unboundedness_sweep(e, skews, OperatorKind::Atomic);
  auto r = probe_report("probe-unbounded", e, sweep, 0.0);
  const double rel = std::abs(sweep.slope + e.alpha) / e.alpha;
  r.metrics["slope_relative_error"] = rel;
  r.metrics["atomic_max_over_min"] = contrast.max_over_min;
  r.worst_case = rel;
  r.tolerance = 0.05;
  r.pass = rel <= 0.05 && contrast.max_over_min < 4.0;
  return r;
}

}  // namespace mhls::lab
