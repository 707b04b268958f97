#include "mhls/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace mhls {

namespace {

void check_lorentz_exponents(double p, double q) {
  if (!(p >= 1.0 && std::isfinite(p)) || !(q >= 1.0)) {
    throw Error(ErrorCode::InvalidExponent, "Lorentz exponents need 1 <= p < inf and q >= 1, got p = " +
                                                std::to_string(p) + ", q = " + std::to_string(q));
  }
}

}  // namespace

double DistributionFunction::operator()(double t) const {
  if (t < 0.0) return masses.empty() ? 0.0 : masses.front();
  // Last threshold <= t.
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), t);
  if (it == thresholds.begin()) return masses.front();
  return masses[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

DistributionFunction distribution(const SimpleFunction& f) {
  const auto p = f.tree()->probabilities(f.level());
  std::vector<std::pair<double, double>> atoms;  // (|value|, mass), nonzero values only
  atoms.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    if (a > 0.0) atoms.emplace_back(a, p[i]);
  }
  std::sort(atoms.begin(), atoms.end());

  DistributionFunction d;
  d.thresholds.push_back(0.0);
  double above = 0.0;
  for (const auto& [value, mass] : atoms) above += mass;
  d.masses.push_back(std::min(above, 1.0));
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double value = atoms[i].first;
    while (i < atoms.size() && atoms[i].first == value) {
      above -= atoms[i].second;
      ++i;
    }
    d.thresholds.push_back(value);
    // Exact zero once every atom is past, whatever the rounding of the partial sums.
    d.masses.push_back(i == atoms.size() ? 0.0 : std::max(above, 0.0));
  }
  return d;
}

double lp_norm(const SimpleFunction& f, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponent, "L_p needs p >= 1");
  double top = 0.0;
  for (double v : f.values()) top = std::max(top, std::abs(v));
  if (p == kInfinity || top == 0.0) return top;
  // Scaled by the maximum so that large p does not overflow.
  const auto prob = f.tree()->probabilities(f.level());
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) sum += prob[i] * std::pow(std::abs(f[i]) / top, p);
  }
  return top * std::pow(sum, 1.0 / p);
}

double lorentz_norm(const DistributionFunction& d, double p, double q) {
  check_lorentz_exponents(p, q);
  const std::size_t steps = d.thresholds.size() - 1;  // intervals with finite right end
  if (q == kInfinity) {
    double best = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      best = std::max(best, d.thresholds[i + 1] * std::pow(d.masses[i], 1.0 / p));
    }
    return best;
  }
  // sum_i d_i^{q/p} (t_{i+1}^q - t_i^q) / q, accumulated as logarithms.
  std::vector<double> logs;
  logs.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    if (d.masses[i] <= 0.0) continue;
    const double hi = d.thresholds[i + 1];
    const double lo = d.thresholds[i];
    const double shrink = lo == 0.0 ? 0.0 : std::pow(lo / hi, q);
    logs.push_back((q / p) * std::log(d.masses[i]) + q * std::log(hi) + std::log1p(-shrink) -
                   std::log(q));
  }
  if (logs.empty()) return 0.0;
  const double peak = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  return std::exp((peak + std::log(sum)) / q);
}

double lorentz_norm(const SimpleFunction& f, double p, double q) {
  check_lorentz_exponents(p, q);
  return lorentz_norm(distribution(f), p, q);
}

double weak_ratio(const SimpleFunction& f, double q, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "lambda must be positive");
  if (!(q >= 1.0)) throw Error(ErrorCode::InvalidExponent, "weak ratio needs q >= 1");
  const auto p = f.tree()->probabilities(f.level());
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > lambda) mass += p[i];
  }
  return lambda * std::pow(mass, 1.0 / q);
}

}  // namespace mhls
