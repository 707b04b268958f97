#pragma once

// Hard (explicit-constant) checks and reported-only estimates.
//
// Each experiment is a pair: a generator that turns a trial seed and alpha
// into a Witness, and an evaluator that maps a Witness to a TrialOutcome.
// Ensembles run trials in parallel; trial t uses instance seed
// derive_seed(master, t / #alphas) and alpha = alphas[t % #alphas].

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mhls/lab/chain.hpp"
#include "mhls/lab/report.hpp"
#include "mhls/operators.hpp"

namespace mhls::lab {

struct TrialOutcome {
  double ratio = 0.0;  // larger is worse
  double bound = 0.0;
  bool pass = true;
};

struct EnsembleConfig {
  std::size_t trials = 1000;  // instances per alpha
  std::uint64_t seed = 42;
  std::vector<double> alphas{0.5};
  int max_depth = 12;
  int max_children = 3;
  std::optional<double> p;          // needed by the L_p based estimates
  std::optional<double> tolerance;  // overrides the experiment default
};

using Generator = std::function<Witness(std::uint64_t seed, double alpha, const EnsembleConfig&)>;
using Evaluator = std::function<TrialOutcome(const Witness&, double tolerance)>;

struct Experiment {
  std::string id;
  Generator generate;
  Evaluator evaluate;
  double default_tolerance;
  bool hard;  // false: reported only, never fails
};

/// Known ids: duality, chain, pointwise, weak1, j1, j2, transform (hard);
/// weak1-general, weak2-direct, duality-sanity, maximal (reported).
const Experiment& experiment(const std::string& id);
std::vector<std::string> experiment_ids();

ExperimentReport run_ensemble(const Experiment& e, const EnsembleConfig& config);
ExperimentReport run_ensemble(const std::string& id, const EnsembleConfig& config);

/// Re-runs the evaluator on the stored witness and returns its ratio.
double reevaluate_witness(const ExperimentReport& report);

// Single-instance checks.

struct DualityPairings {
  double forward;  // E[I^A F . G]
  double adjoint;  // E[F . (I^A)* G]
};
DualityPairings duality_pairings(const SimpleFunction& f, const SimpleFunction& g, double alpha);
TrialOutcome check_duality(const SimpleFunction& f, const SimpleFunction& g, double alpha,
                           double tolerance = 1e-9);

/// Largest scaled gap between chain_action and the generic operator.
TrialOutcome check_chain_action(const ChainInstance& c, double tolerance = 1e-12);
TrialOutcome check_pointwise_bound(const ChainInstance& c, double slack = 1e-12);

/// ||I^A F||_{q,inf} for F = chi_w / P(w), q = 1/(1-alpha), against (2-alpha)/(1-alpha).
TrialOutcome check_weak_type_atomic(const TreePtr& tree, AtomId w, double alpha,
                                    double slack = 1e-9);
double weak_type_constant(double alpha);

/// J1 closed form and bound for G = chi_w / P(w) on any tree.
TrialOutcome check_j1(const TreePtr& tree, AtomId w, double alpha, double tolerance = 1e-12);

/// -r^{alpha-1} <= J2[G] <= r^{alpha-1}/alpha on w and J2[G] = 0 off w.
TrialOutcome check_j2_uniform_bound(const TreePtr& tree, AtomId w, double alpha,
                                    double slack = 1e-9);

/// Worst martingale defect of the I_alpha and I~_alpha truncations, relative
/// to max(1, sup |S_k|).
TrialOutcome check_transform(const SimpleFunction& f, double alpha, double tolerance = 1e-12);

/// Two-level irregular tree on which the I^A truncation is not a martingale.
/// Returns the (strictly positive) defect.
double atomic_truncation_defect(double alpha);

/// max over points of |I_alpha - m^a I^A| and |I_alpha - m^a I~|, relative
/// to sup |I_alpha F|.
double uniform_proportionality_gap(int m, int depth, double alpha, std::uint64_t seed);

// Generators shared with tests.

ChainInstance random_chain(std::uint64_t seed, double alpha, int max_horizon);
TreePtr random_tree(std::uint64_t seed, int max_depth, int max_children);
SimpleFunction random_function(const TreePtr& tree, int level, std::uint64_t seed);

}  // namespace mhls::lab
