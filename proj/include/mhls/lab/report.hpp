#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhls/tree_io.hpp"

namespace mhls::lab {

/// One trial of an ensemble: the measured quantity and the bound it is held to.
struct TrialRow {
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  double ratio = 0.0;
  double bound = 0.0;
  bool pass = true;

  bool operator==(const TrialRow&) const = default;
};

/// Everything needed to re-evaluate the worst trial.
struct Witness {
  TreePtr tree;
  std::vector<SimpleFunction> functions;
  std::optional<AtomId> atom;
  double alpha = 0.5;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 42;
  double alpha = 0.5;               // fixed alpha, or the worst trial's alpha for sweeps
  std::optional<double> p;
  std::optional<double> q;
  std::size_t trials = 0;
  double worst_case = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::optional<Witness> witness;
  std::vector<TrialRow> rows;
  // Reported-only quantities (empirical constants, fitted slopes).
  std::map<std::string, double> metrics;
};

nlohmann::ordered_json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& doc);

nlohmann::ordered_json report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const nlohmann::json& doc);

/// Header experiment,seed,trial,ratio,bound,pass and one row per trial.
std::string report_to_csv(const ExperimentReport& r);

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view name);
std::string emit_report(const ExperimentReport& r, ReportFormat format);

/// Shortest round-trip decimal form of a double (as used in every report).
std::string format_double(double x);

}  // namespace mhls::lab
