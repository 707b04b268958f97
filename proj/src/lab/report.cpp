#include "mhls/lab/report.hpp"

#include <charconv>
#include <sstream>

namespace mhls::lab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json witness_to_json(const Witness& w) {
  nlohmann::ordered_json out;
  out["tree"] = tree_to_json(*w.tree);
  auto& fns = out["functions"] = nlohmann::ordered_json::array();
  for (const auto& f : w.functions) fns.push_back(function_to_json(f));
  if (w.atom) out["atom"] = *w.atom;
  out["alpha"] = w.alpha;
  return out;
}

Witness witness_from_json(const nlohmann::json& doc) {
  try {
    Witness w;
    w.tree = tree_from_json(doc.at("tree"));
    for (const auto& f : doc.at("functions")) w.functions.push_back(function_from_json(w.tree, f));
    if (doc.contains("atom")) w.atom = doc.at("atom").get<AtomId>();
    w.alpha = doc.at("alpha").get<double>();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
  nlohmann::ordered_json out;
  out["experiment"] = r.experiment;
  out["seed"] = r.seed;
  out["alpha"] = r.alpha;
  if (r.p) out["p"] = *r.p;
  if (r.q) out["q"] = *r.q;
  out["trials"] = r.trials;
  out["worst_case"] = r.worst_case;
  out["tolerance"] = r.tolerance;
  out["pass"] = r.pass;
  if (r.witness) out["witness"] = witness_to_json(*r.witness);
  auto& metrics = out["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  auto& rows = out["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"seed", row.seed},
                    {"trial", row.trial},
                    {"ratio", row.ratio},
                    {"bound", row.bound},
                    {"pass", row.pass}});
  }
  return out;
}

ExperimentReport report_from_json(const nlohmann::json& doc) {
  try {
    ExperimentReport r;
    r.experiment = doc.at("experiment").get<std::string>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.alpha = doc.at("alpha").get<double>();
    if (doc.contains("p")) r.p = doc.at("p").get<double>();
    if (doc.contains("q")) r.q = doc.at("q").get<double>();
    r.trials = doc.at("trials").get<std::size_t>();
    r.worst_case = doc.at("worst_case").get<double>();
    r.tolerance = doc.at("tolerance").get<double>();
    r.pass = doc.at("pass").get<bool>();
    if (doc.contains("witness")) r.witness = witness_from_json(doc.at("witness"));
    for (const auto& [k, v] : doc.at("metrics").items()) r.metrics[k] = v.get<double>();
    for (const auto& row : doc.at("rows")) {
      r.rows.push_back({row.at("seed").get<std::uint64_t>(), row.at("trial").get<std::size_t>(),
                        row.at("ratio").get<double>(), row.at("bound").get<double>(),
                        row.at("pass").get<bool>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string report_to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "experiment,seed,trial,ratio,bound,pass\n";
  for (const auto& row : r.rows) {
    out << r.experiment << ',' << row.seed << ',' << row.trial << ',' << format_double(row.ratio)
        << ',' << format_double(row.bound) << ',' << (row.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error(ErrorCode::InvalidSpec, "report format must be csv or json");
}

std::string emit_report(const ExperimentReport& r, ReportFormat format) {
  if (format == ReportFormat::Csv) return report_to_csv(r);
  return report_to_json(r).dump(2) + "\n";
}

}  // namespace mhls::lab
