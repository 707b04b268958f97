#include "cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mhls/lab/checks.hpp"
#include "mhls/lab/probes.hpp"
#include "mhls/lab/report.hpp"
#include "mhls/lab/search.hpp"
#include "mhls/lorentz.hpp"
#include "mhls/operators.hpp"
#include "mhls/rng.hpp"
#include "mhls/tree_io.hpp"

namespace mhls::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCheckFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExponentFlags {
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<double> q;

  void attach(CLI::App& app) {
    app.add_option("--alpha", alpha, "fractional order in (0, 1)");
    app.add_option("--p", p, "source exponent");
    app.add_option("--q", q, "target exponent; derived from alpha and p when omitted");
  }

  // alpha + p, or p + q, or all three (validated).
  std::optional<Exponents> full() const {
    if (alpha && p && q) return Exponents::checked(*alpha, *p, *q);
    if (alpha && p) return Exponents::from_alpha_p(*alpha, *p);
    if (p && q) return Exponents::from_p_q(*p, *q);
    if (q) throw UsageError("--q needs --p");
    return std::nullopt;
  }

  Exponents require_full() const {
    if (auto e = full()) return *e;
    throw UsageError("need --alpha with --p, or --p with --q");
  }

  double require_alpha() const {
    if (auto e = full()) return e->alpha;
    if (alpha) return check_alpha(*alpha);
    throw UsageError("need --alpha");
  }
};

struct TreeFlags {
  std::string kind = "random";
  int depth = 4;
  int m = 2;
  std::vector<double> chain;
  std::uint64_t seed = 42;
  int max_children = 3;
  double min_ratio = 0.1;
  double stop = 0.0;

  void attach(CLI::App& app, bool with_depth = true) {
    app.add_option("--tree-kind", kind, "dyadic, uniform, chain or random")
        ->check(CLI::IsMember({"dyadic", "uniform", "chain", "random"}));
    if (with_depth) app.add_option("--depth", depth, "tree depth")->check(CLI::NonNegativeNumber);
    app.add_option("--m", m, "branching of a uniform tree");
    app.add_option("--chain", chain, "chain probabilities r_0 = 1 > r_1 > ...")->delimiter(',');
    app.add_option("--max-children", max_children, "random trees: most children per atom");
    app.add_option("--min-ratio", min_ratio, "random trees: smallest child / parent mass");
    app.add_option("--stop", stop, "random trees: chance an atom stops splitting");
  }

  TreeSpec spec() const {
    if (kind == "dyadic") return tree_spec::Dyadic{depth};
    if (kind == "uniform") return tree_spec::Uniform{m, depth};
    if (kind == "chain") {
      if (chain.empty()) throw UsageError("--tree-kind chain needs --chain");
      return tree_spec::Chain{chain};
    }
    return tree_spec::Random{seed, depth, max_children, min_ratio, stop};
  }
};

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    write_text_file(path, text);
  }
}

lab::ReportFormat format_for(const std::string& format, const std::string& path) {
  if (!format.empty()) return lab::parse_report_format(format);
  return path.ends_with(".json") ? lab::ReportFormat::Json : lab::ReportFormat::Csv;
}

std::string fixed5(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", x);
  return buf;
}

std::string bracketed(const SimpleFunction& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ", ";
    s += fixed5(f[i]);
  }
  return s + "]";
}

void write_witness(const std::string& prefix, const lab::Witness& w) {
  write_text_file(prefix + ".tree.json", serialize_tree(*w.tree));
  for (std::size_t i = 0; i < w.functions.size(); ++i) {
    const std::string suffix = w.functions.size() == 1 ? ".fn.json" : ".fn" + std::to_string(i) + ".json";
    write_text_file(prefix + suffix, serialize_function(w.functions[i]));
  }
}

void summary(std::ostream& err, const lab::ExperimentReport& r) {
  err << r.experiment << ": " << r.rows.size() << " trials, worst " << lab::format_double(r.worst_case)
      << ", tolerance " << lab::format_double(r.tolerance) << ", " << (r.pass ? "PASS" : "FAIL") << '\n';
}

// Subcommands.

struct GenFlags {
  TreeFlags tree;
  std::string out;
  std::string fn_out;
};

int do_gen(const GenFlags& g, std::ostream& out) {
  const auto tree = build_tree(g.tree.spec());
  write_or_print(g.out, serialize_tree(*tree), out);
  if (!g.fn_out.empty()) {
    const auto f = lab::random_function(tree, tree->depth(), derive_seed(g.tree.seed, 1));
    write_text_file(g.fn_out, serialize_function(f));
  }
  return kOk;
}

struct ApplyFlags {
  std::string op = "ia";
  ExponentFlags exps;
  std::string tree;
  std::string fn;
  bool ratio = false;
  std::string out;
  std::string format;
};

int do_apply(const ApplyFlags& a, std::ostream& out) {
  const auto kind = parse_operator_kind(a.op);
  const auto tree = deserialize_tree(read_text_file(a.tree));
  const auto f = deserialize_function(tree, read_text_file(a.fn));
  if (a.ratio) {
    const auto e = a.exps.require_full();
    out << lab::format_double(lab::search_objective(kind, f, e)) << '\n';
    return kOk;
  }
  const auto result = apply(kind, f, a.exps.require_alpha());
  if (!a.out.empty()) write_text_file(a.out, serialize_function(result));
  if (a.format == "json") {
    out << serialize_function(result) << '\n';
  } else {
    out << bracketed(result) << '\n';
  }
  return kOk;
}

struct CheckFlags {
  std::string name;
  TreeFlags tree;
  ExponentFlags exps;
  std::vector<double> alphas;
  std::size_t trials = 1000;
  std::optional<double> tol;
  std::string out;
  std::string format;
  std::string witness;
  // Single-witness mode.
  std::string tree_file;
  std::vector<std::string> fn_files;
  std::optional<AtomId> atom;
};

int check_single(const CheckFlags& c, const lab::Experiment& e, std::ostream& out) {
  lab::Witness w;
  w.tree = deserialize_tree(read_text_file(c.tree_file));
  for (const auto& path : c.fn_files) w.functions.push_back(deserialize_function(w.tree, read_text_file(path)));
  w.atom = c.atom;
  w.alpha = c.exps.require_alpha();
  const auto outcome = e.evaluate(w, c.tol.value_or(e.default_tolerance));
  out << "ratio " << lab::format_double(outcome.ratio) << " bound " << lab::format_double(outcome.bound) << ' '
      << (outcome.pass ? "PASS" : "FAIL") << '\n';
  return outcome.pass || !e.hard ? kOk : kCheckFailed;
}

int do_check(const CheckFlags& c, std::ostream& out, std::ostream& err) {
  const auto& e = lab::experiment(c.name);
  if (!c.tree_file.empty()) return check_single(c, e, out);
  if (c.tree.kind != "random") throw UsageError("check ensembles draw random trees; use --tree for a fixed one");

  lab::EnsembleConfig cfg;
  cfg.trials = c.trials;
  cfg.seed = c.tree.seed;
  cfg.max_depth = c.tree.depth;
  cfg.max_children = c.tree.max_children;
  cfg.tolerance = c.tol;
  const auto full = c.exps.full();
  if (!c.alphas.empty()) {
    if (c.exps.alpha) throw UsageError("give either --alpha or --alphas");
    if (full) throw UsageError("--alphas cannot be combined with --p/--q");
    cfg.alphas.clear();
    for (double a : c.alphas) cfg.alphas.push_back(check_alpha(a));
  } else {
    cfg.alphas = {c.exps.require_alpha()};
  }
  if (full) cfg.p = full->p;

  auto report = lab::run_ensemble(e, cfg);
  if (full) {
    report.p = full->p;
    report.q = full->q;
  }
  write_or_print(c.out, lab::emit_report(report, format_for(c.format, c.out)), out);
  if (!c.witness.empty() && report.witness) write_witness(c.witness, *report.witness);
  summary(err, report);
  return report.pass ? kOk : kCheckFailed;
}

struct ProbeFlags {
  std::string name;
  ExponentFlags exps;
  int skews = 20;
  std::string out;
  std::string format;
};

int do_probe(const ProbeFlags& p, std::ostream& out, std::ostream& err) {
  auto full = p.exps.full();
  const Exponents e = full ? *full : lab::probe_exponents(p.exps.require_alpha());
  const bool sharp = p.name == "sharpness";
  const int first = sharp ? 1 : 2;
  if (p.skews < first + 1) throw UsageError("--skews must be at least " + std::to_string(first + 1));
  const auto skews = lab::dyadic_skews(first, p.skews);
  const auto report = sharp ? lab::sharpness_report(e, skews) : lab::unboundedness_report(e, skews);
  const auto sweep = sharp ? lab::sharpness_sweep(e, skews) : lab::unboundedness_sweep(e, skews);

  std::string text;
  if (format_for(p.format, p.out) == lab::ReportFormat::Json) {
    text = lab::emit_report(report, lab::ReportFormat::Json);
  } else {
    std::ostringstream csv;
    csv << "skew,ratio\n";
    for (std::size_t i = 0; i < sweep.skews.size(); ++i) {
      csv << lab::format_double(sweep.skews[i]) << ',' << lab::format_double(sweep.ratios[i]) << '\n';
    }
    text = csv.str();
  }
  write_or_print(p.out, text, out);
  err << report.experiment << ": p = " << lab::format_double(e.p) << ", q = " << lab::format_double(e.q);
  for (const auto& [key, value] : report.metrics) err << ", " << key << " " << lab::format_double(value);
  err << ", " << (report.pass ? "PASS" : "FAIL") << '\n';
  return report.pass ? kOk : kCheckFailed;
}

struct SearchFlags {
  std::string op = "ia";
  ExponentFlags exps;
  std::size_t budget = 10000;
  std::uint64_t seed = 42;
  int depth = 6;
  int max_children = 3;
  double min_ratio = 0.01;
  std::string out;
  std::string witness;
};

int do_search(const SearchFlags& s, std::ostream& out, std::ostream& err) {
  lab::SearchConfig cfg;
  cfg.kind = parse_operator_kind(s.op);
  if (auto e = s.exps.full()) cfg.exponents = *e;
  else if (s.exps.alpha) throw UsageError("search needs --p with --alpha");
  cfg.budget = s.budget;
  cfg.seed = s.seed;
  cfg.max_depth = s.depth;
  cfg.max_children = s.max_children;
  cfg.min_ratio = s.min_ratio;
  const auto report = lab::extremal_search(cfg);
  write_or_print(s.out, lab::emit_report(report, lab::ReportFormat::Json), out);
  if (!s.witness.empty() && report.witness) write_witness(s.witness, *report.witness);
  err << report.experiment << ": best ratio " << lab::format_double(report.worst_case) << " after "
      << report.trials << " evaluations\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Martingale fractional integration on finite filtration trees"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a tree as JSON");
  gen.tree.attach(*gen_cmd);
  gen_cmd->add_option("--seed", gen.tree.seed, "random tree seed");
  gen_cmd->add_option("--out", gen.out, "tree file (default stdout)");
  gen_cmd->add_option("--fn-out", gen.fn_out, "also write a random terminal function");

  ApplyFlags apply_flags;
  auto* apply_cmd = app.add_subcommand("apply", "apply an operator to a function");
  apply_cmd->add_option("--op", apply_flags.op, "i, tilde, ia or adjoint");
  apply_flags.exps.attach(*apply_cmd);
  apply_cmd->add_option("--tree", apply_flags.tree, "tree JSON")->required();
  apply_cmd->add_option("--fn", apply_flags.fn, "function JSON")->required();
  apply_cmd->add_flag("--ratio", apply_flags.ratio, "print ||Op f||_q / ||f||_p instead");
  apply_cmd->add_option("--out", apply_flags.out, "write the result as function JSON");
  apply_cmd->add_option("--format", apply_flags.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  CheckFlags check;
  auto* check_cmd = app.add_subcommand("check", "run a seeded check ensemble");
  check_cmd->add_option("name", check.name, "experiment id")->required()->check(CLI::IsMember(lab::experiment_ids()));
  check.tree.depth = 12;
  check.tree.attach(*check_cmd);
  check_cmd->add_option("--seed", check.tree.seed, "master seed");
  check.exps.attach(*check_cmd);
  check_cmd->add_option("--alphas", check.alphas, "several alphas, comma separated")->delimiter(',');
  check_cmd->add_option("--trials", check.trials, "instances per alpha");
  check_cmd->add_option("--tol", check.tol, "override the tolerance");
  check_cmd->add_option("--out", check.out, "report file (default stdout)");
  check_cmd->add_option("--format", check.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  check_cmd->add_option("--witness", check.witness, "write the worst instance to PREFIX.tree.json, PREFIX.fn*.json");
  check_cmd->add_option("--tree", check.tree_file, "evaluate one stored instance instead");
  check_cmd->add_option("--fn", check.fn_files, "function files of the stored instance");
  check_cmd->add_option("--atom", check.atom, "atom id of the stored instance");

  ProbeFlags probe;
  auto* probe_cmd = app.add_subcommand("probe", "sweep single-step martingales over shrinking skews");
  probe_cmd->add_option("name", probe.name, "sharpness or unbounded")
      ->required()
      ->check(CLI::IsMember({"sharpness", "unbounded"}));
  probe.exps.attach(*probe_cmd);
  probe_cmd->add_option("--skews", probe.skews, "smallest skew is 2^-K");
  probe_cmd->add_option("--out", probe.out, "output file (default stdout)");
  probe_cmd->add_option("--format", probe.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  SearchFlags search;
  auto* search_cmd = app.add_subcommand("search", "hill-climb for large ||Op f||_q / ||f||_p");
  search_cmd->add_option("--op", search.op, "i, tilde or ia");
  search.exps.attach(*search_cmd);
  search_cmd->add_option("--budget", search.budget, "objective evaluations");
  search_cmd->add_option("--seed", search.seed, "seed");
  search_cmd->add_option("--depth", search.depth, "tree depth");
  search_cmd->add_option("--max-children", search.max_children, "most children per atom");
  search_cmd->add_option("--min-ratio", search.min_ratio, "smallest child / parent mass");
  search_cmd->add_option("--out", search.out, "report JSON (default stdout)");
  search_cmd->add_option("--witness", search.witness, "write PREFIX.tree.json and PREFIX.fn.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return do_gen(gen, out);
    if (*apply_cmd) return do_apply(apply_flags, out);
    if (*check_cmd) return do_check(check, out, err);
    if (*probe_cmd) return do_probe(probe, out, err);
    if (*search_cmd) return do_search(search, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mhls::cli
