#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "mhls/tree_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mhls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mhls::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "mhls_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("gen and apply on the dyadic example") {
  const auto dir = scratch();
  const auto tree = (dir / "tree.json").string();
  const auto fn = (dir / "f.json").string();
  REQUIRE(invoke({"gen", "--tree-kind", "dyadic", "--depth", "2", "--out", tree}).code == 0);
  mhls::write_text_file(fn, R"({"level":2,"values":[4,0,0,0]})");

  auto r = invoke({"apply", "--op", "ia", "--alpha", "0.5", "--p", "1.3333333333", "--tree", tree, "--fn", fn});
  CHECK(r.code == 0);
  CHECK(r.out == "[1.70711, -0.29289, -0.70711, -0.70711]\n");

  r = invoke({"apply", "--op", "i", "--alpha", "0.5", "--tree", tree, "--fn", fn});
  CHECK(r.out == "[2.41421, -0.41421, -1.00000, -1.00000]\n");

  r = invoke({"apply", "--op", "ia", "--p", "1.5", "--alpha", "0.5", "--q", "3", "--tree", tree, "--fn", fn});
  CHECK(r.code == 1);  // 1/1.5 - 1/3 != 0.5

  r = invoke({"apply", "--op", "ia", "--alpha", "0.5", "--tree", (dir / "missing.json").string(), "--fn", fn});
  CHECK(r.code == 1);
}

TEST_CASE("check writes one CSV row per trial") {
  const auto out = (scratch() / "dual.csv").string();
  const std::vector<std::string> args{"check", "duality", "--tree-kind", "random", "--depth", "8", "--trials", "50",
                                      "--alpha", "0.5", "--p", "1.3333333333", "--seed", "42", "--out", out};
  const auto r = invoke(args);
  CHECK(r.code == 0);
  const auto text = mhls::read_text_file(out);
  CHECK(text.starts_with("experiment,seed,trial,ratio,bound,pass\n"));
  CHECK(count_lines(text) == 51);
  REQUIRE(invoke(args).code == 0);
  CHECK(mhls::read_text_file(out) == text);
}

TEST_CASE("check failure exits 2") {
  // A negative slack pushes the bound below every ratio.
  const auto r = invoke({"check", "weak1", "--depth", "8", "--trials", "50", "--alpha", "0.5", "--tol", "-10"});
  CHECK(r.code == 2);
}

TEST_CASE("usage errors exit 1") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"check", "nonsense"}).code == 1);
  CHECK(invoke({"check", "duality"}).code == 1);  // no alpha
  CHECK(invoke({"probe", "unbounded", "--skews", "1", "--alpha", "0.5"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("witness files reproduce the reported ratio") {
  const auto dir = scratch();
  const auto prefix = (dir / "weak").string();
  const auto report_path = (dir / "weak.json").string();
  auto r = invoke({"check", "weak1", "--depth", "6", "--trials", "30", "--alpha", "0.5", "--out", report_path,
                   "--witness", prefix});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(mhls::read_text_file(report_path));
  const double worst = report.at("worst_case").get<double>();
  const auto atom = report.at("witness").at("atom").get<std::size_t>();
  r = invoke({"check", "weak1", "--alpha", report.at("alpha").dump(), "--tree", prefix + ".tree.json", "--fn",
              prefix + ".fn.json", "--atom", std::to_string(atom)});
  REQUIRE(r.code == 0);
  std::istringstream line(r.out);
  std::string word;
  double ratio = 0.0;
  line >> word >> ratio;
  CHECK(ratio == doctest::Approx(worst).epsilon(1e-9));

  const auto sprefix = (dir / "search").string();
  r = invoke({"search", "--op", "ia", "--alpha", "0.5", "--p", "1.3333333333", "--budget", "300", "--depth", "3",
              "--witness", sprefix});
  REQUIRE(r.code == 0);
  const auto sreport = nlohmann::json::parse(r.out);
  r = invoke({"apply", "--op", "ia", "--alpha", "0.5", "--p", "1.3333333333", "--ratio", "--tree",
              sprefix + ".tree.json", "--fn", sprefix + ".fn.json"});
  REQUIRE(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(sreport.at("worst_case").get<double>()).epsilon(1e-9));
}

TEST_CASE("probes") {
  auto r = invoke({"probe", "unbounded", "--alpha", "0.5", "--skews", "20"});
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("skew,ratio\n"));
  CHECK(count_lines(r.out) == 20);
  r = invoke({"probe", "sharpness", "--alpha", "0.25", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("pass").get<bool>());
}

TEST_CASE("unbounded probe at p = 4/3 misses the 5% slope band") {
  const auto r = invoke({"probe", "unbounded", "--alpha", "0.5", "--p", "1.3333333333", "--skews", "20", "--format",
                         "json"});
  CHECK(r.code == 2);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("metrics").at("slope").get<double>() == doctest::Approx(-0.52603).epsilon(1e-4));
  CHECK_FALSE(doc.at("pass").get<bool>());
}
