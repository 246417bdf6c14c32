#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "sbt/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run sbt_run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"sbt"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  Run r;
  r.code = sbt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sbt_test_" + name)).string();
}

}  // namespace

TEST_CASE("radial sequence as CSV") {
  auto r = sbt_run({"fock", "radial-seq", "--n", "1", "--t", "0", "--symbol", "gauss-radial:a=1.0", "--kmax", "40"});
  CHECK(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 42);
  CHECK(ls[0] == "k,value_re,value_im,abs");
  CHECK(ls[2].rfind("1,0.25,", 0) == 0);
  CHECK(r.err == "verdict=Bounded ratio≈0.5\n");

  std::string path = temp_path("seq.csv");
  auto w = sbt_run({"fock", "radial-seq", "--symbol", "gauss-radial:a=1.0", "--kmax", "40", "--out", path.c_str()});
  CHECK(w.code == 0);
  CHECK(w.out == "verdict=Bounded ratio≈0.5\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == r.out);
  std::filesystem::remove(path);
}

TEST_CASE("verify identity37 and example36") {
  auto r = sbt_run({"verify", "identity37", "--n", "1", "--t", "0.1", "--kmax", "20", "--tol", "1e-6"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  for (const char* key : {"schema_version", "check", "params", "measured", "tolerance", "pass"}) CHECK(j.contains(key));
  CHECK(j["check"] == "identity37");
  CHECK(j["measured"]["kappa"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(j["measured"]["max_rel_err"].get<double>() < 1e-6);
  CHECK(j["pass"] == true);

  auto e = sbt_run({"hermite", "example36", "--alpha", "0.1", "--t", "0.25"});
  CHECK(e.code == 0);
  json ej = json::parse(e.out);
  CHECK(ej["verdict"] == "Unbounded");
  CHECK(ej.contains("lambda"));
  CHECK(ej["ratio"]["re"].get<double>() > 1.0);
}

TEST_CASE("verify filters and tolerance override") {
  CHECK(sbt::cli::check_names().size() >= 14);
  auto r = sbt_run({"verify", "all", "--only", "identity37,lemma43"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][0]["check"] == "identity37");
  CHECK(j["checks"][1]["check"] == "lemma43");

  auto bad = sbt_run({"verify", "all", "--only", "identity37,lemma43", "--tol", "1e-15"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("identity37") != std::string::npos);
  CHECK(sbt_run({"verify", "all", "--only", "nope"}).code == 2);
  CHECK(sbt_run({"verify", "nope"}).code == 2);
}

TEST_CASE("exit codes") {
  CHECK(sbt_run({}).code == 2);
  CHECK(sbt_run({"banach", "x"}).code == 2);
  CHECK(sbt_run({"fock", "radial-seq"}).code == 2);
  CHECK(sbt_run({"fock", "radial-seq", "--symbol", "bogus"}).code == 2);
  CHECK(sbt_run({"fock", "radial-seq", "--symbol", "one", "--format", "xml"}).code == 2);
  CHECK(sbt_run({"fock", "nope", "--symbol", "one"}).code == 2);
  CHECK(sbt_run({"hermite", "multiplier", "--symbol", "gauss-h:c=2", "--t", "-1"}).code == 2);
  CHECK(sbt_run({"group", "multiplier", "--symbol", "one"}).code == 3);
  CHECK(sbt_run({"twisted", "diag-seq", "--symbol", "gauss-radial:a=-0.9", "--t", "2"}).code == 3);
  CHECK(sbt_run({"--help"}).code == 0);
}

TEST_CASE("group sweeps") {
  auto r = sbt_run({"group", "criterion", "--symbol", "one", "--t", "0.25", "--count", "12"});
  CHECK(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 13);
  CHECK(ls[0] == "lambda,value,bound_ratio");
  CHECK(ls[1].substr(ls[1].rfind(',') + 1) == "1");
  CHECK(r.err.find("verdict=Bounded") == 0);

  auto m = sbt_run({"group", "multiplier", "--symbol", "group-gauss:b=1", "--count", "4", "--format", "json"});
  CHECK(m.code == 0);
  json j = json::parse(m.out);
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][3]["bound_ratio"].get<double>() > 1.0);
}

TEST_CASE("config file supplies defaults") {
  std::string path = temp_path("config.ini");
  {
    std::ofstream f(path);
    f << "n = 2\nkmax = 5\nsymbol = gauss-radial:a=1\n";
  }
  auto r = sbt_run({"fock", "radial-seq", "--config", path.c_str()});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 7);
  auto j = sbt_run({"fock", "radial-seq", "--config", path.c_str(), "--kmax", "3", "--format", "json"});
  json jj = json::parse(j.out);
  CHECK(jj["params"]["n"] == 2);
  CHECK(jj["entries"].size() == 4);
  std::filesystem::remove(path);
}

TEST_CASE("output is deterministic across thread counts") {
  auto a = sbt_run({"twisted", "diag-seq", "--symbol", "gauss-radial:a=2", "--kmax", "30", "--threads", "1"});
  auto b = sbt_run({"twisted", "diag-seq", "--symbol", "gauss-radial:a=2", "--kmax", "30", "--threads", "4"});
  auto c = sbt_run({"twisted", "diag-seq", "--symbol", "gauss-radial:a=2", "--kmax", "30", "--threads", "4"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);
  auto v1 = sbt_run({"verify", "all", "--only", "group-relation,criterion55", "--threads", "2"});
  auto v2 = sbt_run({"verify", "all", "--only", "group-relation,criterion55", "--threads", "2"});
  CHECK(v1.out == v2.out);
}
