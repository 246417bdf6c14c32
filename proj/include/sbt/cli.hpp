#pragma once

#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sbt::cli {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;

constexpr int kSchemaVersion = 1;

struct VerifyOptions {
  std::optional<double> tol;  // replaces the primary tolerance of every check
  std::optional<int> n;
  std::optional<double> t;
  std::optional<int> kmax;
  std::vector<std::string> only;
};

struct CheckResult {
  std::string name;
  nlohmann::json params;
  nlohmann::json measured;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool pass = false;
};

std::vector<std::string> check_names();
// Throws ParseError for an unknown name.
CheckResult run_check(const std::string& name, const VerifyOptions& opt);
// Runs every check, or the ones listed in opt.only, in the order of check_names().
VerifyReport verify_all(const VerifyOptions& opt);

nlohmann::json to_json(const CheckResult& r);
nlohmann::json to_json(const VerifyReport& r);

// sbt <fock|hermite|twisted|group> <action> [flags], sbt verify <check|all> [flags]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbt::cli
