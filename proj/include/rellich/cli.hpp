#pragma once

// Command-line front end: argument parsing, command execution and the
// JSON / CSV report documents.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rellich/error.hpp"

namespace rellich::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

class UsageError : public Error {
 public:
  using Error::Error;
};

/// --help was given; what() holds the help text.
class HelpRequested : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class Format { json, csv };

struct RunConfig {
  /// check-pair, scan, verify, chain, solve-bessel, estimate or catalog.
  std::string command;
  /// list or show, for the catalog command.
  std::string action;

  // Pair source: a catalog id or inline DSL expressions, never both.
  std::optional<std::string> catalog;
  /// Spec role within the entry; empty selects the command's default role.
  std::string role;
  std::optional<std::string> H, V, v, G, W, w, z, Z;
  bool signed_potential = false;

  std::optional<int> n;
  std::optional<double> kappa, R, lambda;
  std::optional<int> k;
  std::optional<double> c;

  std::string target;  // scan: E1, E2, V, W, Z or expr
  std::optional<std::string> expr;
  std::string shape;   // verify / estimate; empty selects the spec's first shape

  int grid = 10000;
  double tol = 1e-9;
  double lo = 0.0, hi = 0.0;  // 0 selects the default scan interval
  double quad_tol = 1e-10;
  int tests = 50;
  std::uint64_t seed = 42;
  std::vector<int> modes{0};
  int budget = 500;
  std::optional<double> claimed;
  int mode = 0;  // estimate
  double depth = 1e8;  // solve-bessel: integration starts at R exp(-depth)
  bool parallel = true;

  std::string output;  // empty writes to stdout
  Format format = Format::json;
  /// Timestamp written into the report; empty uses the current UTC time.
  std::string timestamp;

  nlohmann::ordered_json to_json() const;
};

/// `args` excludes the program name. Throws UsageError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);
/// Help text for the whole program.
std::string usage();

struct ScanRow {
  std::string target;
  std::string verdict;
  double min = 0.0;
  double argmin = 0.0;
  std::optional<double> boundary_limit_R;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  bool operator==(const ScanRow&) const = default;
};

struct TestRow {
  std::string id;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double lhs = 0.0, rhs = 0.0, margin = 0.0, budget = 0.0;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  bool operator==(const TestRow&) const = default;
};

struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  int n = 0;
  double kappa = 0.0;
  std::optional<double> R;  // absent for an unbounded domain
  std::vector<ScanRow> scans;
  std::vector<TestRow> tests;
  std::string verdict;  // pass, fail or inconclusive
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string case_id;
  std::vector<std::string> notes;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  bool operator==(const Report&) const = default;
};

/// Throws UsageError for an incoherent configuration and rellich::Error
/// subclasses for numerical failures.
Report execute(const RunConfig& cfg);

std::string format_report(const Report& r, Format f);
/// Inverse of format_report(r, Format::json). Throws UsageError on malformed input.
Report parse_report(std::string_view json);
int exit_code(const Report& r);

/// Writes `text` to `path` through a temporary file and a rename. Throws IoError.
void write_atomic(const std::string& path, const std::string& text);

/// Full program: parse, execute, emit. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rellich::cli
