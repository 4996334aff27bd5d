#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dpsqkd/table.hpp"
#include "dpsqkd/verify.hpp"

namespace dpsqkd {

enum class Command { Bound, Curve, Keyrate, Verify };
enum class ModelChoice { Comp, Sp, Both };
enum class Format { Csv, Json };

// Log-spaced grid written as "lo:hi:n".
struct LambdaGrid {
  double lo = 1e-3;
  double hi = 30.0;
  int n = 50;

  static LambdaGrid parse(const std::string& text);
  std::vector<double> values() const;
  std::string str() const;
};

struct RunConfig {
  Command command = Command::Bound;
  int L = 10;
  double e_b = 0.02;
  std::optional<int> nu;
  ModelChoice model = ModelChoice::Comp;
  double dist_start = 0.0;
  double dist_end = 100.0;
  double dist_step = 5.0;
  std::string out;
  Format format = Format::Csv;
  std::optional<LambdaGrid> lambda_grid;
  int eb_points = 501;
  int L_max = 16;
  int table_points = 16385;
  double canary = 0.0;
  std::optional<std::uint64_t> seed;  // accepted and ignored

  // Throws InvalidInput on a bad combination.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

Table cmd_bound(const RunConfig& cfg);
Table cmd_curve(const RunConfig& cfg);
Table cmd_keyrate(const RunConfig& cfg);

struct VerifyOutcome {
  Table table;
  VerifyReport report;
};
VerifyOutcome cmd_verify(const RunConfig& cfg);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the command and writes the table to cfg.out, or to `out` when no path
// is set. Diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dpsqkd
