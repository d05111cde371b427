#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asympair/errors.hpp"
#include "asympair/report.hpp"

namespace asympair {

enum class OutputFormat { human, json };

/// Options of one command line. Options a command does not read are left at
/// their defaults and still echoed into the report.
struct RunConfig {
  std::string command;

  // Inputs.
  std::vector<std::string> seqs;
  std::vector<std::string> seq_files;
  /// Tail model for CSV tables ("geometric:C,rho", "power:C,s", "finite:p",
  /// "unknown"); mandatory with --seq-file.
  std::optional<std::string> tail;
  std::optional<std::string> space;
  std::optional<std::string> pair;
  /// classify: subset of tests to run instead of the cascade.
  std::vector<std::string> tests;
  /// kummer auxiliary sequence c.
  std::optional<std::string> kummer_c;

  // Equation Δ^m x_n = a_n f(x_σ(n)) + b_n.
  int m = 1;
  std::string a = "0";
  std::string b = "0";
  std::string f = "x";
  std::string sigma = "n";
  std::vector<double> init;
  /// construct: target y. verify: comparison sequence.
  std::optional<std::string> y;
  std::optional<std::string> y_file;
  /// verify: the sequence under test.
  std::optional<std::string> x;
  std::optional<std::string> x_file;
  /// pairs: sequence for check_pair_instance.
  std::optional<std::string> check;

  // Numbers.
  std::optional<double> t;
  std::optional<double> s;
  std::optional<double> lambda;
  bool big_o = false;
  std::optional<double> M;
  Index p = 1;
  /// Sample size (classify, verify, pairs) or horizon (solve, construct).
  std::optional<Index> N;
  std::optional<double> tol;
  double band = 0.05;
  int max_iter = 200;
  Index oracle_terms = 1'000'000;
  /// construct: indices whose value is reported.
  std::vector<Index> probes = {200};

  // Execution and output.
  int jobs = 1;
  OutputFormat format = OutputFormat::human;
  std::optional<std::string> out;
  /// solve, construct: trajectory CSV "n,x,y,diff,R".
  std::optional<std::string> csv;
};

/// Documented exit codes.
enum ExitCode : int {
  kExitOk = 0,
  /// A membership the command asserts came out NotInSpace.
  kExitNotInSpace = 1,
  /// Bad command line, DSL, file or parameter.
  kExitUsage = 2,
  /// Refused: a contract or precondition does not hold.
  kExitRefused = 3,
  /// An iteration did not converge.
  kExitNoConvergence = 4,
  /// Domain or overflow error during evaluation.
  kExitNumeric = 5,
};

Index default_N(const std::string& command);
std::optional<double> default_tol(const std::string& command);

/// Every option, with defaults resolved for the command.
Json config_json(const RunConfig& config);

// Each command fills items and exit_code; errors propagate as exceptions.
Report cmd_classify(const RunConfig& config);
Report cmd_solve(const RunConfig& config);
Report cmd_construct(const RunConfig& config);
Report cmd_verify(const RunConfig& config);
Report cmd_pairs(const RunConfig& config);

/// Dispatches on config.command, times the run and turns exceptions into an
/// error report with the matching exit code.
Report run_command(const RunConfig& config);

/// Parses argv (CLI11), runs the command and writes the report to --out or
/// `out`. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads "n,value" (or any header starting with "n,"; the second column is
/// used). Indices must be 1, 2, 3, ... Throws std::invalid_argument.
std::vector<double> read_csv_column(const std::string& path);

}  // namespace asympair
