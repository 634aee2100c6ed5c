#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrwalk/aggregator.hpp"
#include "corrwalk/fgn.hpp"
#include "corrwalk/p_sampler.hpp"
#include "corrwalk/walk.hpp"

namespace corrwalk::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitValidation = 4,
};

/// Raised for invalid flags, unreadable files and malformed input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV input; `line` is 1-based.
class ParseError : public ConfigError {
 public:
  ParseError(std::int64_t line, const std::string& what);
  std::int64_t line() const noexcept { return line_; }

 private:
  std::int64_t line_;
};

enum class OutputFormat { csv, json, text };

struct RunConfig {
  std::string command;
  double hurst = 0.7;
  std::int64_t steps = 1024;
  std::int64_t paths = 256;
  std::uint64_t seed = 1;
  std::string mode = "paper";  ///< paper | matched | enriquez | gaussian-oracle
  InfeasiblePolicy infeasible = InfeasiblePolicy::resample;
  bool shared_p = false;
  unsigned workers = 1;
  std::string out;
  OutputFormat format = OutputFormat::csv;
  bool raw_levels = false;
};

/// HurstModel for a CLI value: 0.5 maps to the Brownian special case,
/// anything outside (1/2, 1) is a ConfigError.
HurstModel model_from_flag(double hurst);

/// Fixed 12-significant-digit rendering used for the t column.
std::string format_time(double t);
/// Shortest decimal string that parses back to the same double.
std::string format_value(double v);

/// Writes `t,value` CSV (N + 1 rows after the header).
void write_path_csv(std::ostream& out, const std::vector<double>& times,
                    const std::vector<double>& values);

struct PathTable {
  std::vector<double> first;   ///< t (or k for raw exports)
  std::vector<double> values;
};

/// Reads a file in the generate schema. Accepts the `t,value` and
/// `k,level` headers. Throws ParseError with the offending line number.
PathTable read_path_csv(std::istream& in);

/// Result of one generate run, before serialization.
struct GeneratedPath {
  std::vector<double> first;
  std::vector<double> values;
  std::optional<RunStats> stats;  ///< absent for the gaussian-oracle mode
  double seconds = 0.0;
};

/// Runs the generator described by `config` (mode may be gaussian-oracle).
GeneratedPath generate(const RunConfig& config);

/// Entry point shared by the executable and the tests. Never throws; errors
/// are reported as one JSON line on `err` and mapped to an exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace corrwalk::cli
