#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "corrwalk/fgn.hpp"
#include "corrwalk/p_sampler.hpp"
#include "corrwalk/walk.hpp"

namespace corrwalk::cli {

struct ValidationOptions {
  HurstModel model = HurstModel::brownian();
  WalkMode mode = WalkMode::paper;
  InfeasiblePolicy policy = InfeasiblePolicy::resample;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::int64_t steps = 1024;        ///< N for aggregate runs
  std::int64_t paths = 64;          ///< M for aggregate runs
  std::int64_t runs = 200;          ///< independent aggregate runs
  std::int64_t chain_steps = 1'000'000;
  std::int64_t draws = 20'000;      ///< sample_p draws for the KS check
  std::int64_t oracle_steps = 1024;
  std::int64_t oracle_paths = 200;
};

struct ValidationItem {
  std::string suite;
  std::string name;
  bool hard = true;  ///< soft items are reported but never fail the run
  bool passed = true;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// A measured quantity set beside the value the construction's formulas
/// predict for it.
struct DiscrepancyEntry {
  std::string name;
  double formula = 0.0;
  double measured = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  std::vector<DiscrepancyEntry> discrepancies;
  double sigma_max = 0.0;
  double u_max = 0.0;

  bool passed() const;
};

ValidationReport run_validation(const ValidationOptions& options);

void print_report_text(std::ostream& out, const ValidationReport& report);
void print_report_json(std::ostream& out, const ValidationReport& report);

}  // namespace corrwalk::cli
