#pragma once

#include <iosfwd>
#include <string>

#include "cbo/theory.hpp"
#include "config.hpp"
#include "csv.hpp"

namespace cbo::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitTheory = 4,
};

/// Flat key/value rendering of a theory report; q is "infinite (sigma=0)" when undefined.
KeyValues theory_report_entries(const theory::TheoryReport& report);

/// Builds the report for a parsed config.
theory::TheoryReport theory_report_for(const RunConfig& cfg);

/// Executes `cbo run` for a parsed config: metrics.csv and summary.txt under cfg.outputs.
int run_simulation(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command-line entry point; argv[0] is the program name.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cbo::cli
