#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cubiclab/evolve.hpp"
#include "cubiclab/experiments.hpp"
#include "cubiclab_cli/config.hpp"

namespace cubiclab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitBlowUp = 3,
  kExitIo = 4,
};

/// What an experiment produced before anything is written to disk.
struct Outcome {
  EvolutionTrace trace;
  std::vector<FitReport> reports;
  std::vector<ComplexField> profiles;  // soliton profiles, written as profile.csv
  bool blew_up = false;
};

/// Runs the configured experiment in memory. Library errors propagate.
Outcome execute(const RunConfig& cfg);

/// Header plus one row per trace row; optional columns are left empty.
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace);
std::string report_json(const RunConfig& cfg, const Outcome& outcome);

struct RunOptions {
  bool quiet = false;
  std::string version = "0.1.0";
};

/// Executes the config and writes trace.csv, report.json and manifest.json to
/// cfg.output_dir. Returns an ExitCode.
int run_command(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);

}  // namespace cubiclab::cli
