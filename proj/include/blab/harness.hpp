#pragma once

// Runs one configured experiment into a fresh directory:
//   <root>/<kind>-YYYYmmdd-HHMMSS[-k]/
//     config.ini        full config as run
//     diagnostics.csv   one row per (eps, n, t) or per (eps, n)
//     oracles.csv       oracle-suite only
//     summary.json      fitted slopes, ratios, assertion outcomes, timings
//     checkpoints/      final (or last good) states
// CSV rows are written and flushed as they are produced, so a failed run
// keeps what it had.

#include <iosfwd>
#include <string>
#include <vector>

#include "blab/config.hpp"

namespace blab {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunOutcome {
  std::string dir;
  std::vector<Assertion> assertions;
  /// empty unless the run aborted
  std::string error;
  bool ok() const;
};

/// BLAB_OUTPUT_ROOT, or "runs" when unset.
std::string output_root();

/// Creates a unique timestamped directory under root.
std::string make_run_dir(const std::string& root, const std::string& kind);

/// log receives one progress line per run.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& root, std::ostream& log);

}  // namespace blab
