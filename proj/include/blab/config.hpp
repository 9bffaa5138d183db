#pragma once

// Run configuration. Text format:
//
//   # comment
//   [grid]
//   N = 16
//   [schedule]
//   eps = 0.1, 0.05      <- a list is a sweep
//   sigma = 0.5
//   [forcing]
//   kind = none
//   [experiment]
//   kind = residual-decay
//
// Every key has a default except schedule.eps. Unknown sections or keys,
// duplicates and malformed values are rejected with the line number.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blab/decomposition.hpp"
#include "blab/schedule.hpp"

namespace blab {

struct ExperimentConfig {
  // [grid]
  int N = 16;
  /// box length, the same along each axis
  double L = 0;  // 0: 2 pi
  double dealias = 2.0 / 3.0;

  // [schedule]
  std::vector<double> eps;
  double sigma = 0.5;
  double mu = 0.05;
  double s = 2;
  std::optional<double> kappa;

  // [forcing]
  std::string forcing = "none";  // none | shear | random
  double forcing_amplitude = 0.3;
  std::uint64_t forcing_seed = 1;
  double forcing_decay = 0.5;

  // [experiment]
  std::string kind = "residual-decay";  // residual-decay | balance-error | oracle-suite
  std::string initial = "dipole";       // zonal | dipole | random-gevrey
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  double decay = 0.5;
  /// balance-error: initialization levels; residual-decay: max of the list
  /// is n_max. Empty means n* of each eps.
  std::vector<int> n;
  std::string mode = "automatic";  // automatic | numeric | formal
  bool dual = true;
  double t_end = 1.0;
  int samples = 10;
  double dt_pe = 0;
  double dt_qg = 0.01;
  bool quick = false;
  bool assertions = true;
  bool checkpoints = true;

  /// "section.key" for every key given in the text, in order
  std::vector<std::string> explicit_keys;

  Grid grid() const;
  /// Schedule for one sweep value, with the kappa override applied.
  Schedule schedule(double eps_value) const;
  ForcingSet forcing_set(const Grid& g) const;
  SpectralField initial_q(const Grid& g) const;
  /// Levels for one eps (n*, or the configured list).
  std::vector<int> levels(const Schedule& sch) const;
  bool is_explicit(const std::string& key) const;
};

/// Parses and validates. Errors name the source and line: "cfg:12: ...".
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

/// Full config with every default spelled out and derived schedule values
/// as comments. parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& c);

/// Cross-field checks (even N, eps and sigma ranges, n <= n*, band fits the
/// grid, non-empty sweep). parse_config calls it.
void validate_config(const ExperimentConfig& c);

}  // namespace blab
