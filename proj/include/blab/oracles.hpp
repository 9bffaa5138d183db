#pragma once

// Cross-checks with pinned tolerances. Each returns the worst measured value
// and whether it is within tol. Used by `blab check`, the oracle-suite
// experiment and the acceptance binary.

#include <string>
#include <vector>

namespace blab {

struct OracleResult {
  std::string name;
  bool pass = false;
  /// worst measured quantity (meaning given in detail)
  double value = 0;
  double tol = 0;
  std::string detail;
  double seconds = 0;
};

/// decompose o reconstruct and reconstruct o decompose on random states.
OracleResult oracle_round_trip(int states = 100, int N = 16);
/// rhs_primitive against rhs_qxf through the decomposition, random forcing.
OracleResult oracle_equivalence(int states = 50, int N = 16);
/// |<W, skew(W)>| / |W|_0^2 at eps in {1, 1e-2, 1e-4}.
OracleResult oracle_skew_energy(int states = 50, int N = 16);
/// Balance tangents against central differences, eps = 1e-3, n <= 3.
OracleResult oracle_tangent(int directions = 5, int N = 16);
/// Dual residual agreement for n <= n* on a random forced slow state.
OracleResult oracle_dual(double eps, int N);

/// Parity after 100 steps, exact zero mean, mode_split orthogonality,
/// Gevrey tail bound, f = 0 energy monotonicity.
std::vector<OracleResult> oracle_invariants(int N = 12);

struct OracleSuiteOptions {
  int N = 16;
  /// fewer states and directions (for `blab check --quick` and unit tests)
  bool quick = false;
};

std::vector<OracleResult> run_oracle_suite(const OracleSuiteOptions& opt = {});

/// "PASS name: value <= tol (detail)"
std::string format_result(const OracleResult& r);

}  // namespace blab
