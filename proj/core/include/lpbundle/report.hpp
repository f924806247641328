#pragma once

#include <string>

#include "lpbundle/types.hpp"

namespace lpbundle {

enum class StopReason {
  converged,
  budget_exceeded,
  unbounded,
  numerical_failure,
  backtrack_exhausted,
};

std::string to_string(StopReason r);
StopReason stop_reason_from_string(std::string_view s);

/// One result-table row. Fields mirror the benchmark table columns; times are
/// seconds, pb is the percentage of function evaluations spent backtracking.
struct RunReport {
  std::string problem;
  double f_val = 0.0;
  double error = 0.0;  // f_val - f_opt_ref
  long nf = 0;         // function (value) evaluations
  long se = 0;         // subgradient evaluations
  double pb = 0.0;
  long k = 0;  // major iterations
  long L = 0;  // minor iterations
  double wall_time = 0.0;
  double lp_time = 0.0;
  double delta_final = 0.0;
  long sh = 0;  // trust-region shrink count
  double a_final = 0.0;
  double a_min_final = 0.0;
  long au = 0;  // convexification updates
  std::string stop_reason;
};

/// Runtime-checkable consequences of the convergence theory, accumulated over
/// one run. The acceptance suite requires all violation counters to be zero.
struct RunDiagnostics {
  double max_identity_violation = 0.0;  // relative model-reduction identity error
  long identity_checks = 0;
  long negative_model_reduction_events = 0;
  long f_monotone_violations = 0;      // serious steps must strictly decrease f
  long z_monotone_violations = 0;      // null-step model optima must not decrease
  long a_min_monotone_violations = 0;  // a_min nondecreasing within a major iteration
  long e_i_negative_events = 0;        // E_i < -1e-12 at LP build time
  double min_e_i = 0.0;
  double max_a_min_observed = 0.0;
  long bundle_peak = 0;
};

struct RunResult {
  RunReport report;
  RunDiagnostics diag;
  Vec final_x;
};

}  // namespace lpbundle
