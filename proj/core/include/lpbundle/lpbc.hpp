#pragma once

#include "lpbundle/bundle_model.hpp"
#include "lpbundle/problems.hpp"
#include "lpbundle/report.hpp"

namespace lpbundle {

/// Trust-region parameters. eta2 is accepted for completeness but unused by
/// the update rule.
struct TrustRegionParams {
  double eta1 = 1e-4;
  double eta2 = 0.0;
  double eta3 = 0.4;
  double alpha1 = 0.25;
  double alpha2 = 2.0;
  double delta_max = 1000.0;
  double delta0 = 1.0;

  void validate() const;
};

enum class Delta0Strategy { fixed, scaled_subgrad };  // delta0 or |s0|_2 / 10

struct Budget {
  long max_lp_solves = 100000;
  long max_fevals = 200000;
  double unbounded_floor = -1e15;
};

/// Achieved-vs-predicted reduction ratio. Throws DivisionGuard when the model
/// reduction is nonpositive (the stopping test should have fired first).
double rho(double f_center, double f_trial, double z_star);

/// True when f_center - z_star <= (1 + |f_center|) * eps_tol.
bool stopping_test(double f_center, double z_star, double eps_tol);

/// Trust-region update: grow when the step was good and nearly hit the
/// boundary, shrink on a sharply failed step, keep otherwise.
double update_trust_region(double delta, double rho_value, double step_inf_norm,
                           const TrustRegionParams& params);

struct LpbcOptions {
  TrustRegionParams trust;
  Delta0Strategy delta0_strategy = Delta0Strategy::fixed;
  double eps_tol = 1e-6;
  int inactive_threshold = 30;  // T
  Budget budget;
  ToleranceConfig lp_tol;
};

/// The convex LP-bundle loop.
RunResult run_lpbc(const Problem& problem, const LpbcOptions& opt);

}  // namespace lpbundle
