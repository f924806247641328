#pragma once

#include "lpbundle/lpbc.hpp"

namespace lpbundle {

struct LpbncParams {
  TrustRegionParams trust;
  double beta = 0.7;    // backtrack factor, in (0,1)
  double gamma = 2.0;   // convexification growth, in [2,10]
  double sigma = 2.0;   // decrease trigger, >= 1
  double alpha3 = 0.5;  // level-bound relaxation, in (0,1)
  double eps_tol = 1e-5;

  void validate() const;
};

struct BacktrackResult {
  Vec point;
  double value = 0.0;
  long evals = 0;  // value evaluations spent in the while loop
};

/// Shrinks the step x_k -> trial geometrically until the value drops to the
/// level bound: returns x_k + beta^j (trial - x_k) for the smallest j >= 1
/// with f <= f_u. Throws BacktrackExhausted past max_steps.
BacktrackResult backtrack(const Vec& x_k, double f_u, const Vec& trial, double beta,
                          const Problem& problem, int max_steps = 200);

/// Convexification update: raise a onto [a_min, inf) when it fell below,
/// pull it halfway back when it overshoots sigma * a_min.
std::pair<double, bool> update_a(double a, double a_min, double gamma, double sigma);

/// Level-bound relaxation after a serious step.
double update_f_u(double f_u, double f_new_center, double alpha3);

struct LpbncOptions {
  LpbncParams params;
  Delta0Strategy delta0_strategy = Delta0Strategy::fixed;
  Budget budget;
  ToleranceConfig lp_tol;
  int max_backtrack_steps = 200;
};

/// The nonconvex loop: on-the-fly convexification, backtracking, level-bound
/// management.
RunResult run_lpbnc(const Problem& problem, const LpbncOptions& opt);

}  // namespace lpbundle
