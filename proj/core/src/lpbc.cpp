#include "lpbundle/lpbc.hpp"

#include <algorithm>
#include <cmath>

#include "solver_detail.hpp"

namespace lpbundle {

void TrustRegionParams::validate() const {
  if (!(0 < eta1 && eta1 < eta3 && eta3 < 1))
    throw SolverError("trust region: need 0 < eta1 < eta3 < 1");
  if (!(0 < alpha1 && alpha1 < 1 && alpha2 > 1))
    throw SolverError("trust region: need 0 < alpha1 < 1 < alpha2");
  if (!(0 < delta0 && delta0 <= delta_max))
    throw SolverError("trust region: need 0 < delta0 <= delta_max");
}

double rho(double f_center, double f_trial, double z_star) {
  const double denom = f_center - z_star;
  if (!(denom > 0))
    throw DivisionGuard("rho: nonpositive model reduction (LP tolerance failure)");
  return (f_center - f_trial) / denom;
}

bool stopping_test(double f_center, double z_star, double eps_tol) {
  return f_center - z_star <= (1 + std::abs(f_center)) * eps_tol;
}

double update_trust_region(double delta, double rho_value, double step_inf_norm,
                           const TrustRegionParams& params) {
  if (rho_value > params.eta3 && step_inf_norm > 0.9 * delta)
    return std::min(params.alpha2 * delta, params.delta_max);
  if (rho_value < -1.0 / std::min(1.0, delta)) return params.alpha1 * delta;
  return delta;
}

namespace {

double initial_delta(Delta0Strategy strategy, const TrustRegionParams& trust, const Vec& s0) {
  if (strategy == Delta0Strategy::scaled_subgrad) {
    const double d = norm_2(s0) / 10.0;
    return std::clamp(d, 1e-12, trust.delta_max);
  }
  return trust.delta0;
}

}  // namespace

RunResult run_lpbc(const Problem& problem, const LpbcOptions& opt) {
  opt.trust.validate();
  if (opt.inactive_threshold < 20) throw SolverError("lpbc: inactive threshold T must be >= 20");

  const auto t_start = detail::Clock::now();
  detail::CountingOracle oracle{problem};
  RunResult out;
  RunDiagnostics& diag = out.diag;
  diag.min_e_i = std::numeric_limits<double>::infinity();

  Vec x_center = problem.x0;
  const OracleResponse r0 = oracle.value_and_subgrad(x_center);
  if (!r0.in_domain) throw SolverError("lpbc: initial point outside the domain");
  double f_center = r0.value;

  Bundle bundle;
  {
    BundleElement e{x_center, f_center, r0.subgrad, 0, 0, 0, true};
    bundle.add(std::move(e));
  }

  double delta = initial_delta(opt.delta0_strategy, opt.trust, r0.subgrad);
  long k = 0, minors = 0, sh = 0, lp_solves = 0;
  double lp_time = 0.0;
  StopReason reason = StopReason::converged;

  // null-step monotonicity guard state
  bool have_prev_solve = false;
  double prev_z = 0.0, prev_delta = 0.0;
  bool prev_prune_dropped = false;

  while (true) {
    if (lp_solves >= opt.budget.max_lp_solves || oracle.nf >= opt.budget.max_fevals) {
      reason = StopReason::budget_exceeded;
      break;
    }
    const std::vector<PlaneRow> rows = build_rows(bundle, x_center, 0.0);
    const auto t_lp = detail::Clock::now();
    const SubproblemSolution sol = solve_subproblem(rows, {x_center, delta}, opt.lp_tol);
    lp_time += detail::seconds_since(t_lp);
    ++lp_solves;
    diag.bundle_peak = std::max(diag.bundle_peak, static_cast<long>(bundle.size()));

    // Lemma 2 identity and E_i bookkeeping at every solve
    const ModelReductionCheck idc =
        model_reduction_identity(sol, bundle, x_center, f_center, 0.0, delta);
    diag.max_identity_violation =
        std::max(diag.max_identity_violation,
                 std::abs(idc.lhs - idc.rhs) / (1 + std::abs(idc.lhs)));
    ++diag.identity_checks;
    for (std::size_t i = 0; i < bundle.size(); ++i) {
      const double ei = linearization_error_convex(x_center, f_center, bundle[i]);
      diag.min_e_i = std::min(diag.min_e_i, ei);
    }

    const double model_red = f_center - sol.z_star;
    if (model_red < -1e-9 * (1 + std::abs(f_center))) ++diag.negative_model_reduction_events;

    if (have_prev_solve && !prev_prune_dropped && delta <= prev_delta &&
        sol.z_star < prev_z - 1e-9 * (1 + std::abs(prev_z)))
      ++diag.z_monotone_violations;

    if (stopping_test(f_center, sol.z_star, opt.eps_tol)) {
      reason = StopReason::converged;
      break;
    }
    if (oracle.nf >= opt.budget.max_fevals) {
      reason = StopReason::budget_exceeded;
      break;
    }

    const Vec& trial = sol.x_star;
    const double f_trial = oracle.value(trial);
    const double rho_value = rho(f_center, f_trial, sol.z_star);
    const double step_inf = dist_inf(trial, x_center);

    mark_activity(bundle, sol);

    if (rho_value >= opt.trust.eta1) {
      // serious step
      if (!(f_trial < f_center)) ++diag.f_monotone_violations;
      delta = update_trust_region(delta, rho_value, step_inf, opt.trust);
      const std::size_t before = bundle.size();
      prune_lpbc(bundle, sol, StepKind::serious, opt.inactive_threshold);
      prev_prune_dropped = bundle.size() != before;
      if (auto ci = bundle.center_index()) bundle[*ci].is_center_plane = false;
      x_center = trial;
      f_center = f_trial;
      ++k;
      Vec s_new = oracle.subgrad_at_known_value(x_center);
      bundle.add(BundleElement{x_center, f_center, std::move(s_new), static_cast<int>(k), 0, 0,
                               true});
      have_prev_solve = false;  // model recentered, monotonicity restarts
    } else {
      // null step
      const double new_delta = update_trust_region(delta, rho_value, step_inf, opt.trust);
      if (new_delta < delta) ++sh;
      const std::size_t before = bundle.size();
      prune_lpbc(bundle, sol, StepKind::minor, opt.inactive_threshold);
      prev_prune_dropped = bundle.size() != before;
      Vec s_new = oracle.subgrad_at_known_value(trial);
      bundle.add(BundleElement{trial, f_trial, std::move(s_new), static_cast<int>(k),
                               static_cast<int>(minors + 1), 0, false});
      ++minors;
      prev_z = sol.z_star;
      prev_delta = delta;
      delta = new_delta;
      have_prev_solve = true;
    }
  }

  RunReport& rep = out.report;
  rep.problem = problem.name;
  rep.f_val = f_center;
  rep.error = f_center - problem.f_opt_ref;
  rep.nf = oracle.nf;
  rep.se = oracle.se;
  rep.pb = 0.0;
  rep.k = k;
  rep.L = minors;
  rep.wall_time = detail::seconds_since(t_start);
  rep.lp_time = lp_time;
  rep.delta_final = delta;
  rep.sh = sh;
  rep.a_final = 0.0;
  rep.a_min_final = 0.0;
  rep.au = 0;
  rep.stop_reason = to_string(reason);
  out.final_x = x_center;
  return out;
}

}  // namespace lpbundle
