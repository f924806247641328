#include "lpbundle/lpbnc.hpp"

#include <algorithm>
#include <cmath>

#include "solver_detail.hpp"

namespace lpbundle {

void LpbncParams::validate() const {
  trust.validate();
  if (!(beta > 0 && beta < 1)) throw SolverError("lpbnc: beta must be in (0,1)");
  if (!(gamma >= 2 && gamma <= 10)) throw SolverError("lpbnc: gamma must be in [2,10]");
  if (!(sigma >= 1)) throw SolverError("lpbnc: sigma must be >= 1");
  if (!(alpha3 > 0 && alpha3 < 1)) throw SolverError("lpbnc: alpha3 must be in (0,1)");
}

BacktrackResult backtrack(const Vec& x_k, double f_u, const Vec& trial, double beta,
                          const Problem& problem, int max_steps) {
  BacktrackResult res;
  const Vec d = sub(trial, x_k);
  double factor = beta;
  for (int j = 1; j <= max_steps; ++j, factor *= beta) {
    Vec y(x_k.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_k[i] + factor * d[i];
    const double fy = problem.value(y);
    ++res.evals;
    if (std::isfinite(fy) && fy <= f_u) {
      res.point = std::move(y);
      res.value = fy;
      return res;
    }
  }
  throw BacktrackExhausted("backtrack: level bound unreachable along the step direction");
}

std::pair<double, bool> update_a(double a, double a_min, double gamma, double sigma) {
  if (a < a_min) return {std::max(a_min, gamma * a), true};
  if (a_min > 0 && a >= sigma * a_min) return {(a + a_min) / 2, true};
  return {a, false};
}

double update_f_u(double f_u, double f_new_center, double alpha3) {
  return alpha3 * f_new_center + (1 - alpha3) * f_u;
}

RunResult run_lpbnc(const Problem& problem, const LpbncOptions& opt) {
  opt.params.validate();

  const auto t_start = detail::Clock::now();
  detail::CountingOracle oracle{problem};
  RunResult out;
  RunDiagnostics& diag = out.diag;
  diag.min_e_i = std::numeric_limits<double>::infinity();

  Vec x_center = problem.x0;
  const OracleResponse r0 = oracle.value_and_subgrad(x_center);
  if (!r0.in_domain) throw SolverError("lpbnc: initial point outside the domain");
  double f_center = r0.value;
  double f_u = f_center;

  Bundle bundle;
  bundle.add(BundleElement{x_center, f_center, r0.subgrad, 0, 0, 0, true});

  ConvexificationState conv;  // a = a_min = 0
  const TrustRegionParams& trust = opt.params.trust;
  double delta = (opt.delta0_strategy == Delta0Strategy::scaled_subgrad)
                     ? std::clamp(norm_2(r0.subgrad) / 10.0, 1e-12, trust.delta_max)
                     : trust.delta0;

  long k = 0, minors = 0, sh = 0, lp_solves = 0;
  double lp_time = 0.0;
  StopReason reason = StopReason::converged;

  bool have_prev_solve = false;
  bool a_changed_since_prev = false;
  double prev_z = 0.0, prev_delta = 0.0;

  while (true) {
    if (lp_solves >= opt.budget.max_lp_solves || oracle.nf >= opt.budget.max_fevals) {
      reason = StopReason::budget_exceeded;
      break;
    }
    const std::vector<PlaneRow> rows = build_rows(bundle, x_center, conv.a);
    const auto t_lp = detail::Clock::now();
    const SubproblemSolution sol = solve_subproblem(rows, {x_center, delta}, opt.lp_tol);
    lp_time += detail::seconds_since(t_lp);
    ++lp_solves;
    diag.bundle_peak = std::max(diag.bundle_peak, static_cast<long>(bundle.size()));

    const ModelReductionCheck idc =
        model_reduction_identity(sol, bundle, x_center, f_center, conv.a, delta);
    diag.max_identity_violation =
        std::max(diag.max_identity_violation,
                 std::abs(idc.lhs - idc.rhs) / (1 + std::abs(idc.lhs)));
    ++diag.identity_checks;
    for (std::size_t i = 0; i < bundle.size(); ++i) {
      const double ei = linearization_error_e(x_center, f_center, bundle[i], conv.a);
      diag.min_e_i = std::min(diag.min_e_i, ei);
      if (ei < -1e-12) ++diag.e_i_negative_events;
    }

    const double model_red = f_center - sol.z_star;
    if (model_red < -1e-9 * (1 + std::abs(f_center))) ++diag.negative_model_reduction_events;

    if (have_prev_solve && delta <= prev_delta && !a_changed_since_prev &&
        sol.z_star < prev_z - 1e-9 * (1 + std::abs(prev_z)))
      ++diag.z_monotone_violations;

    if (stopping_test(f_center, sol.z_star, opt.params.eps_tol)) {
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

    const bool serious = rho_value >= trust.eta1;
    Vec new_point;
    double new_value = 0.0;

    if (serious) {
      if (!(f_trial < f_center)) ++diag.f_monotone_violations;
      if (rho_value > trust.eta3 && step_inf > 0.9 * delta)
        delta = std::min(trust.alpha2 * delta, trust.delta_max);
      prune_lpbnc_serious(bundle, f_u);
      f_u = update_f_u(f_u, f_trial, opt.params.alpha3);
      new_point = trial;
      new_value = f_trial;
    } else {
      if (rho_value < -1.0 / std::min(1.0, delta)) {
        delta = trust.alpha1 * delta;
        ++sh;
      }
      if (f_trial > f_u && (k > 0 || !std::isfinite(f_trial))) {
        BacktrackResult bt =
            backtrack(x_center, f_u, trial, opt.params.beta, problem, opt.max_backtrack_steps);
        oracle.nf += bt.evals;
        oracle.nf_backtrack += bt.evals;
        new_point = std::move(bt.point);
        new_value = bt.value;
      } else {
        new_point = trial;
        new_value = f_trial;
      }
    }

    // enter the new bundle point, then refresh the convexification parameter
    const double a_min_before = bundle.a_min();
    Vec s_new = oracle.subgrad_at_known_value(new_point);
    if (serious) {
      if (auto ci = bundle.center_index()) bundle[*ci].is_center_plane = false;
      bundle.add(BundleElement{new_point, new_value, std::move(s_new), static_cast<int>(k + 1), 0,
                               0, true});
    } else {
      bundle.add(BundleElement{new_point, new_value, std::move(s_new), static_cast<int>(k),
                               static_cast<int>(minors + 1), 0, false});
    }
    conv.a_min = bundle.a_min();
    if (!serious && conv.a_min < a_min_before - 1e-12) ++diag.a_min_monotone_violations;
    diag.max_a_min_observed = std::max(diag.max_a_min_observed, conv.a_min);
    const auto [a_new, updated] = update_a(conv.a, conv.a_min, opt.params.gamma, opt.params.sigma);
    if (updated) {
      conv.a = a_new;
      ++conv.a_updates;
    }

    if (serious) {
      have_prev_solve = false;
      x_center = std::move(new_point);
      f_center = new_value;
      ++k;
      if (f_center < opt.budget.unbounded_floor) {
        reason = StopReason::unbounded;
        break;
      }
    } else {
      prev_z = sol.z_star;
      prev_delta = delta;
      a_changed_since_prev = updated;
      have_prev_solve = true;
      ++minors;
    }
  }

  RunReport& rep = out.report;
  rep.problem = problem.name;
  rep.f_val = f_center;
  rep.error = f_center - problem.f_opt_ref;
  rep.nf = oracle.nf;
  rep.se = oracle.se;
  rep.pb = oracle.nf > 0 ? 100.0 * double(oracle.nf_backtrack) / double(oracle.nf) : 0.0;
  rep.k = k;
  rep.L = minors;
  rep.wall_time = detail::seconds_since(t_start);
  rep.lp_time = lp_time;
  rep.delta_final = delta;
  rep.sh = sh;
  rep.a_final = conv.a;
  rep.a_min_final = conv.a_min;
  rep.au = conv.a_updates;
  rep.stop_reason = to_string(reason);
  out.final_x = x_center;
  return out;
}

}  // namespace lpbundle
