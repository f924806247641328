// Acceptance suite: runs every contract criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "lpbundle/bench.hpp"

using namespace lpbundle;

namespace {

int failures = 0;

void verdict(int criterion, bool ok, const std::string& what) {
  std::printf("criterion %d: %s  %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

struct BenchOutputs {
  std::vector<RunResult> lpbc;   // 20 convex runs
  std::vector<RunResult> lpbnc;  // 12 nonconvex runs (HS78 under its divergence setting)
};

BenchOutputs run_benchmarks() {
  BenchOutputs out;

  RunConfig convex;
  convex.algorithm = "lpbc";
  convex.lpbc.eps_tol = 1e-6;
  convex.lpbc.inactive_threshold = 30;
  convex.parallel = 4;
  convex.problems = select_problems("1-14", "lpbc");
  convex.lpbc.delta0_strategy = Delta0Strategy::fixed;
  out.lpbc = run_batch(convex);
  convex.problems = select_problems("15-20", "lpbc");
  convex.lpbc.delta0_strategy = Delta0Strategy::scaled_subgrad;
  for (auto& r : run_batch(convex)) out.lpbc.push_back(std::move(r));

  RunConfig nonconvex;
  nonconvex.algorithm = "lpbnc";
  nonconvex.lpbnc.params.beta = 0.7;
  nonconvex.lpbnc.params.gamma = 2.0;
  nonconvex.lpbnc.params.eps_tol = 1e-5;
  nonconvex.lpbnc.delta0_strategy = Delta0Strategy::fixed;
  nonconvex.parallel = 4;
  for (const auto& name : select_problems("all", "lpbnc")) {
    if (name != "HS78") nonconvex.problems.push_back(name);
  }
  out.lpbnc = run_batch(nonconvex);

  // HS78 diverges under the scaled-radius setting; pin that scenario.
  RunConfig hs;
  hs.algorithm = "lpbnc";
  hs.lpbnc = nonconvex.lpbnc;
  hs.lpbnc.params.beta = 0.8;
  hs.lpbnc.delta0_strategy = Delta0Strategy::scaled_subgrad;
  hs.problems = {"HS78"};
  for (auto& r : run_batch(hs)) out.lpbnc.push_back(std::move(r));
  return out;
}

void criterion1(const BenchOutputs& bench) {
  const double table_tol = 2e-4, tight_tol = 1e-5;
  int within_table = 0, within_tight = 0;
  std::string detail;
  for (const auto& r : bench.lpbc) {
    const double err = std::abs(r.report.error);
    if (std::isfinite(err) && err <= table_tol) ++within_table;
    else detail += " " + r.report.problem + "(|err|=" + std::to_string(err) + ")";
    if (std::isfinite(err) && err <= tight_tol) ++within_tight;
  }
  const bool ok = within_table == 20 && within_tight >= 14;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "convex accuracy: %d/20 within 2e-4, %d within 1e-5 (need 20 and >=14)%s",
                within_table, within_tight, detail.c_str());
  verdict(1, ok, buf);
}

void criterion2(const BenchOutputs& bench) {
  ToleranceSpec spec;
  spec.default_tol = 1e-4;
  spec.per_problem = {{"Crescent", 2.6e-3},
                      {"Gill", 2.2e-3},
                      {"Steiner 2", 1.41e-3},
                      {"Chained Mifflin2", 4.1e-4}};
  spec.expect_unbounded = {"HS78"};
  std::vector<RunReport> reports;
  for (const auto& r : bench.lpbnc) reports.push_back(r.report);
  const auto summary = compare_to_reference(reports, spec);
  verdict(2, summary.ok(),
          "nonconvex accuracy vs reference table (" + std::to_string(summary.passed) +
              "/12 rows)");
  if (!summary.ok()) std::fputs(summary.text.c_str(), stdout);
}

void criterion3(const BenchOutputs& bench) {
  double worst = 0.0;
  long checks = 0;
  for (const auto* batch : {&bench.lpbc, &bench.lpbnc})
    for (const auto& r : *batch) {
      worst = std::max(worst, r.diag.max_identity_violation);
      checks += r.diag.identity_checks;
    }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "model-reduction identity: max relative violation %.3e over %ld solves", worst,
                checks);
  verdict(3, worst <= 1e-6 && checks > 0, buf);
}

void criterion4() {
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<int> dim_d(1, 3), rows_d(1, 6);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), cen(-2.0, 2.0), rad(0.1, 2.0);
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const int n = dim_d(rng), m = rows_d(rng);
    BoxRegion box;
    box.center.resize(n);
    for (auto& c : box.center) c = cen(rng);
    box.radius = rad(rng);
    std::vector<PlaneRow> rows(m);
    for (auto& r : rows) {
      r.gradient.resize(n);
      for (auto& g : r.gradient) g = coef(rng);
      r.offset = coef(rng);
    }
    const auto sol = solve_subproblem(rows, box);
    const auto [x_ref, z_ref] = vertex_oracle(rows, box);
    worst_gap = std::max(worst_gap, std::abs(sol.z_star - z_ref));
    double lam = 0.0;
    for (double l : sol.multipliers) lam += l;
    worst_kkt = std::max(worst_kkt, std::abs(lam - 1.0));
    Vec agg(n, 0.0);
    for (std::size_t kk = 0; kk < sol.active_rows.size(); ++kk)
      for (int j = 0; j < n; ++j)
        agg[j] += sol.multipliers[kk] * rows[sol.active_rows[kk]].gradient[j];
    for (int j = 0; j < n; ++j) {
      double viol = 0.0;
      if (sol.box_active[j] == BoxActivity::inactive) viol = std::abs(agg[j]);
      else if (sol.box_active[j] == BoxActivity::upper) viol = std::max(0.0, agg[j]);
      else viol = std::max(0.0, -agg[j]);
      worst_kkt = std::max(worst_kkt, viol);
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "LP vs oracle on 1000 instances: |dz| <= %.2e, kkt <= %.2e",
                worst_gap, worst_kkt);
  verdict(4, worst_gap <= 1e-8 && worst_kkt <= 1e-7, buf);
}

void criterion5(const BenchOutputs& bench) {
  // hand value: the -x^2 pair gives exactly 2
  BundleElement e1{{0.0}, 0.0, {0.0}, 0, 0, 0, false};
  BundleElement e2{{1.0}, -1.0, {-2.0}, 0, 0, 0, false};
  const std::vector<BundleElement> pair = {e1, e2};
  const bool hand_ok = std::abs(compute_a_min(pair) - 2.0) <= 1e-12;

  bool runs_ok = true;
  std::string bad;
  for (const auto& r : bench.lpbnc) {
    if (!(r.report.a_final >= r.report.a_min_final - 1e-12) || r.diag.e_i_negative_events > 0) {
      runs_ok = false;
      bad += " " + r.report.problem;
    }
  }
  verdict(5, hand_ok && runs_ok,
          std::string("convexification: hand a_min, a >= a_min, E_i >= -1e-12") +
              (bad.empty() ? "" : " offenders:" + bad));
}

void criterion6(const BenchOutputs& bench) {
  bool ok = true;
  std::string detail;
  for (const char* name : {"Crescent", "Mifflin2"}) {
    const RunResult* run = nullptr;
    for (const auto& r : bench.lpbnc)
      if (r.report.problem == name) run = &r;
    if (!run || run->final_x.empty()) {
      ok = false;
      detail += std::string(" ") + name + "(missing)";
      continue;
    }
    const double grid_step = 1e-3;
    const auto [p, e] = brute_force_prox(lookup(name), run->final_x, run->report.a_final, 0.25,
                                         grid_step);
    const double gap = dist_inf(p, run->final_x);
    detail += std::string(" ") + name + "(|x-p|=" + std::to_string(gap) + ")";
    if (!(gap <= 2 * grid_step)) ok = false;
  }
  verdict(6, ok, "prox fixed point at returned solutions:" + detail);
}

void criterion7(const BenchOutputs& bench) {
  long f_viol = 0, z_viol = 0, amin_viol = 0;
  for (const auto* batch : {&bench.lpbc, &bench.lpbnc})
    for (const auto& r : *batch) {
      f_viol += r.diag.f_monotone_violations;
      z_viol += r.diag.z_monotone_violations;
      amin_viol += r.diag.a_min_monotone_violations;
    }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "monotonicity: f violations %ld, z violations %ld, a_min violations %ld", f_viol,
                z_viol, amin_viol);
  verdict(7, f_viol == 0 && z_viol == 0 && amin_viol == 0, buf);
}

bool criterion8() {
  std::mt19937_64 rng(8888);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.05, 0.8);
  bool ok = true;
  std::string bad;
  for (const auto& p : registry()) {
    int accepted = 0, tries = 0;
    double worst = 0.0;
    while (accepted < 50 && tries < 4000) {
      ++tries;
      Vec x = p.x0;
      const double s = scale(rng);
      for (auto& v : x) v += s * g(rng);
      try {
        worst = std::max(worst, fd_subgrad_check(p, x, 1e-6));
        ++accepted;
      } catch (const NotSmoothHere&) {
      }
    }
    if (accepted < 50 || worst > 1e-5) {
      ok = false;
      bad += " " + p.name + "(fd)";
    }
    if (p.convex) {
      for (int it = 0; it < 500; ++it) {
        Vec x = p.x0, y = p.x0;
        for (auto& v : x) v += 0.7 * g(rng);
        for (auto& v : y) v += 0.7 * g(rng);
        const OracleResponse rx = p.eval(x);
        double lin = rx.value;
        for (std::size_t j = 0; j < x.size(); ++j) lin += rx.subgrad[j] * (y[j] - x[j]);
        const double fy = p.value(y);
        if (fy < lin - 1e-9 * std::max(1.0, std::abs(fy))) {
          ok = false;
          bad += " " + p.name + "(subgrad-ineq)";
          break;
        }
      }
    }
  }
  verdict(8, ok, "oracle validation (finite differences + convex subgradient inequality)" + bad);
  return ok;
}

}  // namespace

int main() {
  // oracle validation gates the benchmark criteria
  const bool oracles_ok = criterion8();
  if (!oracles_ok) std::puts("oracle validation failed; benchmark criteria still evaluated:");

  criterion4();

  const BenchOutputs bench = run_benchmarks();
  criterion1(bench);
  criterion2(bench);
  criterion3(bench);
  criterion5(bench);
  criterion6(bench);
  criterion7(bench);

  std::printf("%s (%d criteria failed)\n", failures == 0 ? "ALL ACCEPTANCE CRITERIA PASS" : "ACCEPTANCE FAILURES",
              failures);
  return failures == 0 ? 0 : 1;
}
