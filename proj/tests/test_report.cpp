#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpbundle/bench.hpp"

using namespace lpbundle;

namespace {

RunReport sample_report() {
  RunReport r;
  r.problem = "CB2";
  r.f_val = 1.952224551;
  r.error = 5.1e-08;
  r.nf = 16;
  r.se = 16;
  r.pb = 0.0;
  r.k = 10;
  r.L = 5;
  r.wall_time = 0.1428;
  r.lp_time = 0.001;
  r.delta_final = 0.341842126;
  r.sh = 0;
  r.a_final = 0.0;
  r.a_min_final = 0.0;
  r.au = 0;
  r.stop_reason = "converged";
  return r;
}

}  // namespace

TEST_CASE("csv output has the exact header and one row per report") {
  const std::vector<RunReport> reports = {sample_report()};
  const std::string csv = emit_table(reports, OutputFormat::csv);
  CHECK(csv.rfind("problem,f_val,error,nf,se,pb,k,L,wall_time,lp_time,delta_final,sh,a_final,"
                  "a_min_final,au,stop_reason\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("CB2,1.95222455") != std::string::npos);
}

TEST_CASE("jsonl round-trips exactly") {
  std::vector<RunReport> reports = {sample_report(), sample_report()};
  reports[1].problem = "Maxq";
  reports[1].f_val = 4.06847e-07;
  reports[1].stop_reason = "budget_exceeded";
  const std::string text = emit_table(reports, OutputFormat::jsonl);
  const auto back = parse_jsonl(text);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].problem == reports[i].problem);
    CHECK(back[i].f_val == reports[i].f_val);
    CHECK(back[i].error == reports[i].error);
    CHECK(back[i].nf == reports[i].nf);
    CHECK(back[i].se == reports[i].se);
    CHECK(back[i].pb == reports[i].pb);
    CHECK(back[i].k == reports[i].k);
    CHECK(back[i].L == reports[i].L);
    CHECK(back[i].wall_time == reports[i].wall_time);
    CHECK(back[i].lp_time == reports[i].lp_time);
    CHECK(back[i].delta_final == reports[i].delta_final);
    CHECK(back[i].sh == reports[i].sh);
    CHECK(back[i].a_final == reports[i].a_final);
    CHECK(back[i].a_min_final == reports[i].a_min_final);
    CHECK(back[i].au == reports[i].au);
    CHECK(back[i].stop_reason == reports[i].stop_reason);
  }
}

TEST_CASE("empty selection produces an empty report list") {
  RunConfig rc;
  rc.problems = {};
  CHECK(run_batch(rc).empty());
}

TEST_CASE("problem selection by table index, range, and name") {
  const auto lpbc_two = select_problems("2", "lpbc");
  REQUIRE(lpbc_two.size() == 1);
  CHECK(lpbc_two[0] == "CB3");

  const auto first_three = select_problems("1-3", "lpbc");
  REQUIRE(first_three.size() == 3);
  CHECK(first_three[0] == "CB2");
  CHECK(first_three[2] == "DEM");

  const auto nc = select_problems("1,4", "lpbnc");
  REQUIRE(nc.size() == 2);
  CHECK(nc[0] == "Crescent");
  CHECK(nc[1] == "HS78");

  CHECK(select_problems("all", "lpbc").size() == 20);
  CHECK(select_problems("all", "lpbnc").size() == 12);
  CHECK(select_problems("nonconvex", "lpbc").size() == 12);
  CHECK(select_problems("Maxq,Maxl", "lpbc").size() == 2);
  CHECK_THROWS_AS((void)select_problems("21", "lpbc"), SolverError);
  CHECK_THROWS_AS((void)select_problems("Nope", "lpbc"), SolverError);
}

TEST_CASE("compare_to_reference applies tolerances and unbounded expectations") {
  ToleranceSpec spec;
  spec.default_tol = 1e-6;
  spec.per_problem = {{"Maxq", 1e-6}};
  spec.expect_unbounded = {"HS78"};

  RunReport good = sample_report();
  good.problem = "Maxq";
  good.error = 4.07e-7;
  RunReport bad = sample_report();
  bad.problem = "CB2";
  bad.error = 1e-3;
  RunReport hs = sample_report();
  hs.problem = "HS78";
  hs.error = -1e19;
  hs.stop_reason = "unbounded";

  const std::vector<RunReport> reports = {good, bad, hs};
  const auto summary = compare_to_reference(reports, spec);
  CHECK(summary.passed == 2);
  CHECK(summary.failed == 1);
  CHECK_FALSE(summary.ok());
  CHECK(summary.text.find("FAIL  CB2") != std::string::npos);
  CHECK(summary.text.find("PASS  HS78") != std::string::npos);
}

TEST_CASE("batch runs are deterministic and parallel order matches serial") {
  RunConfig rc;
  rc.algorithm = "lpbc";
  rc.problems = {"CB2", "CB3", "DEM", "QL"};
  rc.lpbc.eps_tol = 1e-6;
  const auto serial = run_batch(rc);
  rc.parallel = 4;
  const auto parallel = run_batch(rc);
  auto again = run_batch(rc);
  REQUIRE(serial.size() == 4);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].report.problem == rc.problems[i]);
    CHECK(serial[i].report.f_val == parallel[i].report.f_val);
    CHECK(serial[i].report.nf == parallel[i].report.nf);
    CHECK(serial[i].report.k == parallel[i].report.k);
    CHECK(parallel[i].report.f_val == again[i].report.f_val);
    CHECK(parallel[i].report.L == again[i].report.L);
  }
}
