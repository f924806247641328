// lpbench: run the LP-bundle solvers over the benchmark corpus and emit
// result tables (text, CSV, JSON-lines).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "lpbundle/bench.hpp"

using namespace lpbundle;

namespace {

// Flat key=value config with [lpbc] / [lpbnc] sections; the unnamed leading
// section applies to both algorithms. Command-line flags override.
std::map<std::string, std::string> read_config(const std::string& path,
                                               const std::string& algo) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", "expected key=value: " + line);
    if (section.empty() || section == algo || section == "common")
      kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

struct CliSettings {
  std::string algo = "lpbc";
  std::string problems = "all";
  std::string config_path;
  std::string delta0 = "one";  // one | scaled
  std::optional<double> eps_tol;
  double beta = 0.7, gamma = 2.0, sigma = 2.0, alpha3 = 0.5;
  double eta1 = 1e-4, eta2 = 0.0, eta3 = 0.4, alpha1 = 0.25, alpha2 = 2.0, delta_max = 1000.0;
  int T = 30;
  long budget = 100000;
  std::string format = "table";
  std::string out_path;
  int parallel = 1;

  void apply_config() {
    if (config_path.empty()) return;
    const auto kv = read_config(config_path, algo);
    auto getd = [&](const char* key, double& target) {
      if (auto it = kv.find(key); it != kv.end()) target = std::stod(it->second);
    };
    if (auto it = kv.find("problems"); it != kv.end()) problems = it->second;
    if (auto it = kv.find("delta0"); it != kv.end()) delta0 = it->second;
    if (auto it = kv.find("eps_tol"); it != kv.end()) eps_tol = std::stod(it->second);
    if (auto it = kv.find("T"); it != kv.end()) T = std::stoi(it->second);
    if (auto it = kv.find("budget"); it != kv.end()) budget = std::stol(it->second);
    if (auto it = kv.find("format"); it != kv.end()) format = it->second;
    if (auto it = kv.find("parallel"); it != kv.end()) parallel = std::stoi(it->second);
    getd("beta", beta);
    getd("gamma", gamma);
    getd("sigma", sigma);
    getd("alpha3", alpha3);
    getd("eta1", eta1);
    getd("eta2", eta2);
    getd("eta3", eta3);
    getd("alpha1", alpha1);
    getd("alpha2", alpha2);
    getd("delta_max", delta_max);
  }

  RunConfig to_run_config() const {
    RunConfig rc;
    rc.algorithm = algo;
    TrustRegionParams trust;
    trust.eta1 = eta1;
    trust.eta2 = eta2;
    trust.eta3 = eta3;
    trust.alpha1 = alpha1;
    trust.alpha2 = alpha2;
    trust.delta_max = delta_max;
    rc.lpbc.trust = trust;
    rc.lpbc.eps_tol = eps_tol.value_or(1e-6);
    rc.lpbc.inactive_threshold = T;
    rc.lpbc.delta0_strategy =
        delta0 == "scaled" ? Delta0Strategy::scaled_subgrad : Delta0Strategy::fixed;
    rc.lpbc.budget.max_lp_solves = budget;
    rc.lpbc.budget.max_fevals = 2 * budget;
    rc.lpbnc.params.trust = trust;
    rc.lpbnc.params.beta = beta;
    rc.lpbnc.params.gamma = gamma;
    rc.lpbnc.params.sigma = sigma;
    rc.lpbnc.params.alpha3 = alpha3;
    rc.lpbnc.params.eps_tol = eps_tol.value_or(1e-5);
    rc.lpbnc.delta0_strategy = rc.lpbc.delta0_strategy;
    rc.lpbnc.budget = rc.lpbc.budget;
    if (format == "csv") rc.format = OutputFormat::csv;
    else if (format == "jsonl") rc.format = OutputFormat::jsonl;
    else rc.format = OutputFormat::table;
    rc.parallel = parallel;
    rc.problems = select_problems(problems, algo);
    return rc;
  }
};

void add_common_flags(CLI::App* cmd, CliSettings& s) {
  cmd->add_option("--algo", s.algo, "Algorithm: lpbc or lpbnc")
      ->check(CLI::IsMember({"lpbc", "lpbnc"}));
  cmd->add_option("--problems", s.problems,
                  "Names, table indices/ranges (1-14), or all/convex/nonconvex");
  cmd->add_option("--config", s.config_path, "Key=value config file with [lpbc]/[lpbnc] sections");
  cmd->add_option("--eps-tol", [&s](const CLI::results_t& r) {
        s.eps_tol = std::stod(r[0]);
        return true;
      },
      "Stopping tolerance (default 1e-6 lpbc, 1e-5 lpbnc)");
  cmd->add_option("--delta0", s.delta0, "Initial radius strategy: one or scaled")
      ->check(CLI::IsMember({"one", "scaled"}));
  cmd->add_option("--beta", s.beta, "Backtrack factor (lpbnc)");
  cmd->add_option("--gamma", s.gamma, "Convexification growth factor (lpbnc)");
  cmd->add_option("--sigma", s.sigma, "Convexification decrease trigger (lpbnc)");
  cmd->add_option("--alpha3", s.alpha3, "Level-bound relaxation (lpbnc)");
  cmd->add_option("--T", s.T, "Inactivity pruning threshold (lpbc)");
  cmd->add_option("--budget", s.budget, "Max LP solves per run (fevals capped at twice this)");
  cmd->add_option("--eta1", s.eta1, "Serious-step threshold");
  cmd->add_option("--eta2", s.eta2, "Unused trust parameter (accepted for completeness)");
  cmd->add_option("--eta3", s.eta3, "Radius-increase threshold");
  cmd->add_option("--alpha1", s.alpha1, "Radius shrink factor");
  cmd->add_option("--alpha2", s.alpha2, "Radius growth factor");
  cmd->add_option("--delta-max", s.delta_max, "Max trust-region radius");
  cmd->add_option("--format", s.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "jsonl"}));
  cmd->add_option("--out", s.out_path, "Write the table to a file instead of stdout");
  cmd->add_option("--parallel", s.parallel, "Worker threads for independent runs");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  out << text;
}

int count_failures(std::span<const RunResult> results) {
  int n = 0;
  for (const auto& r : results)
    if (r.report.stop_reason == "numerical_failure" ||
        r.report.stop_reason == "backtrack_exhausted")
      ++n;
  return n;
}

// The benchmark protocol: spec-pinned settings and reference tolerances.
ToleranceSpec reference_tolerances(const std::string& algo) {
  ToleranceSpec spec;
  if (algo == "lpbc") {
    spec.default_tol = 2e-4;
    return spec;
  }
  spec.default_tol = 1e-4;
  spec.per_problem = {{"Crescent", 2.6e-3},          {"Mifflin2", 1e-4},
                      {"Colville 1", 1e-4},          {"El-Attar", 1e-4},
                      {"Gill", 2.2e-3},              {"Steiner 2", 1.41e-3},
                      {"Active Faces", 1e-4},        {"Brown 2", 1e-4},
                      {"Chained Mifflin2", 4.1e-4},  {"Chained Crescent I", 1e-4},
                      {"Chained Crescent II", 1e-4}};
  spec.expect_unbounded = {"HS78"};
  return spec;
}

int run_check(const std::string& algo, int parallel, const std::string& format,
              const std::string& out_path) {
  CliSettings s;
  s.algo = algo;
  s.parallel = parallel;
  s.format = format;
  std::vector<RunReport> reports;
  if (algo == "lpbc") {
    // convex table: radius 1 for problems 1-14, |s0|/10 for 15-20
    CliSettings part = s;
    part.problems = "1-14";
    part.delta0 = "one";
    auto res1 = run_batch(part.to_run_config());
    part.problems = "15-20";
    part.delta0 = "scaled";
    auto res2 = run_batch(part.to_run_config());
    for (const auto& r : res1) reports.push_back(r.report);
    for (const auto& r : res2) reports.push_back(r.report);
  } else {
    CliSettings part = s;
    part.problems = "all";
    part.delta0 = "one";
    part.beta = 0.7;
    part.gamma = 2.0;
    auto res = run_batch(part.to_run_config());
    for (const auto& r : res) reports.push_back(r.report);
  }
  OutputFormat of = OutputFormat::table;
  if (format == "csv") of = OutputFormat::csv;
  if (format == "jsonl") of = OutputFormat::jsonl;
  write_output(emit_table(reports, of), out_path);
  const CompareSummary summary = compare_to_reference(reports, reference_tolerances(algo));
  std::cout << summary.text;
  return summary.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP-bundle nonsmooth optimization benchmark harness"};
  app.require_subcommand(1);

  CliSettings s;
  CLI::App* run = app.add_subcommand("run", "Run the selected problems and print a table");
  add_common_flags(run, s);

  CLI::App* list = app.add_subcommand("list", "List the problem registry");
  std::string list_algo = "all";
  list->add_option("--algo", list_algo, "lpbc, lpbnc, or all")
      ->check(CLI::IsMember({"lpbc", "lpbnc", "all"}));

  CLI::App* check =
      app.add_subcommand("check", "Run the benchmark protocol and compare to reference optima");
  std::string check_algo = "lpbc";
  int check_parallel = 1;
  std::string check_format = "table", check_out;
  check->add_option("--algo", check_algo, "lpbc, lpbnc, or all")
      ->check(CLI::IsMember({"lpbc", "lpbnc", "all"}));
  check->add_option("--parallel", check_parallel, "Worker threads");
  check->add_option("--format", check_format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "jsonl"}));
  check->add_option("--out", check_out, "Write the table to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      s.apply_config();
      const RunConfig rc = s.to_run_config();
      auto results = run_batch(rc);
      std::vector<RunReport> reports;
      reports.reserve(results.size());
      for (const auto& r : results) reports.push_back(r.report);
      write_output(emit_table(reports, rc.format), s.out_path);
      return count_failures(results) > 0 ? 3 : 0;
    }
    if (list->parsed()) {
      for (const auto& p : registry()) {
        const bool want = list_algo == "all" || (p.convex == (list_algo == "lpbc"));
        if (want)
          std::cout << (p.convex ? "convex   " : "nonconvex") << "  n=" << p.dim << "  f_opt="
                    << p.f_opt_ref << "  " << p.name << '\n';
      }
      return 0;
    }
    if (check->parsed()) {
      if (check_algo == "all") {
        const int a = run_check("lpbc", check_parallel, check_format, check_out);
        const int b = run_check("lpbnc", check_parallel, check_format, check_out);
        return std::max(a, b);
      }
      return run_check(check_algo, check_parallel, check_format, check_out);
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
