#include "lpbundle/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lpbundle/problems.hpp"

namespace lpbundle {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::budget_exceeded: return "budget_exceeded";
    case StopReason::unbounded: return "unbounded";
    case StopReason::numerical_failure: return "numerical_failure";
    case StopReason::backtrack_exhausted: return "backtrack_exhausted";
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view s) {
  if (s == "converged") return StopReason::converged;
  if (s == "budget_exceeded") return StopReason::budget_exceeded;
  if (s == "unbounded") return StopReason::unbounded;
  if (s == "numerical_failure") return StopReason::numerical_failure;
  if (s == "backtrack_exhausted") return StopReason::backtrack_exhausted;
  throw SolverError("unknown stop reason: " + std::string(s));
}

std::vector<std::string> select_problems(const std::string& selector,
                                         const std::string& algorithm) {
  const auto& reg = registry();
  std::vector<const Problem*> table;
  for (const auto& p : reg)
    if (p.convex == (algorithm == "lpbc")) table.push_back(&p);

  std::vector<std::string> out;
  auto add_index = [&](long i) {
    if (i < 1 || i > static_cast<long>(table.size()))
      throw SolverError("problem index out of range: " + std::to_string(i));
    out.push_back(table[i - 1]->name);
  };

  std::stringstream ss(selector);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == "all") {
      for (const auto* p : table) out.push_back(p->name);
    } else if (tok == "convex" || tok == "nonconvex") {
      for (const auto& p : reg)
        if (p.convex == (tok == "convex")) out.push_back(p.name);
    } else if (tok.find_first_not_of("0123456789-") == std::string::npos &&
               std::isdigit(static_cast<unsigned char>(tok[0]))) {
      const auto dash = tok.find('-');
      if (dash == std::string::npos) {
        add_index(std::stol(tok));
      } else {
        const long lo = std::stol(tok.substr(0, dash));
        const long hi = std::stol(tok.substr(dash + 1));
        for (long i = lo; i <= hi; ++i) add_index(i);
      }
    } else {
      out.push_back(lookup(tok).name);  // validates the name
    }
  }
  return out;
}

namespace {

RunResult run_one(const RunConfig& config, const std::string& name) {
  const Problem& p = lookup(name);
  try {
    if (config.algorithm == "lpbc") return run_lpbc(p, config.lpbc);
    if (config.algorithm == "lpbnc") return run_lpbnc(p, config.lpbnc);
    throw SolverError("unknown algorithm: " + config.algorithm);
  } catch (const BacktrackExhausted&) {
    RunResult r;
    r.report.problem = name;
    r.report.f_val = std::nan("");
    r.report.error = std::nan("");
    r.report.stop_reason = to_string(StopReason::backtrack_exhausted);
    return r;
  } catch (const NumericalFailure&) {
    RunResult r;
    r.report.problem = name;
    r.report.f_val = std::nan("");
    r.report.error = std::nan("");
    r.report.stop_reason = to_string(StopReason::numerical_failure);
    return r;
  }
}

std::string fmt_double(double v, int sig = 9) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

std::string fmt_time(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

constexpr const char* kCsvHeader =
    "problem,f_val,error,nf,se,pb,k,L,wall_time,lp_time,delta_final,sh,a_final,a_min_final,au,"
    "stop_reason";

std::string csv_row(const RunReport& r) {
  std::ostringstream os;
  os << r.problem << ',' << fmt_double(r.f_val) << ',' << fmt_double(r.error) << ',' << r.nf << ','
     << r.se << ',' << fmt_double(r.pb) << ',' << r.k << ',' << r.L << ',' << fmt_time(r.wall_time)
     << ',' << fmt_time(r.lp_time) << ',' << fmt_double(r.delta_final) << ',' << r.sh << ','
     << fmt_double(r.a_final) << ',' << fmt_double(r.a_min_final) << ',' << r.au << ','
     << r.stop_reason;
  return os.str();
}

nlohmann::json to_json(const RunReport& r) {
  return nlohmann::json{{"problem", r.problem},
                        {"f_val", r.f_val},
                        {"error", r.error},
                        {"nf", r.nf},
                        {"se", r.se},
                        {"pb", r.pb},
                        {"k", r.k},
                        {"L", r.L},
                        {"wall_time", r.wall_time},
                        {"lp_time", r.lp_time},
                        {"delta_final", r.delta_final},
                        {"sh", r.sh},
                        {"a_final", r.a_final},
                        {"a_min_final", r.a_min_final},
                        {"au", r.au},
                        {"stop_reason", r.stop_reason}};
}

RunReport from_json(const nlohmann::json& j) {
  RunReport r;
  r.problem = j.at("problem").get<std::string>();
  r.f_val = j.at("f_val").get<double>();
  r.error = j.at("error").get<double>();
  r.nf = j.at("nf").get<long>();
  r.se = j.at("se").get<long>();
  r.pb = j.at("pb").get<double>();
  r.k = j.at("k").get<long>();
  r.L = j.at("L").get<long>();
  r.wall_time = j.at("wall_time").get<double>();
  r.lp_time = j.at("lp_time").get<double>();
  r.delta_final = j.at("delta_final").get<double>();
  r.sh = j.at("sh").get<long>();
  r.a_final = j.at("a_final").get<double>();
  r.a_min_final = j.at("a_min_final").get<double>();
  r.au = j.at("au").get<long>();
  r.stop_reason = j.at("stop_reason").get<std::string>();
  return r;
}

}  // namespace

std::vector<RunResult> run_batch(const RunConfig& config) {
  std::vector<RunResult> results(config.problems.size());
  const int workers =
      std::max(1, std::min<int>(config.parallel, static_cast<int>(config.problems.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < config.problems.size(); ++i)
      results[i] = run_one(config, config.problems[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= config.problems.size()) return;
        results[i] = run_one(config, config.problems[i]);
      }
    });
  for (auto& t : pool) t.join();
  return results;
}

std::string emit_table(std::span<const RunReport> reports, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::csv) {
    os << kCsvHeader << '\n';
    for (const auto& r : reports) os << csv_row(r) << '\n';
    return os.str();
  }
  if (format == OutputFormat::jsonl) {
    for (const auto& r : reports) os << to_json(r).dump() << '\n';
    return os.str();
  }
  // human-facing aligned table
  const std::vector<std::string> headers = {"problem",  "f_val",      "error",   "nf", "se",
                                            "pb",       "k",          "L",       "time", "lp_time",
                                            "delta",    "sh",         "a",       "a_min", "au",
                                            "stop"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : reports)
    cells.push_back({r.problem, fmt_double(r.f_val), fmt_double(r.error, 4), std::to_string(r.nf),
                     std::to_string(r.se), fmt_double(r.pb, 4), std::to_string(r.k),
                     std::to_string(r.L), fmt_time(r.wall_time), fmt_time(r.lp_time),
                     fmt_double(r.delta_final, 6), std::to_string(r.sh),
                     fmt_double(r.a_final, 6), fmt_double(r.a_min_final, 6), std::to_string(r.au),
                     r.stop_reason});
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c] << std::string(width[c] - row[c].size() + (c + 1 < row.size() ? 2 : 0), ' ');
    }
    os << '\n';
  };
  emit_row(headers);
  for (const auto& row : cells) emit_row(row);
  return os.str();
}

std::vector<RunReport> parse_jsonl(const std::string& text) {
  std::vector<RunReport> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    out.push_back(from_json(nlohmann::json::parse(line)));
  }
  return out;
}

double ToleranceSpec::tol_for(std::string_view problem) const {
  for (const auto& [name, tol] : per_problem)
    if (name == problem) return tol;
  return default_tol;
}

bool ToleranceSpec::unbounded_expected(std::string_view problem) const {
  for (const auto& name : expect_unbounded)
    if (name == problem) return true;
  return false;
}

CompareSummary compare_to_reference(std::span<const RunReport> reports,
                                    const ToleranceSpec& spec) {
  CompareSummary summary;
  std::ostringstream os;
  for (const auto& r : reports) {
    bool ok;
    std::string detail;
    if (spec.unbounded_expected(r.problem)) {
      ok = r.stop_reason == to_string(StopReason::unbounded);
      detail = "stop_reason=" + r.stop_reason + " (expected unbounded)";
    } else {
      const double tol = spec.tol_for(r.problem);
      ok = std::isfinite(r.error) && std::abs(r.error) <= tol;
      detail = "|error|=" + fmt_double(std::abs(r.error), 4) + " tol=" + fmt_double(tol, 4);
    }
    (ok ? summary.passed : summary.failed) += 1;
    os << (ok ? "PASS" : "FAIL") << "  " << r.problem << "  " << detail << '\n';
  }
  os << summary.passed << " passed, " << summary.failed << " failed\n";
  summary.text = os.str();
  return summary;
}

}  // namespace lpbundle
