#pragma once

#include "lpbundle/lpbnc.hpp"
#include "lpbundle/report.hpp"

namespace lpbundle {

enum class OutputFormat { table, csv, jsonl };

/// One batch: algorithm choice, resolved problem names, solver options.
struct RunConfig {
  std::string algorithm = "lpbc";  // "lpbc" or "lpbnc"
  std::vector<std::string> problems;
  LpbcOptions lpbc;
  LpbncOptions lpbnc;
  OutputFormat format = OutputFormat::table;
  int parallel = 1;
};

/// Expands a problem selector ("all", "convex", "nonconvex", names, table
/// indices or ranges like "1-14", comma separated) against the registry.
/// Indices refer to the algorithm's own table: the convex table for lpbc,
/// the nonconvex one for lpbnc.
std::vector<std::string> select_problems(const std::string& selector,
                                         const std::string& algorithm);

/// Runs every selected problem, isolating failures: a solver error becomes a
/// report with the corresponding stop_reason instead of aborting the batch.
/// Order of results matches the config regardless of parallelism.
std::vector<RunResult> run_batch(const RunConfig& config);

std::string emit_table(std::span<const RunReport> reports, OutputFormat format);
std::vector<RunReport> parse_jsonl(const std::string& text);

/// Per-problem acceptance thresholds on |error|; problems listed in
/// expect_unbounded must instead finish with unbounded status.
struct ToleranceSpec {
  double default_tol = 1e-4;
  std::vector<std::pair<std::string, double>> per_problem;
  std::vector<std::string> expect_unbounded;

  double tol_for(std::string_view problem) const;
  bool unbounded_expected(std::string_view problem) const;
};

struct CompareSummary {
  int passed = 0;
  int failed = 0;
  std::string text;
  bool ok() const { return failed == 0; }
};

CompareSummary compare_to_reference(std::span<const RunReport> reports,
                                    const ToleranceSpec& spec);

}  // namespace lpbundle
