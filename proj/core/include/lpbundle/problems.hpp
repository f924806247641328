#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "lpbundle/types.hpp"

namespace lpbundle {

/// Exact objective value and one subgradient at a point. `in_domain` is false
/// (with value +inf) outside a problem's domain.
struct OracleResponse {
  double value = 0.0;
  Vec subgrad;
  bool in_domain = true;
};

/// One benchmark problem: standard start, reference optimum, and exact value
/// and subgradient oracles. Max-type oracles break ties toward the lowest
/// attaining piece index, so responses are deterministic.
struct Problem {
  std::string name;
  std::size_t dim = 0;
  Vec x0;
  double f_opt_ref = 0.0;
  bool convex = false;

  std::function<double(std::span<const double>)> value;
  std::function<OracleResponse(std::span<const double>)> eval;
  /// Estimated distance (in function-argument scale) to the nearest kink;
  /// used to guard finite-difference checks. +inf where smooth.
  std::function<double(std::span<const double>)> kink_margin;
};

/// All 32 benchmark problems: the 20 convex ones first (table order), then
/// the 12 nonconvex ones.
const std::vector<Problem>& registry();

/// Lookup by exact name; throws SolverError when absent.
const Problem& lookup(std::string_view name);

/// Dimension-checked oracle call.
OracleResponse evaluate(const Problem& p, std::span<const double> x);

/// Componentwise central-difference validation of the subgradient at a point
/// where the active piece is locally unique; returns the max absolute
/// component error. Throws NotSmoothHere when the margin test fails.
double fd_subgrad_check(const Problem& p, const Vec& x, double h);

/// Dense grid search for the proximal point and Moreau envelope of f at x
/// (dim <= 2 only): minimizes f(w) + (a/2)|w-x|^2 over the grid
/// x + [-grid_radius, grid_radius]^dim with spacing grid_step.
std::pair<Vec, double> brute_force_prox(const Problem& p, const Vec& x, double a,
                                        double grid_radius, double grid_step);

}  // namespace lpbundle
