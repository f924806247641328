#pragma once

#include <cstdint>
#include <utility>

#include "lpbundle/types.hpp"

namespace lpbundle {

/// One epigraph constraint z >= <gradient, x> + offset.
struct PlaneRow {
  Vec gradient;
  double offset = 0.0;

  double value_at(std::span<const double> x) const { return dot(gradient, x) + offset; }
};

/// Infinity-norm trust region |x - center|_inf <= radius.
struct BoxRegion {
  Vec center;
  double radius = 1.0;
};

enum class BoxActivity : std::uint8_t { inactive, lower, upper };

/// Primal optimum of the epigraph LP together with the dual certificate used
/// by the model-reduction identity: active rows, their multipliers (sum to
/// one), and which box faces the optimum sits on.
struct SubproblemSolution {
  Vec x_star;
  double z_star = 0.0;
  std::vector<std::size_t> active_rows;   // indices into the row list
  std::vector<double> multipliers;        // aligned with active_rows, lambda_i >= 0
  std::vector<BoxActivity> box_active;    // one flag per coordinate
  bool boundary_hit = false;              // |x*-center|_inf == radius (within tol)

  bool is_active(std::size_t row) const {
    for (std::size_t r : active_rows)
      if (r == row) return true;
    return false;
  }
  /// Multiplier of `row`, zero when the row is not active.
  double multiplier(std::size_t row) const {
    for (std::size_t k = 0; k < active_rows.size(); ++k)
      if (active_rows[k] == row) return multipliers[k];
    return 0.0;
  }
};

/// Minimize z over the rows and box with a dense bounded-variable primal
/// simplex. Deterministic: Dantzig pricing with lowest-index tie-breaks,
/// switching to Bland's rule after 50*(n+m) pivots.
SubproblemSolution solve_subproblem(const std::vector<PlaneRow>& rows, const BoxRegion& box,
                                    const ToleranceConfig& tol = {});

/// Brute-force reference: enumerate all basic points (n+1 active constraints
/// among rows and box faces) and return the best feasible one. Limited to
/// n <= 3 and at most 6 rows.
std::pair<Vec, double> vertex_oracle(const std::vector<PlaneRow>& rows, const BoxRegion& box);

}  // namespace lpbundle
