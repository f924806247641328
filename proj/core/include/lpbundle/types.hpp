#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpbundle {

using Vec = std::vector<double>;

// ---- error taxonomy -------------------------------------------------------

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent vector lengths between rows, boxes, or oracle responses.
class DimensionMismatch : public SolverError {
public:
  using SolverError::SolverError;
};

/// The LP engine lost feasibility/optimality beyond recoverable tolerances,
/// or the bundle grew past its hard cap.
class NumericalFailure : public SolverError {
public:
  using SolverError::SolverError;
};

/// A brute-force reference was asked for an instance above its size limits.
class SizeExceeded : public SolverError {
public:
  using SolverError::SolverError;
};

/// Nonpositive model reduction reached a ratio computation.
class DivisionGuard : public SolverError {
public:
  using SolverError::SolverError;
};

/// Backtracking ran past its step cap; the level bound or oracle is broken.
class BacktrackExhausted : public SolverError {
public:
  using SolverError::SolverError;
};

/// Finite-difference validation requested at a point too close to a kink.
class NotSmoothHere : public SolverError {
public:
  using SolverError::SolverError;
};

// ---- small dense-vector helpers -------------------------------------------

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double norm_1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double norm_2_sq(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

inline double norm_2(std::span<const double> a) { return std::sqrt(norm_2_sq(a)); }

inline Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline double dist_inf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

struct ToleranceConfig {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
};

}  // namespace lpbundle
