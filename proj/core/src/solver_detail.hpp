#pragma once

#include <chrono>
#include <limits>

#include "lpbundle/problems.hpp"

namespace lpbundle::detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Oracle adapter that counts value and subgradient evaluations separately.
struct CountingOracle {
  const Problem& p;
  long nf = 0;
  long se = 0;
  long nf_backtrack = 0;

  double value(std::span<const double> x) {
    ++nf;
    const double v = p.value(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }
  OracleResponse value_and_subgrad(std::span<const double> x) {
    ++nf;
    ++se;
    return evaluate(p, x);
  }
  Vec subgrad_at_known_value(std::span<const double> x) {
    ++se;
    return p.eval(x).subgrad;
  }
};

}  // namespace lpbundle::detail
