#include "lpbundle/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lpbundle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounded-variable primal simplex on the epigraph formulation.
//
// Variables: 0..n-1 box coordinates, n the epigraph variable z (free),
// n+1..n+m the row slacks. Row i reads  <g_i, x> - z + s_i = -offset_i.
// The initial basis puts z on the row attaining the pointwise max at the
// lower box corner and every other slack in its own row, which is feasible
// without a phase-1.
class EpigraphSimplex {
public:
  EpigraphSimplex(const std::vector<PlaneRow>& rows, const BoxRegion& box,
                  const ToleranceConfig& tol)
      : rows_(rows), box_(box), tol_(tol), n_(box.center.size()), m_(rows.size()) {
    const std::size_t nvars = n_ + 1 + m_;
    lower_.assign(nvars, 0.0);
    upper_.assign(nvars, kInf);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = box_.center[j] - box_.radius;
      upper_[j] = box_.center[j] + box_.radius;
    }
    lower_[n_] = -kInf;
    upper_[n_] = kInf;
    status_.assign(nvars, AtLower);
    value_.assign(nvars, 0.0);
  }

  void solve() {
    init_basis();
    const std::size_t bland_after = 50 * (n_ + m_);
    const std::size_t hard_cap = 400 * (n_ + m_) + 20000;
    std::size_t pivots = 0;
    std::size_t since_refactor = 0;
    while (true) {
      const Vec y = dual_row();
      int enter = price(y, pivots >= bland_after);
      if (enter < 0) break;  // optimal
      if (++pivots > hard_cap)
        throw NumericalFailure("lp_core: simplex exceeded pivot cap (cycling or ill-conditioned bundle)");
      step(static_cast<std::size_t>(enter), pivots >= bland_after);
      if (++since_refactor >= 100) {
        refactorize();
        since_refactor = 0;
      }
    }
    if (since_refactor > 0) recompute_basic_values();
  }

  SubproblemSolution extract() {
    SubproblemSolution sol;
    sol.x_star.assign(value_.begin(), value_.begin() + n_);
    sol.z_star = value_[n_];

    const Vec y = dual_row();
    Vec lambda(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) lambda[i] = std::max(0.0, -y[i]);

    const double feas_scale = scale_estimate(sol);
    for (std::size_t i = 0; i < m_; ++i) {
      const double resid = rows_[i].value_at(sol.x_star) - sol.z_star;  // must be <= 0
      // backward-error scale of this row's evaluation
      double row_scale = std::abs(rows_[i].offset) + std::abs(sol.z_star);
      for (std::size_t j = 0; j < n_; ++j)
        row_scale += std::abs(rows_[i].gradient[j] * sol.x_star[j]);
      if (resid > 10.0 * tol_.feas_tol * std::max(feas_scale, row_scale))
        throw NumericalFailure("lp_core: primal feasibility residual beyond 10x tolerance");
      // The terminal basis defines the certificate: a row is active when its
      // slack sits nonbasic at zero. Recomputed residuals only back it up,
      // since they blur on ill-conditioned bundles.
      const bool slack_nonbasic = status_[n_ + 1 + i] != Basic;
      if (slack_nonbasic || resid >= -tol_.feas_tol * feas_scale) {
        sol.active_rows.push_back(i);
        sol.multipliers.push_back(lambda[i]);
      } else if (lambda[i] > 1e-7) {
        throw NumericalFailure("lp_core: complementary slackness violated");
      }
    }

    double sum_lambda = 0.0;
    for (double l : sol.multipliers) sum_lambda += l;
    if (std::abs(sum_lambda - 1.0) > 1e-7)
      throw NumericalFailure("lp_core: dual multipliers do not sum to one");

    sol.box_active.assign(n_, BoxActivity::inactive);
    sol.boundary_hit = false;
    for (std::size_t j = 0; j < n_; ++j) {
      const double lo_gap = sol.x_star[j] - lower_[j];
      const double hi_gap = upper_[j] - sol.x_star[j];
      if (hi_gap <= tol_.feas_tol * (1.0 + std::abs(upper_[j]))) {
        sol.box_active[j] = BoxActivity::upper;
        sol.boundary_hit = true;
      } else if (lo_gap <= tol_.feas_tol * (1.0 + std::abs(lower_[j]))) {
        sol.box_active[j] = BoxActivity::lower;
        sol.boundary_hit = true;
      }
    }
    return sol;
  }

private:
  enum VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

  double feas_rhs(std::size_t i) const { return -rows_[i].offset; }

  double col_coef(std::size_t i, std::size_t var) const {
    if (var < n_) return rows_[i].gradient[var];
    if (var == n_) return -1.0;
    return var - (n_ + 1) == i ? 1.0 : 0.0;
  }

  double scale_estimate(const SubproblemSolution& sol) const {
    double s = 1.0 + std::abs(sol.z_star);
    for (const auto& r : rows_) s = std::max(s, 1.0 + std::abs(r.offset));
    return s;
  }

  void init_basis() {
    // start at the corner favored by the summed row gradients; it tends to
    // sit near the optimal vertex and saves pivots
    for (std::size_t j = 0; j < n_; ++j) {
      double g_sum = 0.0;
      for (const auto& r : rows_) g_sum += r.gradient[j];
      status_[j] = g_sum > 0.0 ? AtLower : AtUpper;
      value_[j] = g_sum > 0.0 ? lower_[j] : upper_[j];
    }
    // z basic on the row with the largest value at the lower corner.
    std::size_t r = 0;
    double best = -kInf;
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = rows_[i].value_at(std::span<const double>(value_.data(), n_));
      if (v > best) {
        best = v;
        r = i;
      }
    }
    basis_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = static_cast<int>(n_ + 1 + i);
    basis_[r] = static_cast<int>(n_);
    status_[n_] = Basic;
    for (std::size_t i = 0; i < m_; ++i) status_[n_ + 1 + i] = (i == r) ? AtLower : Basic;
    refactorize();
  }

  // Rebuild the dense basis inverse from scratch (Gauss-Jordan, partial
  // pivoting) and recompute the basic variable values.
  void refactorize() {
    binv_.assign(m_ * m_, 0.0);
    Vec b(m_ * m_, 0.0);
    for (std::size_t p = 0; p < m_; ++p)
      for (std::size_t i = 0; i < m_; ++i) b[i * m_ + p] = col_coef(i, basis_[p]);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      double best = std::abs(b[c * m_ + c]);
      for (std::size_t i = c + 1; i < m_; ++i)
        if (std::abs(b[i * m_ + c]) > best) {
          best = std::abs(b[i * m_ + c]);
          piv = i;
        }
      if (best < 1e-13) throw NumericalFailure("lp_core: singular simplex basis");
      if (piv != c) {
        for (std::size_t j = 0; j < m_; ++j) {
          std::swap(b[piv * m_ + j], b[c * m_ + j]);
          std::swap(binv_[piv * m_ + j], binv_[c * m_ + j]);
        }
      }
      const double inv = 1.0 / b[c * m_ + c];
      for (std::size_t j = 0; j < m_; ++j) {
        b[c * m_ + j] *= inv;
        binv_[c * m_ + j] *= inv;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = b[i * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < m_; ++j) {
          b[i * m_ + j] -= f * b[c * m_ + j];
          binv_[i * m_ + j] -= f * binv_[c * m_ + j];
        }
      }
    }
    recompute_basic_values();
  }

  void recompute_basic_values() {
    // rhs minus nonbasic contributions, then x_B = Binv * r.
    Vec r(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double v = feas_rhs(i);
      for (std::size_t j = 0; j < n_; ++j)
        if (status_[j] != Basic) v -= rows_[i].gradient[j] * value_[j];
      // nonbasic slacks sit at zero and z is always basic
      r[i] = v;
    }
    for (std::size_t p = 0; p < m_; ++p) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[p * m_ + i] * r[i];
      value_[basis_[p]] = v;
    }
    // two refinement sweeps knock the basis-conditioning error out of the
    // recovered values
    for (int sweep = 0; sweep < 2; ++sweep) {
      Vec resid(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        double v = r[i];
        for (std::size_t p = 0; p < m_; ++p) v -= col_coef(i, basis_[p]) * value_[basis_[p]];
        resid[i] = v;
      }
      for (std::size_t p = 0; p < m_; ++p) {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) v += binv_[p * m_ + i] * resid[i];
        value_[basis_[p]] += v;
      }
    }
  }

  // Dual vector: y^T = c_B^T Binv with c_B = e_{position of z}.
  Vec dual_row() const {
    std::size_t pz = 0;
    while (basis_[pz] != static_cast<int>(n_)) ++pz;
    Vec y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = binv_[pz * m_ + i];
    return y;
  }

  // Returns entering variable index or -1 at optimality.
  int price(const Vec& y, bool bland) const {
    const double ptol = tol_.opt_tol;
    int best_var = -1;
    double best_score = ptol;
    auto consider = [&](std::size_t var, double d) {
      double score = 0.0;
      if (status_[var] == AtLower && d < -ptol) score = -d;
      else if (status_[var] == AtUpper && d > ptol) score = d;
      else return false;
      if (score > best_score) {
        best_score = score;
        best_var = static_cast<int>(var);
      }
      return true;
    };
    for (std::size_t j = 0; j < n_; ++j) {
      if (status_[j] == Basic) continue;
      double d = 0.0;
      for (std::size_t i = 0; i < m_; ++i) d -= y[i] * rows_[i].gradient[j];
      if (consider(j, d) && bland) return static_cast<int>(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t var = n_ + 1 + i;
      if (status_[var] == Basic) continue;
      if (consider(var, -y[i]) && bland) return static_cast<int>(var);
    }
    return best_var;
  }

  void step(std::size_t enter, bool bland) {
    // Direction of basic values when the entering variable increases by one
    // unit along its improving direction.
    Vec acol(m_);
    for (std::size_t i = 0; i < m_; ++i) acol[i] = col_coef(i, enter);
    Vec w(m_, 0.0);
    for (std::size_t p = 0; p < m_; ++p) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[p * m_ + i] * acol[i];
      w[p] = v;
    }
    const double dir = (status_[enter] == AtLower) ? 1.0 : -1.0;  // movement of entering var

    double t_max = upper_[enter] - lower_[enter];  // bound flip distance (may be inf)
    int leave_pos = -1;
    bool leave_to_upper = false;
    for (std::size_t p = 0; p < m_; ++p) {
      const double coef = dir * w[p];  // basic value changes by -coef * t
      if (std::abs(coef) < 1e-11) continue;
      const int var = basis_[p];
      double t;
      bool to_upper;
      if (coef > 0.0) {
        if (lower_[var] == -kInf) continue;
        t = (value_[var] - lower_[var]) / coef;
        to_upper = false;
      } else {
        if (upper_[var] == kInf) continue;
        t = (value_[var] - upper_[var]) / coef;
        to_upper = true;
      }
      t = std::max(t, 0.0);
      bool better = t < t_max - 1e-12;
      if (!better && t < t_max + 1e-12 && leave_pos >= 0) {
        // deterministic tie-breaks: Bland takes the lowest variable index,
        // Dantzig the lowest row position
        better = bland ? var < basis_[leave_pos] : static_cast<int>(p) < leave_pos;
      }
      if (better) {
        t_max = std::min(t_max, t);
        leave_pos = static_cast<int>(p);
        leave_to_upper = to_upper;
      }
    }
    if (!(t_max < kInf))
      throw NumericalFailure("lp_core: unbounded simplex step (invalid epigraph instance)");

    // Apply the move.
    for (std::size_t p = 0; p < m_; ++p) value_[basis_[p]] -= dir * w[p] * t_max;
    if (leave_pos < 0) {
      // bound flip, basis unchanged
      status_[enter] = (status_[enter] == AtLower) ? AtUpper : AtLower;
      value_[enter] = (status_[enter] == AtLower) ? lower_[enter] : upper_[enter];
      return;
    }
    const int leave_var = basis_[leave_pos];
    value_[enter] = (status_[enter] == AtLower ? lower_[enter] : upper_[enter]) + dir * t_max;
    status_[leave_var] = leave_to_upper ? AtUpper : AtLower;
    value_[leave_var] = leave_to_upper ? upper_[leave_var] : lower_[leave_var];
    basis_[leave_pos] = static_cast<int>(enter);
    status_[enter] = Basic;

    // Rank-one update of the inverse: pivot on w[leave_pos].
    const std::size_t p = static_cast<std::size_t>(leave_pos);
    const double piv = w[p];
    if (std::abs(piv) < 1e-13) {
      refactorize();
      return;
    }
    for (std::size_t j = 0; j < m_; ++j) binv_[p * m_ + j] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p) continue;
      const double f = w[i];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m_; ++j) binv_[i * m_ + j] -= f * binv_[p * m_ + j];
    }
  }

  const std::vector<PlaneRow>& rows_;
  const BoxRegion& box_;
  ToleranceConfig tol_;
  std::size_t n_, m_;
  Vec lower_, upper_, value_;
  std::vector<std::uint8_t> status_;
  std::vector<int> basis_;
  Vec binv_;  // m x m row-major
};

void validate_instance(const std::vector<PlaneRow>& rows, const BoxRegion& box) {
  if (rows.empty()) throw DimensionMismatch("lp_core: empty row list");
  if (!(box.radius > 0.0) || !std::isfinite(box.radius))
    throw DimensionMismatch("lp_core: box radius must be positive and finite");
  if (!all_finite(box.center)) throw DimensionMismatch("lp_core: box center not finite");
  for (const auto& r : rows) {
    if (r.gradient.size() != box.center.size())
      throw DimensionMismatch("lp_core: row gradient length differs from box dimension");
    if (!all_finite(r.gradient) || !std::isfinite(r.offset))
      throw DimensionMismatch("lp_core: row entries not finite");
  }
}

}  // namespace

SubproblemSolution solve_subproblem(const std::vector<PlaneRow>& rows, const BoxRegion& box,
                                    const ToleranceConfig& tol) {
  validate_instance(rows, box);
  EpigraphSimplex simplex(rows, box, tol);
  simplex.solve();
  return simplex.extract();
}

std::pair<Vec, double> vertex_oracle(const std::vector<PlaneRow>& rows, const BoxRegion& box) {
  validate_instance(rows, box);
  const std::size_t n = box.center.size();
  const std::size_t m = rows.size();
  if (n > 3 || m > 6)
    throw SizeExceeded("vertex_oracle: limited to n <= 3 and at most 6 rows");

  // Constraint pool: rows first, then box faces (j, -1) and (j, +1).
  struct Face {
    std::size_t j;
    double side;
  };
  std::vector<Face> faces;
  for (std::size_t j = 0; j < n; ++j) {
    faces.push_back({j, -1.0});
    faces.push_back({j, +1.0});
  }
  const std::size_t total = m + faces.size();
  const std::size_t k = n + 1;

  Vec best_x;
  double best_z = kInf;

  std::vector<std::size_t> idx(k);
  // enumerate all k-subsets of the constraint pool
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  auto advance = [&]() {
    std::size_t i = k;
    while (i-- > 0) {
      if (++idx[i] <= total - (k - i)) {
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  do {
    bool has_row = false;
    for (std::size_t i : idx) has_row |= (i < m);
    if (!has_row) continue;  // z undetermined without a row

    // Solve the (n+1)x(n+1) system for (x, z).
    const std::size_t dim = n + 1;
    std::vector<double> a(dim * dim, 0.0), b(dim, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t c = idx[r];
      if (c < m) {
        for (std::size_t j = 0; j < n; ++j) a[r * dim + j] = rows[c].gradient[j];
        a[r * dim + n] = -1.0;
        b[r] = -rows[c].offset;
      } else {
        const Face& f = faces[c - m];
        a[r * dim + f.j] = 1.0;
        b[r] = box.center[f.j] + f.side * box.radius;
      }
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (std::size_t c = 0; c < dim && !singular; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < dim; ++r)
        if (std::abs(a[r * dim + c]) > std::abs(a[piv * dim + c])) piv = r;
      if (std::abs(a[piv * dim + c]) < 1e-12) {
        singular = true;
        break;
      }
      if (piv != c) {
        for (std::size_t j = 0; j < dim; ++j) std::swap(a[piv * dim + j], a[c * dim + j]);
        std::swap(b[piv], b[c]);
      }
      for (std::size_t r = c + 1; r < dim; ++r) {
        const double f = a[r * dim + c] / a[c * dim + c];
        if (f == 0.0) continue;
        for (std::size_t j = c; j < dim; ++j) a[r * dim + j] -= f * a[c * dim + j];
        b[r] -= f * b[c];
      }
    }
    if (singular) continue;
    Vec sol(dim);
    for (std::size_t r = dim; r-- > 0;) {
      double v = b[r];
      for (std::size_t j = r + 1; j < dim; ++j) v -= a[r * dim + j] * sol[j];
      sol[r] = v / a[r * dim + r];
    }

    const std::span<const double> x(sol.data(), n);
    const double z = sol[n];
    bool feasible = true;
    for (std::size_t i = 0; i < m && feasible; ++i)
      feasible = rows[i].value_at(x) <= z + 1e-9;
    for (std::size_t j = 0; j < n && feasible; ++j)
      feasible = std::abs(sol[j] - box.center[j]) <= box.radius + 1e-9;
    if (feasible && z < best_z) {
      best_z = z;
      best_x.assign(sol.begin(), sol.begin() + n);
    }
  } while (advance());

  if (!(best_z < kInf)) throw NumericalFailure("vertex_oracle: no feasible basic point found");
  return {best_x, best_z};
}

}  // namespace lpbundle
