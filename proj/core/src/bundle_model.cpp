#include "lpbundle/bundle_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace lpbundle {

namespace {

// Ordered-pair term of the a_min formula; the subgradient comes from `from`.
// Returns -inf for coincident points so the pair drops out of the max.
double pair_term(const BundleElement& to, const BundleElement& from) {
  const Vec d = sub(to.point, from.point);
  const double dist_sq = norm_2_sq(d);
  if (dist_sq <= Bundle::kCoincidentTol * Bundle::kCoincidentTol)
    return -std::numeric_limits<double>::infinity();
  const double num = to.value - from.value - dot(from.subgrad, d);
  return -num / (0.5 * dist_sq);
}

}  // namespace

double linearization_error_convex(const Vec& center, double f_center, const BundleElement& elem) {
  if (elem.point.size() != center.size())
    throw DimensionMismatch("linearization_error: point/center length mismatch");
  const Vec d = sub(center, elem.point);
  return f_center - (elem.value + dot(elem.subgrad, d));
}

double linearization_error_e(const Vec& center, double f_center, const BundleElement& elem,
                             double a) {
  if (elem.point.size() != center.size())
    throw DimensionMismatch("linearization_error: point/center length mismatch");
  const Vec to_center = sub(center, elem.point);
  const double dist_sq = norm_2_sq(to_center);
  double plane = elem.value + 0.5 * a * dist_sq;
  for (std::size_t j = 0; j < center.size(); ++j)
    plane += (elem.subgrad[j] - a * to_center[j]) * to_center[j];
  return f_center - plane;
}

double compute_a_min(std::span<const BundleElement> bundle) {
  double amin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bundle.size(); ++i)
    for (std::size_t j = 0; j < bundle.size(); ++j) {
      if (i == j) continue;
      amin = std::max(amin, pair_term(bundle[i], bundle[j]));
    }
  return std::max(amin, 0.0);
}

std::size_t Bundle::add(BundleElement elem) {
  if (elems_.size() >= kMaxElements)
    throw NumericalFailure("bundle: element cap exceeded (pathological run)");
  for (const auto& old : elems_) {
    const double t1 = pair_term(elem, old);
    const double t2 = pair_term(old, elem);
    const double t = std::max(t1, t2);
    if (std::isfinite(t)) {
      a_min_tilde_ = any_pair_ ? std::max(a_min_tilde_, t) : t;
      any_pair_ = true;
    }
  }
  elems_.push_back(std::move(elem));
  return elems_.size() - 1;
}

void Bundle::remove_flagged(const std::vector<char>& drop) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (!drop[i]) {
      if (w != i) elems_[w] = std::move(elems_[i]);
      ++w;
    }
  elems_.resize(w);
  // full recompute after deletions
  any_pair_ = false;
  a_min_tilde_ = 0.0;
  for (std::size_t i = 0; i < elems_.size(); ++i)
    for (std::size_t j = i + 1; j < elems_.size(); ++j) {
      const double t = std::max(pair_term(elems_[i], elems_[j]), pair_term(elems_[j], elems_[i]));
      if (std::isfinite(t)) {
        a_min_tilde_ = any_pair_ ? std::max(a_min_tilde_, t) : t;
        any_pair_ = true;
      }
    }
}

std::optional<std::size_t> Bundle::center_index() const {
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (elems_[i].is_center_plane) return i;
  return std::nullopt;
}

void Bundle::clear() {
  elems_.clear();
  a_min_tilde_ = 0.0;
  any_pair_ = false;
}

std::vector<PlaneRow> build_rows(const Bundle& bundle, const Vec& center, double a) {
  std::vector<PlaneRow> rows;
  rows.reserve(bundle.size());
  for (const auto& e : bundle.elements()) {
    if (e.point.size() != center.size())
      throw DimensionMismatch("build_rows: element dimension differs from center");
    PlaneRow row;
    row.gradient.resize(center.size());
    const Vec from_center = sub(e.point, center);
    for (std::size_t j = 0; j < center.size(); ++j)
      row.gradient[j] = e.subgrad[j] + a * from_center[j];
    // offset so that the row value at x equals h(x; center, a, y_i)
    row.offset = e.value + 0.5 * a * norm_2_sq(from_center) - dot(row.gradient, e.point);
    rows.push_back(std::move(row));
  }
  return rows;
}

ModelReductionCheck model_reduction_identity(const SubproblemSolution& sol, const Bundle& bundle,
                                             const Vec& center, double f_center, double a,
                                             double delta) {
  ModelReductionCheck out;
  out.lhs = f_center - sol.z_star;
  out.aggregate.assign(center.size(), 0.0);
  for (std::size_t k = 0; k < sol.active_rows.size(); ++k) {
    const std::size_t i = sol.active_rows[k];
    const double lam = sol.multipliers[k];
    const BundleElement& e = bundle[i];
    out.epsilon_tilde += lam * linearization_error_e(center, f_center, e, a);
    for (std::size_t j = 0; j < center.size(); ++j)
      out.aggregate[j] += lam * (e.subgrad[j] + a * (e.point[j] - center[j]));
  }
  out.rhs = out.epsilon_tilde;
  if (sol.boundary_hit) out.rhs += delta * norm_1(out.aggregate);
  return out;
}

void mark_activity(Bundle& bundle, const SubproblemSolution& sol) {
  std::vector<char> active(bundle.size(), 0);
  for (std::size_t r : sol.active_rows) active[r] = 1;
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    if (active[i])
      bundle[i].inactive_count = 0;
    else
      bundle[i].inactive_count += 1;
  }
}

void prune_lpbc(Bundle& bundle, const SubproblemSolution& sol, StepKind step, int T) {
  std::vector<char> active(bundle.size(), 0);
  for (std::size_t r : sol.active_rows) active[r] = 1;
  std::vector<char> drop(bundle.size(), 0);
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    const BundleElement& e = bundle[i];
    if (e.is_center_plane) continue;
    if (step == StepKind::minor) {
      drop[i] = !active[i] && e.inactive_count >= T;
    } else {
      drop[i] = e.inactive_count >= T;
    }
  }
  bundle.remove_flagged(drop);
}

void prune_lpbnc_serious(Bundle& bundle, double f_u) {
  std::vector<char> drop(bundle.size(), 0);
  for (std::size_t i = 0; i < bundle.size(); ++i) drop[i] = bundle[i].value > f_u;
  bundle.remove_flagged(drop);
}

void dump_bundle(const Bundle& bundle, std::ostream& os) {
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    const auto& e = bundle[i];
    os << i << " born=" << e.born_major << ',' << e.born_minor
       << " inactive=" << e.inactive_count << (e.is_center_plane ? " center" : "") << " f=" << e.value
       << " y=[";
    for (std::size_t j = 0; j < e.point.size(); ++j) os << (j ? "," : "") << e.point[j];
    os << "] s=[";
    for (std::size_t j = 0; j < e.subgrad.size(); ++j) os << (j ? "," : "") << e.subgrad[j];
    os << "]\n";
  }
}

}  // namespace lpbundle
