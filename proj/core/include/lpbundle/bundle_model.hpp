#pragma once

#include <iosfwd>
#include <optional>

#include "lpbundle/lp_core.hpp"
#include "lpbundle/types.hpp"

namespace lpbundle {

/// One auxiliary point with its objective value and a single subgradient.
/// Cutting-plane rows are derived from these raw triples on demand, so the
/// stored data never depends on the current center or convexification
/// parameter.
struct BundleElement {
  Vec point;     // y_i
  double value;  // f(y_i)
  Vec subgrad;   // one element of the subdifferential at y_i
  int born_major = 0;
  int born_minor = 0;
  int inactive_count = 0;
  bool is_center_plane = false;
};

/// Convexification parameter state: the active value `a`, its bundle-derived
/// lower bound `a_min`, and how often `a` changed (the "au" column).
struct ConvexificationState {
  double a = 0.0;
  double a_min = 0.0;
  int a_updates = 0;
};

/// Linearization error of the plain cutting plane at the center:
/// e~_i = f(center) - [f(y_i) + <s_i, center - y_i>].
double linearization_error_convex(const Vec& center, double f_center, const BundleElement& elem);

/// Linearization error of the convexified cutting plane (E_i).
double linearization_error_e(const Vec& center, double f_center, const BundleElement& elem,
                             double a);

/// Lower bound for the convexification parameter over all ordered pairs of
/// distinct bundle points; never negative. Coincident points are skipped.
double compute_a_min(std::span<const BundleElement> bundle);

/// Ordered collection of bundle elements with an incrementally maintained
/// convexification lower bound.
class Bundle {
public:
  static constexpr std::size_t kMaxElements = 5000;
  static constexpr double kCoincidentTol = 1e-14;

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const BundleElement& operator[](std::size_t i) const { return elems_[i]; }
  BundleElement& operator[](std::size_t i) { return elems_[i]; }
  std::span<const BundleElement> elements() const { return elems_; }

  /// Appends an element, updating a_min over the new pairs only.
  std::size_t add(BundleElement elem);

  /// Removes the elements flagged by `drop` (size() flags); recomputes a_min.
  void remove_flagged(const std::vector<char>& drop);

  double a_min() const { return std::max(a_min_tilde_, 0.0); }

  /// Index of the element flagged as the current center plane, if any.
  std::optional<std::size_t> center_index() const;

  void clear();

private:
  std::vector<BundleElement> elems_;
  double a_min_tilde_ = 0.0;  // max over ordered pairs, before the clamp at 0
  bool any_pair_ = false;
};

/// Rows of the LP subproblem for the given center and convexification
/// parameter, one per bundle element, in element order.
std::vector<PlaneRow> build_rows(const Bundle& bundle, const Vec& center, double a);

/// Both sides of the model-reduction identity at an LP solution, plus the
/// aggregate subgradient and the epsilon used by the epsilon-subgradient
/// statement.
struct ModelReductionCheck {
  double lhs = 0.0;            // f(center) - z*
  double rhs = 0.0;            // sum lambda_i E_i (+ Delta * |aggregate|_1 on the boundary)
  double epsilon_tilde = 0.0;  // sum lambda_i E_i
  Vec aggregate;               // sum lambda_i (s_i + a (y_i - center))
};
ModelReductionCheck model_reduction_identity(const SubproblemSolution& sol, const Bundle& bundle,
                                             const Vec& center, double f_center, double a,
                                             double delta);

/// Updates inactivity counters after an LP solve: resets on rows active at
/// the solution, increments otherwise.
void mark_activity(Bundle& bundle, const SubproblemSolution& sol);

enum class StepKind { serious, minor };

/// Pruning rule of the convex algorithm. Minor steps keep the center plane,
/// the active planes, and planes inactive for fewer than T solves; serious
/// steps drop only planes inactive for T or more solves. Counters must have
/// been refreshed with mark_activity first.
void prune_lpbc(Bundle& bundle, const SubproblemSolution& sol, StepKind step, int T);

/// Serious-step pruning of the nonconvex algorithm: drops every element with
/// value above the level bound f_u.
void prune_lpbnc_serious(Bundle& bundle, double f_u);

/// Line-oriented debug dump, one record per element: y, f, s, born, inactive.
void dump_bundle(const Bundle& bundle, std::ostream& os);

}  // namespace lpbundle
