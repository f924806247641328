#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "lpbundle/bundle_model.hpp"

using namespace lpbundle;

namespace {

BundleElement elem(Vec y, double f, Vec s) {
  BundleElement e;
  e.point = std::move(y);
  e.value = f;
  e.subgrad = std::move(s);
  return e;
}

}  // namespace

TEST_CASE("convex linearization errors on hand instances") {
  const Vec center{0.0};
  // f = x^2 at y=1
  CHECK(linearization_error_convex(center, 0.0, elem({1.0}, 1.0, {2.0})) == doctest::Approx(1.0));
  // plane through the center itself
  CHECK(linearization_error_convex(center, 0.0, elem({0.0}, 0.0, {2.0})) == doctest::Approx(0.0));
  // f = -x^2: convexity violated, negative error
  CHECK(linearization_error_convex(center, 0.0, elem({1.0}, -1.0, {-2.0})) ==
        doctest::Approx(-1.0));
}

TEST_CASE("convexified linearization errors") {
  const Vec center{0.0};
  const BundleElement e = elem({1.0}, -1.0, {-2.0});  // f = -x^2 at y=1
  CHECK(linearization_error_e(center, 0.0, e, 0.0) ==
        doctest::Approx(linearization_error_convex(center, 0.0, e)));
  CHECK(linearization_error_e(center, 0.0, e, 2.0) == doctest::Approx(0.0));
  CHECK(linearization_error_e(center, 0.0, e, 4.0) == doctest::Approx(1.0));
}

TEST_CASE("a_min on hand instances") {
  // f = -x^2: both ordered pairs give 2
  std::vector<BundleElement> nonconvex = {elem({0.0}, 0.0, {0.0}), elem({1.0}, -1.0, {-2.0})};
  CHECK(compute_a_min(nonconvex) == doctest::Approx(2.0).epsilon(1e-12));
  // f = x^2: negative pair terms clamp to zero
  std::vector<BundleElement> convex = {elem({0.0}, 0.0, {0.0}), elem({1.0}, 1.0, {2.0})};
  CHECK(compute_a_min(convex) == doctest::Approx(0.0));
  // singleton
  std::vector<BundleElement> single = {elem({0.0}, 0.0, {0.0})};
  CHECK(compute_a_min(single) == doctest::Approx(0.0));
}

TEST_CASE("incremental a_min matches the batch recompute and is monotone under adds") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Bundle b;
  double prev = 0.0;
  for (int i = 0; i < 40; ++i) {
    b.add(elem({u(rng), u(rng)}, u(rng), {u(rng), u(rng)}));
    CHECK(b.a_min() >= prev - 1e-15);
    CHECK(b.a_min() == doctest::Approx(compute_a_min(b.elements())).epsilon(1e-12));
    prev = b.a_min();
  }
  // coincident points are skipped rather than dividing by zero
  Bundle c;
  c.add(elem({1.0, 1.0}, 0.5, {1.0, 0.0}));
  c.add(elem({1.0, 1.0}, 0.9, {0.0, 1.0}));
  CHECK(std::isfinite(c.a_min()));
}

TEST_CASE("rows evaluate to h and reproduce f(center) - E_i at the center") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Bundle b;
    const Vec center{u(rng), u(rng), u(rng)};
    const double f_center = u(rng);
    for (int i = 0; i < 6; ++i)
      b.add(elem({u(rng), u(rng), u(rng)}, u(rng), {u(rng), u(rng), u(rng)}));
    const double a = std::abs(u(rng));
    const auto rows = build_rows(b, center, a);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double at_center = rows[i].value_at(center);
      const double ei = linearization_error_e(center, f_center, b[i], a);
      CHECK(at_center == doctest::Approx(f_center - ei).epsilon(1e-10));
    }
  }
}

TEST_CASE("rows at a = 0 are the plain cutting planes") {
  Bundle b;
  b.add(elem({1.0}, -1.0, {-2.0}));
  const auto rows = build_rows(b, {0.0}, 0.0);
  // f(y) + <s, x - y> = -1 - 2(x - 1) = 1 - 2x
  CHECK(rows[0].gradient[0] == doctest::Approx(-2.0));
  CHECK(rows[0].offset == doctest::Approx(1.0));
  // with a = 2 the -x^2 plane flattens to z >= 0
  const auto rows2 = build_rows(b, {0.0}, 2.0);
  CHECK(rows2[0].gradient[0] == doctest::Approx(0.0));
  CHECK(rows2[0].offset == doctest::Approx(0.0));
}

TEST_CASE("model reduction identity on the |x| instance") {
  Bundle b;
  b.add(elem({0.0}, 0.0, {1.0}));  // center plane of f = |x| picking s = +1
  b.add(elem({-1.0}, 1.0, {-1.0}));
  b[0].is_center_plane = true;
  const Vec center{0.0};
  const auto rows = build_rows(b, center, 0.0);
  const auto sol = solve_subproblem(rows, {center, 1.0});
  CHECK(sol.x_star[0] == doctest::Approx(0.0));
  CHECK(sol.z_star == doctest::Approx(0.0));
  const auto idc = model_reduction_identity(sol, b, center, 0.0, 0.0, 1.0);
  CHECK(idc.lhs == doctest::Approx(0.0));
  CHECK(idc.rhs == doctest::Approx(idc.lhs).epsilon(1e-9));
}

TEST_CASE("interior optimum: aggregate vanishes and rhs has no boundary term") {
  Bundle b;
  b.add(elem({0.0, 0.0}, 0.0, {1.0, 0.0}));
  b.add(elem({0.1, 0.2}, 0.0, {-1.0, 0.0}));
  b.add(elem({-0.1, 0.3}, 0.0, {0.0, 1.0}));
  b.add(elem({0.2, -0.1}, 0.0, {0.0, -1.0}));
  const Vec center{0.0, 0.0};
  const auto rows = build_rows(b, center, 0.0);
  const auto sol = solve_subproblem(rows, {center, 10.0});
  REQUIRE_FALSE(sol.boundary_hit);
  const auto idc = model_reduction_identity(sol, b, center, 0.0, 0.0, 10.0);
  CHECK(norm_inf(idc.aggregate) <= 1e-7);
  CHECK(std::abs(idc.lhs - idc.rhs) <= 1e-6 * (1 + std::abs(idc.lhs)));
}

TEST_CASE("boundary optimum identity against random one-dimensional instances") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    Bundle b;
    const Vec center{u(rng)};
    const double f_center = u(rng);
    const int m = 1 + int(std::abs(u(rng)));
    b.add(elem(center, f_center, {u(rng)}));  // a plane through the center
    for (int i = 1; i < m; ++i) b.add(elem({u(rng)}, u(rng), {u(rng)}));
    const double delta = 0.1 + std::abs(u(rng));
    const double a = std::abs(u(rng));
    const auto rows = build_rows(b, center, a);
    const auto sol = solve_subproblem(rows, {center, delta});
    const auto idc = model_reduction_identity(sol, b, center, f_center, a, delta);
    CHECK(std::abs(idc.lhs - idc.rhs) <= 1e-6 * (1 + std::abs(idc.lhs)));
  }
}

TEST_CASE("E_i is nonnegative whenever a >= a_min") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Bundle b;
    const int m = 2 + (trial % 5);
    for (int i = 0; i < m; ++i) b.add(elem({u(rng), u(rng)}, u(rng), {u(rng), u(rng)}));
    const double a = b.a_min();
    // any bundle point may act as the center
    const std::size_t ci = trial % b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double ei = linearization_error_e(b[ci].point, b[ci].value, b[i], a);
      CHECK(ei >= -1e-12 * std::max(1.0, std::abs(b[ci].value)));
    }
  }
}

TEST_CASE("lpbc pruning keeps the center and active planes") {
  Bundle b;
  b.add(elem({0.0}, 0.0, {1.0}));
  b.add(elem({-1.0}, 1.0, {-1.0}));
  b.add(elem({0.5}, 0.5, {1.0}));
  b[0].is_center_plane = true;

  SUBCASE("all planes active: nothing removed, counters reset") {
    SubproblemSolution sol;
    sol.active_rows = {0, 1, 2};
    sol.multipliers = {0.5, 0.25, 0.25};
    b[1].inactive_count = 99;
    mark_activity(b, sol);
    prune_lpbc(b, sol, StepKind::minor, 20);
    CHECK(b.size() == 3);
    CHECK(b[1].inactive_count == 0);
  }

  SUBCASE("a plane inactive for T solves is removed on a minor step") {
    SubproblemSolution sol;
    sol.active_rows = {0};
    sol.multipliers = {1.0};
    b[1].inactive_count = 19;  // hits 20 after mark_activity
    mark_activity(b, sol);
    prune_lpbc(b, sol, StepKind::minor, 20);
    CHECK(b.size() == 2);
    CHECK(b[0].is_center_plane);
  }

  SUBCASE("the center plane survives any counter") {
    SubproblemSolution sol;
    sol.active_rows = {2};
    sol.multipliers = {1.0};
    b[0].inactive_count = 1000;
    mark_activity(b, sol);
    prune_lpbc(b, sol, StepKind::minor, 20);
    CHECK(b.center_index().has_value());
    prune_lpbc(b, sol, StepKind::serious, 20);
    CHECK(b.center_index().has_value());
  }
}

TEST_CASE("lpbnc serious prune enforces the level bound") {
  Bundle b;
  b.add(elem({0.0}, 0.0, {1.0}));
  b.add(elem({1.0}, 2.0, {1.0}));
  b.add(elem({2.0}, 0.9, {1.0}));
  prune_lpbnc_serious(b, 1.0);
  CHECK(b.size() == 2);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].value <= 1.0);
}

TEST_CASE("bundle cap raises NumericalFailure") {
  Bundle b;
  for (std::size_t i = 0; i < Bundle::kMaxElements; ++i)
    b.add(elem({double(i)}, 0.0, {0.0}));
  CHECK_THROWS_AS(b.add(elem({-1.0}, 0.0, {0.0})), NumericalFailure);
}

TEST_CASE("bundle dump emits one record per element") {
  Bundle b;
  b.add(elem({0.5, -1.0}, 2.0, {1.0, 0.0}));
  b.add(elem({1.5, 2.0}, 3.0, {0.0, 1.0}));
  std::ostringstream os;
  dump_bundle(b, os);
  const std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.find("f=2") != std::string::npos);
}
