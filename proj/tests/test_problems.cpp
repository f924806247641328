#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lpbundle/problems.hpp"

using namespace lpbundle;

TEST_CASE("registry holds all 32 problems with the table data") {
  const auto& reg = registry();
  CHECK(reg.size() == 32);
  int convex = 0;
  for (const auto& p : reg) {
    CHECK(p.dim == p.x0.size());
    CHECK(std::isfinite(p.value(p.x0)));
    convex += p.convex ? 1 : 0;
  }
  CHECK(convex == 20);

  CHECK(lookup("Maxq").dim == 20);
  CHECK(lookup("Brown 2").f_opt_ref == doctest::Approx(0.0));
  CHECK(lookup("QL").f_opt_ref == doctest::Approx(7.2));
  CHECK(lookup("CB2").f_opt_ref == doctest::Approx(1.9522245));
  CHECK(lookup("Shor").f_opt_ref == doctest::Approx(22.600162));
  CHECK(lookup("Maxquad").f_opt_ref == doctest::Approx(-0.8414083));
  CHECK(lookup("Colville 1").f_opt_ref == doctest::Approx(-32.348679));
  CHECK(lookup("El-Attar").f_opt_ref == doctest::Approx(0.5598131));
  CHECK(lookup("Gill").f_opt_ref == doctest::Approx(9.7857721));
  CHECK(lookup("Steiner 2").f_opt_ref == doctest::Approx(16.703838));
  CHECK(lookup("Chained Mifflin2").f_opt_ref == doctest::Approx(-34.795));
  CHECK(lookup("Goffin").dim == 50);
  CHECK(lookup("Generalization of MAXQ").dim == 100);
  CHECK_THROWS_AS((void)lookup("nope"), SolverError);
}

TEST_CASE("oracle spot values") {
  const auto& maxq = lookup("Maxq");
  const auto r = evaluate(maxq, Vec(20, 1.0));
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.subgrad[0] == doctest::Approx(2.0));  // first-max tie break
  for (std::size_t j = 1; j < 20; ++j) CHECK(r.subgrad[j] == 0.0);

  CHECK(lookup("Goffin").value(Vec(50, 0.0)) == doctest::Approx(0.0));

  const auto& clq = lookup("Chained LQ");
  const double r2 = 1.0 / std::sqrt(2.0);
  CHECK(clq.value(Vec(100, r2)) == doctest::Approx(-99.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(clq.value(Vec(100, r2)) == doctest::Approx(clq.f_opt_ref).epsilon(1e-7));

  CHECK_THROWS_AS((void)evaluate(maxq, Vec(3, 0.0)), DimensionMismatch);
}

TEST_CASE("values at analytically known minimizers match the reference optima") {
  auto at = [](const char* name, Vec x) {
    const auto& p = lookup(name);
    return p.value(x) - p.f_opt_ref;
  };
  CHECK(std::abs(at("CB3", {1, 1})) <= 1e-6);
  CHECK(std::abs(at("DEM", {0, -3})) <= 1e-6);
  CHECK(std::abs(at("QL", {1.2, 2.4})) <= 1e-6);
  const double r2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(at("LQ", {r2, r2})) <= 1e-6);
  CHECK(std::abs(at("Mifflin1", {1, 0})) <= 1e-6);
  CHECK(std::abs(at("Wolfe", {-1, 0})) <= 1e-6);
  CHECK(std::abs(at("Rosen", {0, 1, 2, -1})) <= 1e-6);
  CHECK(std::abs(at("Maxq", Vec(20, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Maxl", Vec(20, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Goffin", Vec(50, 0.0))) <= 1e-6);
  CHECK(std::abs(at("MXHILB", Vec(50, 0.0))) <= 1e-6);
  CHECK(std::abs(at("L1HILB", Vec(50, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Generalization of MAXQ", Vec(100, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Generalization of MXHILB", Vec(100, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Chained LQ", Vec(100, r2))) <= 1e-6);
  CHECK(std::abs(at("Chained CB3 I", Vec(100, 1.0))) <= 1e-6);
  CHECK(std::abs(at("Chained CB3 II", Vec(100, 1.0))) <= 1e-6);
  CHECK(std::abs(at("Crescent", {0, 0})) <= 1e-6);
  CHECK(std::abs(at("Mifflin2", {1, 0})) <= 1e-6);
  CHECK(std::abs(at("Active Faces", Vec(50, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Brown 2", Vec(50, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Chained Crescent I", Vec(50, 0.0))) <= 1e-6);
  CHECK(std::abs(at("Chained Crescent II", Vec(50, 0.0))) <= 1e-6);
  // known interior solutions of the penalized problems
  CHECK(std::abs(at("Colville 1", {0.3, 0.33346751, 0.4, 0.42830986, 0.22396511})) <= 1e-4);
  CHECK(std::abs(at("HS78", {-1.717144, 1.59571, 1.827246, -0.763643, -0.763643})) <= 1e-4);
}

namespace {

// sample points near the start until the margin test accepts
int fd_sweep(const Problem& p, double h, double tol, int wanted) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.05, 0.8);
  int accepted = 0, tries = 0;
  while (accepted < wanted && tries < 4000) {
    ++tries;
    Vec x = p.x0;
    const double s = scale(rng);
    for (auto& v : x) v += s * g(rng);
    try {
      const double err = fd_subgrad_check(p, x, h);
      CHECK(err <= tol);
      ++accepted;
    } catch (const NotSmoothHere&) {
    }
  }
  return accepted;
}

}  // namespace

TEST_CASE("finite differences validate every oracle at smooth points") {
  for (const auto& p : registry()) {
    INFO(p.name);
    const int accepted = fd_sweep(p, 1e-6, 1e-5, 50);
    CHECK(accepted == 50);
  }
}

TEST_CASE("convex oracles satisfy the subgradient inequality") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& p : registry()) {
    if (!p.convex) continue;
    INFO(p.name);
    for (int it = 0; it < 500; ++it) {
      Vec x = p.x0, y = p.x0;
      for (auto& v : x) v += 0.7 * g(rng);
      for (auto& v : y) v += 0.7 * g(rng);
      const OracleResponse rx = p.eval(x);
      const double fy = p.value(y);
      double lin = rx.value;
      for (std::size_t j = 0; j < x.size(); ++j) lin += rx.subgrad[j] * (y[j] - x[j]);
      CHECK(fy >= lin - 1e-9 * std::max(1.0, std::abs(fy)));
    }
  }
}

TEST_CASE("brute force prox on one-dimensional oracles") {
  Problem sq;
  sq.name = "square";
  sq.dim = 1;
  sq.x0 = {0.0};
  sq.value = [](std::span<const double> x) { return x[0] * x[0]; };
  sq.eval = [](std::span<const double> x) {
    return OracleResponse{x[0] * x[0], {2 * x[0]}, true};
  };
  {
    const auto [p, e] = brute_force_prox(sq, {0.0}, 1.0, 1.0, 1e-3);
    CHECK(std::abs(p[0]) <= 2e-3);
    CHECK(e == doctest::Approx(0.0).epsilon(1e-5));
  }
  Problem negsq = sq;
  negsq.value = [](std::span<const double> x) { return -x[0] * x[0]; };
  {
    // a = 4 dominates the curvature, prox fixed point at the center
    const auto [p, e] = brute_force_prox(negsq, {0.0}, 4.0, 1.0, 1e-3);
    CHECK(std::abs(p[0]) <= 2e-3);
  }
  Problem absf = sq;
  absf.value = [](std::span<const double> x) { return std::abs(x[0]); };
  {
    // soft threshold: prox of |x| at 3 with a = 1 is 2, envelope 2.5
    const auto [p, e] = brute_force_prox(absf, {3.0}, 1.0, 2.0, 1e-3);
    CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(e == doctest::Approx(2.5).epsilon(1e-3));
  }
  CHECK_THROWS_AS((void)brute_force_prox(lookup("Rosen"), Vec(4, 0.0), 1.0, 0.1, 1e-2),
                  SizeExceeded);
}
