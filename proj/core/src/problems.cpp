#include "lpbundle/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace lpbundle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Sp = std::span<const double>;

// index of the largest entry, lowest index on ties
std::size_t argmax_first(Sp vals) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  return best;
}

// gap between the best and second-best piece values
double piece_gap(Sp vals) {
  if (vals.size() < 2) return kInf;
  std::size_t best = argmax_first(vals);
  double second = -kInf;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (i != best) second = std::max(second, vals[i]);
  return vals[best] - second;
}

double sgn(double v) { return v >= 0.0 ? 1.0 : -1.0; }  // first-branch at 0

// ---------------------------------------------------------------------------
// max-of-pieces helper: pieces supply values and gradients
// ---------------------------------------------------------------------------

struct MaxOracle {
  std::function<void(Sp, Vec&)> values;                   // fills piece values
  std::function<void(Sp, std::size_t, Vec&)> piece_grad;  // gradient of one piece
  std::size_t npieces = 0;

  double value(Sp x) const {
    Vec v(npieces);
    values(x, v);
    return v[argmax_first(v)];
  }
  OracleResponse eval(Sp x) const {
    Vec v(npieces);
    values(x, v);
    const std::size_t k = argmax_first(v);
    OracleResponse r;
    r.value = v[k];
    r.subgrad.assign(x.size(), 0.0);
    piece_grad(x, k, r.subgrad);
    return r;
  }
  double margin(Sp x) const {
    Vec v(npieces);
    values(x, v);
    return piece_gap(v);
  }
};

Problem from_max_oracle(std::string name, Vec x0, double f_opt, bool convex, MaxOracle oracle) {
  Problem p;
  p.name = std::move(name);
  p.dim = x0.size();
  p.x0 = std::move(x0);
  p.f_opt_ref = f_opt;
  p.convex = convex;
  auto shared = std::make_shared<MaxOracle>(std::move(oracle));
  p.value = [shared](Sp x) { return shared->value(x); };
  p.eval = [shared](Sp x) { return shared->eval(x); };
  p.kink_margin = [shared](Sp x) { return shared->margin(x); };
  return p;
}

// ---------------------------------------------------------------------------
// convex problems 1-20 (table order)
// ---------------------------------------------------------------------------

Problem make_cb2() {
  MaxOracle o;
  o.npieces = 3;
  o.values = [](Sp x, Vec& v) {
    v[0] = x[0] * x[0] + std::pow(x[1], 4);
    v[1] = (2 - x[0]) * (2 - x[0]) + (2 - x[1]) * (2 - x[1]);
    v[2] = 2 * std::exp(x[1] - x[0]);
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    switch (k) {
      case 0: g[0] = 2 * x[0]; g[1] = 4 * std::pow(x[1], 3); break;
      case 1: g[0] = -2 * (2 - x[0]); g[1] = -2 * (2 - x[1]); break;
      default: {
        const double e = 2 * std::exp(x[1] - x[0]);
        g[0] = -e; g[1] = e;
      }
    }
  };
  return from_max_oracle("CB2", {1.0, -0.1}, 1.9522245, true, std::move(o));
}

Problem make_cb3() {
  MaxOracle o;
  o.npieces = 3;
  o.values = [](Sp x, Vec& v) {
    v[0] = std::pow(x[0], 4) + x[1] * x[1];
    v[1] = (2 - x[0]) * (2 - x[0]) + (2 - x[1]) * (2 - x[1]);
    v[2] = 2 * std::exp(x[1] - x[0]);
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    switch (k) {
      case 0: g[0] = 4 * std::pow(x[0], 3); g[1] = 2 * x[1]; break;
      case 1: g[0] = -2 * (2 - x[0]); g[1] = -2 * (2 - x[1]); break;
      default: {
        const double e = 2 * std::exp(x[1] - x[0]);
        g[0] = -e; g[1] = e;
      }
    }
  };
  return from_max_oracle("CB3", {2.0, 2.0}, 2.0, true, std::move(o));
}

Problem make_dem() {
  MaxOracle o;
  o.npieces = 3;
  o.values = [](Sp x, Vec& v) {
    v[0] = 5 * x[0] + x[1];
    v[1] = -5 * x[0] + x[1];
    v[2] = x[0] * x[0] + x[1] * x[1] + 4 * x[1];
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    switch (k) {
      case 0: g[0] = 5; g[1] = 1; break;
      case 1: g[0] = -5; g[1] = 1; break;
      default: g[0] = 2 * x[0]; g[1] = 2 * x[1] + 4;
    }
  };
  return from_max_oracle("DEM", {1.0, 1.0}, -3.0, true, std::move(o));
}

Problem make_ql() {
  MaxOracle o;
  o.npieces = 3;
  o.values = [](Sp x, Vec& v) {
    const double q = x[0] * x[0] + x[1] * x[1];
    v[0] = q;
    v[1] = q + 10 * (-4 * x[0] - x[1] + 4);
    v[2] = q + 10 * (-x[0] - 2 * x[1] + 6);
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    g[0] = 2 * x[0];
    g[1] = 2 * x[1];
    if (k == 1) { g[0] -= 40; g[1] -= 10; }
    if (k == 2) { g[0] -= 10; g[1] -= 20; }
  };
  return from_max_oracle("QL", {-1.0, 5.0}, 7.2, true, std::move(o));
}

Problem make_lq() {
  MaxOracle o;
  o.npieces = 2;
  o.values = [](Sp x, Vec& v) {
    v[0] = -x[0] - x[1];
    v[1] = -x[0] - x[1] + x[0] * x[0] + x[1] * x[1] - 1;
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    g[0] = -1;
    g[1] = -1;
    if (k == 1) { g[0] += 2 * x[0]; g[1] += 2 * x[1]; }
  };
  return from_max_oracle("LQ", {-0.5, -0.5}, -1.4142136, true, std::move(o));
}

Problem make_mifflin1() {
  Problem p;
  p.name = "Mifflin1";
  p.dim = 2;
  p.x0 = {0.8, 0.6};
  p.f_opt_ref = -1.0;
  p.convex = true;
  auto t = [](Sp x) { return x[0] * x[0] + x[1] * x[1] - 1; };
  p.value = [t](Sp x) { return -x[0] + 20 * std::max(t(x), 0.0); };
  p.eval = [t](Sp x) {
    OracleResponse r;
    const double tv = t(x);
    r.value = -x[0] + 20 * std::max(tv, 0.0);
    r.subgrad = {-1.0, 0.0};
    if (tv >= 0.0) {  // first branch at the tie
      r.subgrad[0] += 40 * x[0];
      r.subgrad[1] += 40 * x[1];
    }
    return r;
  };
  p.kink_margin = [t](Sp x) { return std::abs(t(x)); };
  return p;
}

Problem make_wolfe() {
  Problem p;
  p.name = "Wolfe";
  p.dim = 2;
  p.x0 = {3.0, 2.0};
  p.f_opt_ref = -8.0;
  p.convex = true;
  p.value = [](Sp x) {
    const double x1 = x[0], x2 = x[1];
    if (x1 >= std::abs(x2)) return 5 * std::sqrt(9 * x1 * x1 + 16 * x2 * x2);
    if (x1 > 0) return 9 * x1 + 16 * std::abs(x2);
    return 9 * x1 + 16 * std::abs(x2) - std::pow(x1, 9);
  };
  p.eval = [val = p.value](Sp x) {
    OracleResponse r;
    r.value = val(x);
    const double x1 = x[0], x2 = x[1];
    r.subgrad.assign(2, 0.0);
    if (x1 >= std::abs(x2)) {
      const double den = std::sqrt(9 * x1 * x1 + 16 * x2 * x2);
      if (den > 1e-300) {
        r.subgrad[0] = 45 * x1 / den;
        r.subgrad[1] = 80 * x2 / den;
      } else {
        r.subgrad[0] = 15.0;  // gradient limit along the positive x1 axis
      }
    } else {
      r.subgrad[0] = 9.0;
      r.subgrad[1] = 16 * sgn(x2);
      if (x1 <= 0) r.subgrad[0] -= 9 * std::pow(x1, 8);
    }
    return r;
  };
  p.kink_margin = [](Sp x) {
    // away from the region boundaries x1 = |x2| and x1 = 0, and from x2 = 0
    return std::min({std::abs(x[0] - std::abs(x[1])), std::abs(x[0]), std::abs(x[1])});
  };
  return p;
}

Problem make_rosen() {
  MaxOracle o;
  o.npieces = 4;
  auto base = [](Sp x) {
    return x[0] * x[0] + x[1] * x[1] + 2 * x[2] * x[2] + x[3] * x[3] - 5 * x[0] - 5 * x[1] -
           21 * x[2] + 7 * x[3];
  };
  o.values = [base](Sp x, Vec& v) {
    const double f = base(x);
    v[0] = f;
    v[1] = f + 10 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[0] - x[1] + x[2] -
                     x[3] - 8);
    v[2] = f + 10 * (x[0] * x[0] + 2 * x[1] * x[1] + x[2] * x[2] + 2 * x[3] * x[3] - x[0] - x[3] -
                     10);
    v[3] = f + 10 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + 2 * x[0] - x[1] - x[3] - 5);
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    g[0] = 2 * x[0] - 5;
    g[1] = 2 * x[1] - 5;
    g[2] = 4 * x[2] - 21;
    g[3] = 2 * x[3] + 7;
    switch (k) {
      case 1:
        g[0] += 10 * (2 * x[0] + 1); g[1] += 10 * (2 * x[1] - 1);
        g[2] += 10 * (2 * x[2] + 1); g[3] += 10 * (2 * x[3] - 1);
        break;
      case 2:
        g[0] += 10 * (2 * x[0] - 1); g[1] += 10 * (4 * x[1]);
        g[2] += 10 * (2 * x[2]); g[3] += 10 * (4 * x[3] - 1);
        break;
      case 3:
        g[0] += 10 * (2 * x[0] + 2); g[1] += 10 * (2 * x[1] - 1);
        g[2] += 10 * (2 * x[2]); g[3] += 10 * (-1.0);
        break;
      default: break;
    }
  };
  return from_max_oracle("Rosen", {0.0, 0.0, 0.0, 0.0}, -44.0, true, std::move(o));
}

constexpr std::array<std::array<double, 5>, 10> kShorA = {{{0, 0, 0, 0, 0},
                                                           {2, 1, 1, 1, 3},
                                                           {1, 2, 1, 1, 2},
                                                           {1, 4, 1, 2, 2},
                                                           {3, 2, 1, 0, 1},
                                                           {0, 2, 1, 0, 1},
                                                           {1, 1, 0, 2, 1},
                                                           {1, 0, 1, 2, 1},
                                                           {0, 0, 2, 1, 0},
                                                           {1, 1, 2, 0, 0}}};
constexpr std::array<double, 10> kShorB = {1, 5, 10, 2, 4, 3, 1.7, 2.5, 6, 4.5};

Problem make_shor() {
  MaxOracle o;
  o.npieces = 10;
  o.values = [](Sp x, Vec& v) {
    for (std::size_t i = 0; i < 10; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        const double d = x[j] - kShorA[i][j];
        s += d * d;
      }
      v[i] = kShorB[i] * s;
    }
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    for (std::size_t j = 0; j < 5; ++j) g[j] = 2 * kShorB[k] * (x[j] - kShorA[k][j]);
  };
  return from_max_oracle("Shor", {0.0, 0.0, 0.0, 0.0, 1.0}, 22.600162, true, std::move(o));
}

struct MaxquadData {
  std::array<std::array<double, 100>, 5> A{};  // 10x10 row-major per piece
  std::array<std::array<double, 10>, 5> B{};
  MaxquadData() {
    for (int k = 1; k <= 5; ++k) {
      auto& a = A[k - 1];
      for (int i = 1; i <= 10; ++i)
        for (int j = i + 1; j <= 10; ++j) {
          const double v =
              std::exp(double(i) / j) * std::cos(double(i) * j) * std::sin(double(k));
          a[(i - 1) * 10 + (j - 1)] = v;
          a[(j - 1) * 10 + (i - 1)] = v;
        }
      for (int i = 1; i <= 10; ++i)
        B[k - 1][i - 1] = std::exp(double(i) / k) * std::sin(double(i) * k);
      for (int i = 1; i <= 10; ++i) {
        double off = 0.0;
        for (int j = 1; j <= 10; ++j)
          if (j != i) off += std::abs(a[(i - 1) * 10 + (j - 1)]);
        a[(i - 1) * 10 + (i - 1)] = double(i) / 10 * std::abs(std::sin(double(k))) + off;
      }
    }
  }
};

Problem make_maxquad() {
  auto data = std::make_shared<MaxquadData>();
  MaxOracle o;
  o.npieces = 5;
  o.values = [data](Sp x, Vec& v) {
    for (std::size_t k = 0; k < 5; ++k) {
      double q = 0.0, l = 0.0;
      for (std::size_t i = 0; i < 10; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 10; ++j) row += data->A[k][i * 10 + j] * x[j];
        q += x[i] * row;
        l += data->B[k][i] * x[i];
      }
      v[k] = q - l;
    }
  };
  o.piece_grad = [data](Sp x, std::size_t k, Vec& g) {
    for (std::size_t i = 0; i < 10; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < 10; ++j) row += data->A[k][i * 10 + j] * x[j];
      g[i] = 2 * row - data->B[k][i];
    }
  };
  return from_max_oracle("Maxquad", Vec(10, 0.0), -0.8414083, true, std::move(o));
}

Problem make_maxq(std::string name, std::size_t n, double f_opt) {
  Vec x0(n);
  for (std::size_t i = 0; i < n; ++i)
    x0[i] = (i < n / 2) ? double(i + 1) : -double(i + 1);
  MaxOracle o;
  o.npieces = n;
  o.values = [n](Sp x, Vec& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] * x[i];
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) { g[k] = 2 * x[k]; };
  return from_max_oracle(std::move(name), std::move(x0), f_opt, true, std::move(o));
}

Problem make_maxl() {
  const std::size_t n = 20;
  Vec x0(n);
  for (std::size_t i = 0; i < n; ++i)
    x0[i] = (i < n / 2) ? double(i + 1) : -double(i + 1);
  MaxOracle o;
  o.npieces = n;
  o.values = [n](Sp x, Vec& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::abs(x[i]);
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) { g[k] = sgn(x[k]); };
  return from_max_oracle("Maxl", std::move(x0), 0.0, true, std::move(o));
}

Problem make_goffin() {
  const std::size_t n = 50;
  Vec x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = double(i + 1) - 25.5;
  MaxOracle o;
  o.npieces = n;
  o.values = [n](Sp x, Vec& v) {
    double s = 0.0;
    for (double xi : x) s += xi;
    for (std::size_t i = 0; i < n; ++i) v[i] = 50 * x[i] - s;
  };
  o.piece_grad = [n](Sp, std::size_t k, Vec& g) {
    for (std::size_t j = 0; j < n; ++j) g[j] = -1.0;
    g[k] += 50.0;
  };
  return from_max_oracle("Goffin", std::move(x0), 0.0, true, std::move(o));
}

Problem make_mxhilb(std::string name, std::size_t n) {
  MaxOracle o;
  o.npieces = 2 * n;  // signed pieces so ties resolve deterministically
  o.values = [n](Sp x, Vec& v) {
    for (std::size_t i = 0; i < n; ++i) {
      double h = 0.0;
      for (std::size_t j = 0; j < n; ++j) h += x[j] / double(i + j + 1);
      v[2 * i] = h;
      v[2 * i + 1] = -h;
    }
  };
  o.piece_grad = [n](Sp, std::size_t k, Vec& g) {
    const std::size_t i = k / 2;
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) g[j] = s / double(i + j + 1);
  };
  return from_max_oracle(std::move(name), Vec(n, 1.0), 0.0, true, std::move(o));
}

Problem make_l1hilb() {
  const std::size_t n = 50;
  Problem p;
  p.name = "L1HILB";
  p.dim = n;
  p.x0.assign(n, 1.0);
  p.f_opt_ref = 0.0;
  p.convex = true;
  auto terms = [n](Sp x, Vec& h) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += x[j] / double(i + j + 1);
      h[i] = s;
    }
  };
  p.value = [terms, n](Sp x) {
    Vec h(n);
    terms(x, h);
    double f = 0.0;
    for (double v : h) f += std::abs(v);
    return f;
  };
  p.eval = [terms, n](Sp x) {
    Vec h(n);
    terms(x, h);
    OracleResponse r;
    r.subgrad.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      r.value += std::abs(h[i]);
      const double s = sgn(h[i]);
      for (std::size_t j = 0; j < n; ++j) r.subgrad[j] += s / double(i + j + 1);
    }
    return r;
  };
  p.kink_margin = [terms, n](Sp x) {
    Vec h(n);
    terms(x, h);
    double m = kInf;
    for (double v : h) m = std::min(m, std::abs(v));
    return m;
  };
  return p;
}

// Per-link max-type chains: value/subgrad accumulate over links i=0..n-2.
struct ChainOracle {
  std::size_t npieces = 0;
  // fills piece values for link i
  std::function<void(Sp, std::size_t, Vec&)> link_values;
  // adds the gradient of link i's piece k
  std::function<void(Sp, std::size_t, std::size_t, Vec&)> link_grad;

  double value(Sp x) const {
    Vec v(npieces);
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      link_values(x, i, v);
      f += v[argmax_first(v)];
    }
    return f;
  }
  OracleResponse eval(Sp x) const {
    Vec v(npieces);
    OracleResponse r;
    r.subgrad.assign(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      link_values(x, i, v);
      const std::size_t k = argmax_first(v);
      r.value += v[k];
      link_grad(x, i, k, r.subgrad);
    }
    return r;
  }
  double margin(Sp x) const {
    Vec v(npieces);
    double m = kInf;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      link_values(x, i, v);
      m = std::min(m, piece_gap(v));
    }
    return m;
  }
};

Problem from_chain(std::string name, Vec x0, double f_opt, bool convex, ChainOracle oracle) {
  Problem p;
  p.name = std::move(name);
  p.dim = x0.size();
  p.x0 = std::move(x0);
  p.f_opt_ref = f_opt;
  p.convex = convex;
  auto shared = std::make_shared<ChainOracle>(std::move(oracle));
  p.value = [shared](Sp x) { return shared->value(x); };
  p.eval = [shared](Sp x) { return shared->eval(x); };
  p.kink_margin = [shared](Sp x) { return shared->margin(x); };
  return p;
}

Problem make_chained_lq() {
  ChainOracle o;
  o.npieces = 2;
  o.link_values = [](Sp x, std::size_t i, Vec& v) {
    v[0] = -x[i] - x[i + 1];
    v[1] = v[0] + x[i] * x[i] + x[i + 1] * x[i + 1] - 1;
  };
  o.link_grad = [](Sp x, std::size_t i, std::size_t k, Vec& g) {
    g[i] += -1;
    g[i + 1] += -1;
    if (k == 1) {
      g[i] += 2 * x[i];
      g[i + 1] += 2 * x[i + 1];
    }
  };
  const double f_opt = -99.0 * std::sqrt(2.0);
  return from_chain("Chained LQ", Vec(100, -0.5), f_opt, true, std::move(o));
}

Problem make_chained_cb3_1() {
  ChainOracle o;
  o.npieces = 3;
  o.link_values = [](Sp x, std::size_t i, Vec& v) {
    v[0] = std::pow(x[i], 4) + x[i + 1] * x[i + 1];
    v[1] = (2 - x[i]) * (2 - x[i]) + (2 - x[i + 1]) * (2 - x[i + 1]);
    v[2] = 2 * std::exp(x[i + 1] - x[i]);
  };
  o.link_grad = [](Sp x, std::size_t i, std::size_t k, Vec& g) {
    switch (k) {
      case 0: g[i] += 4 * std::pow(x[i], 3); g[i + 1] += 2 * x[i + 1]; break;
      case 1: g[i] += -2 * (2 - x[i]); g[i + 1] += -2 * (2 - x[i + 1]); break;
      default: {
        const double e = 2 * std::exp(x[i + 1] - x[i]);
        g[i] += -e;
        g[i + 1] += e;
      }
    }
  };
  return from_chain("Chained CB3 I", Vec(100, 2.0), 198.0, true, std::move(o));
}

Problem make_chained_cb3_2() {
  MaxOracle o;
  o.npieces = 3;
  o.values = [](Sp x, Vec& v) {
    v[0] = v[1] = v[2] = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      v[0] += std::pow(x[i], 4) + x[i + 1] * x[i + 1];
      v[1] += (2 - x[i]) * (2 - x[i]) + (2 - x[i + 1]) * (2 - x[i + 1]);
      v[2] += 2 * std::exp(x[i + 1] - x[i]);
    }
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      switch (k) {
        case 0: g[i] += 4 * std::pow(x[i], 3); g[i + 1] += 2 * x[i + 1]; break;
        case 1: g[i] += -2 * (2 - x[i]); g[i + 1] += -2 * (2 - x[i + 1]); break;
        default: {
          const double e = 2 * std::exp(x[i + 1] - x[i]);
          g[i] += -e;
          g[i + 1] += e;
        }
      }
    }
  };
  return from_max_oracle("Chained CB3 II", Vec(100, 2.0), 198.0, true, std::move(o));
}

// ---------------------------------------------------------------------------
// nonconvex problems 1-12 (table order)
// ---------------------------------------------------------------------------

Problem make_crescent() {
  MaxOracle o;
  o.npieces = 2;
  o.values = [](Sp x, Vec& v) {
    v[0] = x[0] * x[0] + (x[1] - 1) * (x[1] - 1) + x[1] - 1;
    v[1] = -x[0] * x[0] - (x[1] - 1) * (x[1] - 1) + x[1] + 1;
  };
  o.piece_grad = [](Sp x, std::size_t k, Vec& g) {
    if (k == 0) {
      g[0] = 2 * x[0];
      g[1] = 2 * (x[1] - 1) + 1;
    } else {
      g[0] = -2 * x[0];
      g[1] = -2 * (x[1] - 1) + 1;
    }
  };
  return from_max_oracle("Crescent", {-1.5, 2.0}, 0.0, false, std::move(o));
}

Problem make_mifflin2() {
  Problem p;
  p.name = "Mifflin2";
  p.dim = 2;
  p.x0 = {-1.0, -1.0};
  p.f_opt_ref = -1.0;
  p.convex = false;
  auto t = [](Sp x) { return x[0] * x[0] + x[1] * x[1] - 1; };
  p.value = [t](Sp x) { return -x[0] + 2 * t(x) + 1.75 * std::abs(t(x)); };
  p.eval = [t](Sp x) {
    OracleResponse r;
    const double tv = t(x);
    r.value = -x[0] + 2 * tv + 1.75 * std::abs(tv);
    const double c = 2 + 1.75 * sgn(tv);
    r.subgrad = {-1 + c * 2 * x[0], c * 2 * x[1]};
    return r;
  };
  p.kink_margin = [t](Sp x) { return std::abs(t(x)); };
  return p;
}

constexpr std::array<double, 5> kColvD = {-15, -27, -36, -18, -12};
constexpr std::array<std::array<double, 5>, 5> kColvC = {{{30, -20, -10, 32, -10},
                                                          {-20, 39, -6, -31, 32},
                                                          {-10, -6, 10, -6, -10},
                                                          {32, -31, -6, 39, -20},
                                                          {-10, 32, -10, -20, 30}}};
constexpr std::array<double, 5> kColvE = {4, 8, 10, 6, 2};
constexpr std::array<std::array<double, 5>, 10> kColvA = {{{-16, 2, 0, 1, 0},
                                                           {0, -2, 0, 0.4, 2},
                                                           {-3.5, 0, 2, 0, 0},
                                                           {0, -2, 0, -4, -1},
                                                           {0, -9, -2, 1, -2.8},
                                                           {2, 0, -4, 0, 0},
                                                           {-1, -1, -1, -1, -1},
                                                           {-1, -2, -3, -2, -1},
                                                           {1, 2, 3, 4, 5},
                                                           {1, 1, 1, 1, 1}}};
constexpr std::array<double, 10> kColvB = {-40, -2, -0.25, -4, -4, -1, -40, -60, 5, 1};

Problem make_colville1() {
  Problem p;
  p.name = "Colville 1";
  p.dim = 5;
  p.x0 = {0.0, 0.0, 0.0, 0.0, 1.0};
  p.f_opt_ref = -32.348679;
  p.convex = false;
  auto smooth = [](Sp x, Vec* grad) {
    double f = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      f += kColvD[j] * x[j] + kColvE[j] * std::pow(x[j], 3);
      double row = 0.0;
      for (std::size_t l = 0; l < 5; ++l) row += kColvC[j][l] * x[l];
      f += x[j] * row;
      if (grad) (*grad)[j] = kColvD[j] + 3 * kColvE[j] * x[j] * x[j] + 2 * row;
    }
    return f;
  };
  auto slack = [](Sp x, std::size_t i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < 5; ++j) ax += kColvA[i][j] * x[j];
    return kColvB[i] - ax;  // penalized when positive
  };
  p.value = [smooth, slack](Sp x) {
    double f = smooth(x, nullptr);
    for (std::size_t i = 0; i < 10; ++i) f += 50 * std::max(0.0, slack(x, i));
    return f;
  };
  p.eval = [smooth, slack](Sp x) {
    OracleResponse r;
    r.subgrad.assign(5, 0.0);
    r.value = smooth(x, &r.subgrad);
    for (std::size_t i = 0; i < 10; ++i) {
      const double s = slack(x, i);
      if (s > 0.0) {  // the zero piece wins the tie at s == 0
        r.value += 50 * s;
        for (std::size_t j = 0; j < 5; ++j) r.subgrad[j] -= 50 * kColvA[i][j];
      }
    }
    return r;
  };
  p.kink_margin = [slack](Sp x) {
    double m = kInf;
    for (std::size_t i = 0; i < 10; ++i) m = std::min(m, std::abs(slack(x, i)));
    return m;
  };
  return p;
}

Problem make_hs78() {
  Problem p;
  p.name = "HS78";
  p.dim = 5;
  p.x0 = {-2.0, 1.5, 2.0, -1.0, -1.0};
  p.f_opt_ref = -2.9197004;
  p.convex = false;
  auto parts = [](Sp x, double h[3]) {
    h[0] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[4] * x[4] - 10;
    h[1] = x[1] * x[2] - 5 * x[3] * x[4];
    h[2] = std::pow(x[0], 3) + std::pow(x[1], 3) + 1;
  };
  p.value = [parts](Sp x) {
    double h[3];
    parts(x, h);
    return x[0] * x[1] * x[2] * x[3] * x[4] +
           10 * (std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2]));
  };
  p.eval = [parts](Sp x) {
    OracleResponse r;
    double h[3];
    parts(x, h);
    r.value = x[0] * x[1] * x[2] * x[3] * x[4] +
              10 * (std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2]));
    r.subgrad.assign(5, 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
      double prod = 1.0;
      for (std::size_t l = 0; l < 5; ++l)
        if (l != j) prod *= x[l];
      r.subgrad[j] = prod;
    }
    const double s0 = 10 * sgn(h[0]), s1 = 10 * sgn(h[1]), s2 = 10 * sgn(h[2]);
    for (std::size_t j = 0; j < 5; ++j) r.subgrad[j] += s0 * 2 * x[j];
    r.subgrad[1] += s1 * x[2];
    r.subgrad[2] += s1 * x[1];
    r.subgrad[3] += s1 * -5 * x[4];
    r.subgrad[4] += s1 * -5 * x[3];
    r.subgrad[0] += s2 * 3 * x[0] * x[0];
    r.subgrad[1] += s2 * 3 * x[1] * x[1];
    return r;
  };
  p.kink_margin = [parts](Sp x) {
    double h[3];
    parts(x, h);
    return std::min({std::abs(h[0]), std::abs(h[1]), std::abs(h[2])});
  };
  return p;
}

struct ElAttarData {
  std::array<double, 51> t{}, y{};
  ElAttarData() {
    for (int i = 0; i < 51; ++i) {
      t[i] = 0.1 * i;
      y[i] = 0.5 * std::exp(-t[i]) - std::exp(-2 * t[i]) + 0.5 * std::exp(-3 * t[i]) +
             1.5 * std::exp(-1.5 * t[i]) * std::sin(7 * t[i]) +
             std::exp(-2.5 * t[i]) * std::sin(5 * t[i]);
    }
  }
};

Problem make_elattar() {
  auto data = std::make_shared<ElAttarData>();
  Problem p;
  p.name = "El-Attar";
  p.dim = 6;
  p.x0 = {2.0, 2.0, 7.0, 0.0, -2.0, 1.0};
  p.f_opt_ref = 0.5598131;
  p.convex = false;
  auto resid = [data](Sp x, std::size_t i) {
    const double t = data->t[i];
    return x[0] * std::exp(-x[1] * t) * std::cos(x[2] * t + x[3]) + x[4] * std::exp(-x[5] * t) -
           data->y[i];
  };
  p.value = [resid](Sp x) {
    double f = 0.0;
    for (std::size_t i = 0; i < 51; ++i) f += std::abs(resid(x, i));
    return f;
  };
  p.eval = [data, resid](Sp x) {
    OracleResponse r;
    r.subgrad.assign(6, 0.0);
    for (std::size_t i = 0; i < 51; ++i) {
      const double t = data->t[i];
      const double ri = resid(x, i);
      r.value += std::abs(ri);
      const double s = sgn(ri);
      const double e1 = std::exp(-x[1] * t), e2 = std::exp(-x[5] * t);
      const double c = std::cos(x[2] * t + x[3]), sn = std::sin(x[2] * t + x[3]);
      r.subgrad[0] += s * e1 * c;
      r.subgrad[1] += s * -t * x[0] * e1 * c;
      r.subgrad[2] += s * -t * x[0] * e1 * sn;
      r.subgrad[3] += s * -x[0] * e1 * sn;
      r.subgrad[4] += s * e2;
      r.subgrad[5] += s * -t * x[4] * e2;
    }
    return r;
  };
  p.kink_margin = [resid](Sp x) {
    double m = kInf;
    for (std::size_t i = 0; i < 51; ++i) m = std::min(m, std::abs(resid(x, i)));
    return m;
  };
  return p;
}

// Gill: max of the Watson, chained Rosenbrock, and first penalty functions.
Problem make_gill() {
  MaxOracle o;
  o.npieces = 3;
  constexpr std::size_t n = 10;
  auto watson = [](Sp x, Vec* g) {
    double f = x[0] * x[0] + (x[1] - x[0] * x[0] - 1) * (x[1] - x[0] * x[0] - 1);
    if (g) {
      (*g)[0] = 2 * x[0] - 4 * x[0] * (x[1] - x[0] * x[0] - 1);
      (*g)[1] = 2 * (x[1] - x[0] * x[0] - 1);
    }
    for (int i = 1; i <= 29; ++i) {
      const double t = i / 29.0;
      double s1 = 0.0, s2 = 0.0;
      double tp = 1.0;  // t^(j-1)
      for (std::size_t j = 0; j < n; ++j) {
        if (j >= 1) s1 += double(j) * x[j] * tp / t;
        s2 += x[j] * tp;
        tp *= t;
      }
      const double r = s1 - s2 * s2 - 1;
      f += r * r;
      if (g) {
        tp = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          double dr = -2 * s2 * tp;
          if (j >= 1) dr += double(j) * tp / t;
          (*g)[j] += 2 * r * dr;
          tp *= t;
        }
      }
    }
    return f;
  };
  auto rosen = [](Sp x, Vec* g) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1 - x[i];
      f += 100 * a * a + b * b;
      if (g) {
        (*g)[i] += -400 * x[i] * a - 2 * b;
        (*g)[i + 1] += 200 * a;
      }
    }
    return f;
  };
  auto penalty = [](Sp x, Vec* g) {
    double f = 0.0, q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      f += 1e-5 * (x[j] - 1) * (x[j] - 1);
      q += x[j] * x[j];
    }
    const double r = q - 0.25;
    f += r * r;
    if (g)
      for (std::size_t j = 0; j < n; ++j) (*g)[j] = 2e-5 * (x[j] - 1) + 4 * r * x[j];
    return f;
  };
  o.values = [watson, rosen, penalty](Sp x, Vec& v) {
    v[0] = watson(x, nullptr);
    v[1] = rosen(x, nullptr);
    v[2] = penalty(x, nullptr);
  };
  o.piece_grad = [watson, rosen, penalty](Sp x, std::size_t k, Vec& g) {
    if (k == 0) watson(x, &g);
    else if (k == 1) rosen(x, &g);
    else penalty(x, &g);
  };
  return from_max_oracle("Gill", Vec(10, -0.1), 9.7857721, false, std::move(o));
}

// Steiner 2: shortest weighted network through a chain of Steiner points,
// each wired to a fixed terminal.
struct Steiner2Data {
  // terminals a_j with spur weights p_j, chain weights q_j
  std::array<std::array<double, 2>, 6> a = {{{0, 2}, {2, 3}, {4, -1}, {6, 2}, {8, 0}, {10, 4}}};
  std::array<double, 6> p = {2, 1, 3, 2, 1, 2};
  std::array<double, 7> q = {1, 1, 1, 1, 1, 1, 1};
  std::array<double, 2> start = {0, 0};
  std::array<double, 2> finish = {12, 2};
};

Problem make_steiner2() {
  auto data = std::make_shared<Steiner2Data>();
  Problem p;
  p.name = "Steiner 2";
  p.dim = 12;
  p.x0.assign(12, 0.0);
  for (std::size_t j = 0; j < 6; ++j) {
    p.x0[2 * j] = data->a[j][0];
    p.x0[2 * j + 1] = data->a[j][1];
  }
  p.f_opt_ref = 16.703838;
  p.convex = false;
  auto accum = [data](Sp x, Vec* g) {
    double f = 0.0;
    auto seg = [&](double ax, double ay, double bx, double by, double w, int ja, int jb) {
      const double dx = ax - bx, dy = ay - by;
      const double d = std::sqrt(dx * dx + dy * dy);
      f += w * d;
      if (g && d > 1e-300) {
        if (ja >= 0) {
          (*g)[2 * ja] += w * dx / d;
          (*g)[2 * ja + 1] += w * dy / d;
        }
        if (jb >= 0) {
          (*g)[2 * jb] -= w * dx / d;
          (*g)[2 * jb + 1] -= w * dy / d;
        }
      }
    };
    seg(x[0], x[1], data->start[0], data->start[1], data->q[0], 0, -1);
    for (int j = 0; j < 5; ++j)
      seg(x[2 * (j + 1)], x[2 * (j + 1) + 1], x[2 * j], x[2 * j + 1], data->q[j + 1], j + 1, j);
    seg(x[10], x[11], data->finish[0], data->finish[1], data->q[6], 5, -1);
    for (int j = 0; j < 6; ++j)
      seg(x[2 * j], x[2 * j + 1], data->a[j][0], data->a[j][1], data->p[j], j, -1);
    return f;
  };
  p.value = [accum](Sp x) { return accum(x, nullptr); };
  p.eval = [accum](Sp x) {
    OracleResponse r;
    r.subgrad.assign(12, 0.0);
    r.value = accum(x, &r.subgrad);
    return r;
  };
  p.kink_margin = [data](Sp x) {
    // kinks where a segment collapses to zero length
    double m = kInf;
    auto len = [](double ax, double ay, double bx, double by) {
      return std::hypot(ax - bx, ay - by);
    };
    m = std::min(m, len(x[0], x[1], data->start[0], data->start[1]));
    for (int j = 0; j < 5; ++j)
      m = std::min(m, len(x[2 * (j + 1)], x[2 * (j + 1) + 1], x[2 * j], x[2 * j + 1]));
    m = std::min(m, len(x[10], x[11], data->finish[0], data->finish[1]));
    for (int j = 0; j < 6; ++j)
      m = std::min(m, len(x[2 * j], x[2 * j + 1], data->a[j][0], data->a[j][1]));
    return m;
  };
  return p;
}

Problem make_active_faces() {
  const std::size_t n = 50;
  MaxOracle o;
  o.npieces = n + 1;
  auto g = [](double y) { return std::log(std::abs(y) + 1); };
  o.values = [n, g](Sp x, Vec& v) {
    double s = 0.0;
    for (double xi : x) s += xi;
    v[0] = g(-s);
    for (std::size_t i = 0; i < n; ++i) v[i + 1] = g(x[i]);
  };
  o.piece_grad = [n](Sp x, std::size_t k, Vec& gr) {
    if (k == 0) {
      double s = 0.0;
      for (double xi : x) s += xi;
      const double d = -sgn(-s) / (std::abs(s) + 1);
      for (std::size_t j = 0; j < n; ++j) gr[j] = d;
    } else {
      const std::size_t i = k - 1;
      gr[i] = sgn(x[i]) / (std::abs(x[i]) + 1);
    }
  };
  return from_max_oracle("Active Faces", Vec(n, 1.0), 0.0, false, std::move(o));
}

Problem make_brown2() {
  const std::size_t n = 50;
  Vec x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = (i % 2 == 0) ? -1.0 : 1.0;
  Problem p;
  p.name = "Brown 2";
  p.dim = n;
  p.x0 = std::move(x0);
  p.f_opt_ref = 0.0;
  p.convex = false;
  auto term = [](double base, double expo, double* db, double* de) {
    // |base|^(expo^2+1) with partials wrt base and expo
    const double ab = std::abs(base);
    const double pw = expo * expo + 1;
    if (ab == 0.0) {
      if (db) *db = 0.0;  // 0 is a valid subgradient even at pw == 1
      if (de) *de = 0.0;
      return 0.0;
    }
    const double v = std::pow(ab, pw);
    if (db) *db = pw * std::pow(ab, pw - 1) * (base > 0 ? 1.0 : -1.0);
    if (de) *de = v * std::log(ab) * 2 * expo;
    return v;
  };
  p.value = [n, term](Sp x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      f += term(x[i], x[i + 1], nullptr, nullptr);
      f += term(x[i + 1], x[i], nullptr, nullptr);
    }
    return f;
  };
  p.eval = [n, term](Sp x) {
    OracleResponse r;
    r.subgrad.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double db, de;
      r.value += term(x[i], x[i + 1], &db, &de);
      r.subgrad[i] += db;
      r.subgrad[i + 1] += de;
      r.value += term(x[i + 1], x[i], &db, &de);
      r.subgrad[i + 1] += db;
      r.subgrad[i] += de;
    }
    return r;
  };
  p.kink_margin = [n](Sp x) {
    double m = kInf;
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, std::abs(x[i]));
    return m;
  };
  return p;
}

Problem make_chained_mifflin2() {
  const std::size_t n = 50;
  Problem p;
  p.name = "Chained Mifflin2";
  p.dim = n;
  p.x0.assign(n, -1.0);
  p.f_opt_ref = -34.795;
  p.convex = false;
  p.value = [n](Sp x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double t = x[i] * x[i] + x[i + 1] * x[i + 1] - 1;
      f += -x[i] + 2 * t + 1.75 * std::abs(t);
    }
    return f;
  };
  p.eval = [n](Sp x) {
    OracleResponse r;
    r.subgrad.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double t = x[i] * x[i] + x[i + 1] * x[i + 1] - 1;
      r.value += -x[i] + 2 * t + 1.75 * std::abs(t);
      const double c = 2 + 1.75 * sgn(t);
      r.subgrad[i] += -1 + c * 2 * x[i];
      r.subgrad[i + 1] += c * 2 * x[i + 1];
    }
    return r;
  };
  p.kink_margin = [n](Sp x) {
    double m = kInf;
    for (std::size_t i = 0; i + 1 < n; ++i)
      m = std::min(m, std::abs(x[i] * x[i] + x[i + 1] * x[i + 1] - 1));
    return m;
  };
  return p;
}

Vec crescent_chain_start(std::size_t n) {
  Vec x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = (i % 2 == 0) ? -1.5 : 2.0;
  return x0;
}

Problem make_chained_crescent1() {
  const std::size_t n = 50;
  MaxOracle o;
  o.npieces = 2;
  o.values = [n](Sp x, Vec& v) {
    v[0] = v[1] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double q = x[i] * x[i] + (x[i + 1] - 1) * (x[i + 1] - 1);
      v[0] += q + x[i + 1] - 1;
      v[1] += -q + x[i + 1] + 1;
    }
  };
  o.piece_grad = [n](Sp x, std::size_t k, Vec& g) {
    const double s = (k == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      g[i] += s * 2 * x[i];
      g[i + 1] += s * 2 * (x[i + 1] - 1) + 1;
    }
  };
  return from_max_oracle("Chained Crescent I", crescent_chain_start(n), 0.0, false, std::move(o));
}

Problem make_chained_crescent2() {
  const std::size_t n = 50;
  ChainOracle o;
  o.npieces = 2;
  o.link_values = [](Sp x, std::size_t i, Vec& v) {
    const double q = x[i] * x[i] + (x[i + 1] - 1) * (x[i + 1] - 1);
    v[0] = q + x[i + 1] - 1;
    v[1] = -q + x[i + 1] + 1;
  };
  o.link_grad = [](Sp x, std::size_t i, std::size_t k, Vec& g) {
    const double s = (k == 0) ? 1.0 : -1.0;
    g[i] += s * 2 * x[i];
    g[i + 1] += s * 2 * (x[i + 1] - 1) + 1;
  };
  return from_chain("Chained Crescent II", crescent_chain_start(n), 0.0, false, std::move(o));
}

std::vector<Problem> build_registry() {
  std::vector<Problem> r;
  r.reserve(32);
  r.push_back(make_cb2());
  r.push_back(make_cb3());
  r.push_back(make_dem());
  r.push_back(make_ql());
  r.push_back(make_lq());
  r.push_back(make_mifflin1());
  r.push_back(make_wolfe());
  r.push_back(make_rosen());
  r.push_back(make_shor());
  r.push_back(make_maxquad());
  r.push_back(make_maxq("Maxq", 20, 0.0));
  r.push_back(make_maxl());
  r.push_back(make_goffin());
  r.push_back(make_mxhilb("MXHILB", 50));
  r.push_back(make_l1hilb());
  r.push_back(make_maxq("Generalization of MAXQ", 100, 0.0));
  r.push_back(make_mxhilb("Generalization of MXHILB", 100));
  r.push_back(make_chained_lq());
  r.push_back(make_chained_cb3_1());
  r.push_back(make_chained_cb3_2());
  r.push_back(make_crescent());
  r.push_back(make_mifflin2());
  r.push_back(make_colville1());
  r.push_back(make_hs78());
  r.push_back(make_elattar());
  r.push_back(make_gill());
  r.push_back(make_steiner2());
  r.push_back(make_active_faces());
  r.push_back(make_brown2());
  r.push_back(make_chained_mifflin2());
  r.push_back(make_chained_crescent1());
  r.push_back(make_chained_crescent2());
  return r;
}

}  // namespace

const std::vector<Problem>& registry() {
  static const std::vector<Problem> reg = build_registry();
  return reg;
}

const Problem& lookup(std::string_view name) {
  for (const Problem& p : registry())
    if (p.name == name) return p;
  throw SolverError("unknown problem: " + std::string(name));
}

OracleResponse evaluate(const Problem& p, std::span<const double> x) {
  if (x.size() != p.dim) throw DimensionMismatch("evaluate: point dimension mismatch");
  OracleResponse r = p.eval(x);
  if (!std::isfinite(r.value)) {
    r.in_domain = false;
    r.value = kInf;
  }
  return r;
}

double fd_subgrad_check(const Problem& p, const Vec& x, double h) {
  if (x.size() != p.dim) throw DimensionMismatch("fd_subgrad_check: dimension mismatch");
  const double margin = p.kink_margin ? p.kink_margin(x) : kInf;
  if (!(margin > 10 * h * std::max(1.0, norm_2(x))))
    throw NotSmoothHere("fd_subgrad_check: active piece not locally unique");
  const OracleResponse r = p.eval(x);
  Vec xp(x), xm(x);
  double max_err = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const double fd = (p.value(xp) - p.value(xm)) / (2 * h);
    max_err = std::max(max_err, std::abs(fd - r.subgrad[j]));
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return max_err;
}

std::pair<Vec, double> brute_force_prox(const Problem& p, const Vec& x, double a,
                                        double grid_radius, double grid_step) {
  if (p.dim > 2) throw SizeExceeded("brute_force_prox: grid search limited to dim <= 2");
  if (x.size() != p.dim) throw DimensionMismatch("brute_force_prox: dimension mismatch");
  const long steps = std::lround(grid_radius / grid_step);
  Vec best_w(x);
  double best = kInf;
  Vec w(p.dim);
  if (p.dim == 1) {
    for (long i = -steps; i <= steps; ++i) {
      w[0] = x[0] + double(i) * grid_step;
      const double d0 = w[0] - x[0];
      const double v = p.value(w) + 0.5 * a * d0 * d0;
      if (v < best) {
        best = v;
        best_w = w;
      }
    }
  } else {
    for (long i = -steps; i <= steps; ++i)
      for (long j = -steps; j <= steps; ++j) {
        w[0] = x[0] + double(i) * grid_step;
        w[1] = x[1] + double(j) * grid_step;
        const double d0 = w[0] - x[0], d1 = w[1] - x[1];
        const double v = p.value(w) + 0.5 * a * (d0 * d0 + d1 * d1);
        if (v < best) {
          best = v;
          best_w = w;
        }
      }
  }
  return {best_w, best};
}

}  // namespace lpbundle
