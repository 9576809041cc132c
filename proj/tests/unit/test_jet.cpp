#include "doctest.h"

#include <functional>

#include "foliate/jet.hpp"
#include "helpers.hpp"

using namespace foliate;

namespace {

// Random smooth periodic function of m variables built from the jet
// operations under test: products, quotients and compositions.
struct TestFunction {
  std::vector<double> k1, k2;
  double c1, c2, c3;

  template <class S>
  S eval(const std::vector<S>& x) const {
    S p1(0.0), p2(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      p1 = p1 + k1[i] * x[i];
      p2 = p2 + k2[i] * x[i];
    }
    const S num = c1 * sin(p1) * cos(p2) + c2 * exp(sin(p2));
    const S den = 3.0 + cos(p1 + p2) * c3;
    return num / den + sqrt(2.5 + sin(p1));
  }
};

double eval_double(const TestFunction& f, const Vec& x) {
  std::vector<Jet2> xs;
  for (int i = 0; i < x.size(); ++i) xs.push_back(Jet2(x[i]));
  return f.eval(xs).v;
}

}  // namespace

TEST_CASE("jet derivatives agree with central differences on random periodic functions") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kd(-2, 2);
  std::uniform_real_distribution<double> cd(-1.0, 1.0);
  const int m = 4;
  double worst_g = 0.0, worst_h = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    TestFunction f;
    for (int i = 0; i < m; ++i) {
      f.k1.push_back(kd(rng));
      f.k2.push_back(kd(rng));
    }
    f.c1 = cd(rng);
    f.c2 = cd(rng);
    f.c3 = cd(rng);
    const Vec x = testing::random_point(rng, m);
    std::vector<Jet2> xs;
    for (int i = 0; i < m; ++i) xs.push_back(Jet2::variable(x[i], i));
    const Jet2 j = f.eval(xs);
    const double scale = 1.0 + std::abs(j.v);
    const double h1 = 1e-5, h2 = 1e-4;
    for (int i = 0; i < m; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h1;
      xm[i] -= h1;
      const double fd = (eval_double(f, xp) - eval_double(f, xm)) / (2 * h1);
      worst_g = std::max(worst_g, std::abs(fd - j.g[i]) / (scale + std::abs(j.g[i])));
      for (int k = 0; k < m; ++k) {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp[i] += h2; pp[k] += h2;
        pm[i] += h2; pm[k] -= h2;
        mp[i] -= h2; mp[k] += h2;
        mm[i] -= h2; mm[k] -= h2;
        const double fdh =
            (eval_double(f, pp) - eval_double(f, pm) - eval_double(f, mp) + eval_double(f, mm)) / (4 * h2 * h2);
        worst_h = std::max(worst_h, std::abs(fdh - j.h(i, k)) / (scale + std::abs(j.h(i, k))));
      }
    }
  }
  CHECK(worst_g <= 1e-6);
  CHECK(worst_h <= 1e-6);
}

TEST_CASE("jet Hessians are symmetric and first-order jets match the truncation") {
  std::mt19937_64 rng(3);
  const Vec x = testing::random_point(rng, 3);
  const Jet2 u = Jet2::variable(x[0], 0), v = Jet2::variable(x[1], 1), w = Jet2::variable(x[2], 2);
  const Jet2 f = sin(u * v) / (2.0 + cos(w)) + exp(u - w) * sqrt(3.0 + v);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(f.h(i, j) == doctest::Approx(f.h(j, i)).epsilon(1e-14));

  const Jet1 u1 = Jet1::variable(x[0], 0), v1 = Jet1::variable(x[1], 1), w1 = Jet1::variable(x[2], 2);
  const Jet1 f1 = sin(u1 * v1) / (2.0 + cos(w1)) + exp(u1 - w1) * sqrt(3.0 + v1);
  CHECK(f1.v == doctest::Approx(f.v).epsilon(1e-15));
  for (int i = 0; i < 3; ++i) CHECK(f1.g[static_cast<std::size_t>(i)] == doctest::Approx(f.g[static_cast<std::size_t>(i)]).epsilon(1e-14));
}

TEST_CASE("Leibniz and chain rules hold exactly on simple inputs") {
  const Jet2 x = Jet2::variable(0.3, 0);
  const Jet2 sq = x * x;
  CHECK(sq.g[0] == doctest::Approx(0.6));
  CHECK(sq.h(0, 0) == doctest::Approx(2.0));
  const Jet2 s = sin(2.0 * x);
  CHECK(s.g[0] == doctest::Approx(2 * std::cos(0.6)));
  CHECK(s.h(0, 0) == doctest::Approx(-4 * std::sin(0.6)));
  const Jet2 r = 1.0 / x;
  CHECK(r.g[0] == doctest::Approx(-1 / 0.09));
  CHECK(r.h(0, 0) == doctest::Approx(2 / 0.027));
  const Jet1 d = (x * x * x).derivative(0);
  CHECK(d.v == doctest::Approx(3 * 0.09));
  CHECK(d.g[0] == doctest::Approx(6 * 0.3));
}

TEST_CASE("isfinite sees non-finite gradients") {
  Jet2 x = Jet2::variable(0.0, 1);
  CHECK(isfinite(x));
  const Jet2 bad = sqrt(x);
  CHECK_FALSE(isfinite(bad));
}
