#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lpproj/lyapunov.hpp"

using namespace lpproj;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec random_vec(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("v1") {
  const Vec x = vec2(0.3, 0.9);
  CHECK(v1(x, x, LpSpace(3, 2)) == 0.0);
  CHECK(v1(vec2(1, 0), vec2(0, 1), LpSpace(2, 2)) == doctest::Approx(2.0));
  CHECK(v1(vec2(1, 1), vec2(0, 0), LpSpace(4, 2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("v2 pinned values") {
  const Vec one = vec2(1, 1);
  CHECK(v2(one, one, LpSpace(3.7, 2)).value == doctest::Approx(0.0));
  // Hilbert coincidence with V1
  CHECK(v2(vec2(1, 0), vec2(0, 1), LpSpace(2, 2)).value == doctest::Approx(2.0));
  // p=3: Jx = 2^{-1/3}(1,1), value = 2^{2/3} - 2*2^{-1/3} + 1 = 1 exactly
  CHECK(v2(one, vec2(1, 0), LpSpace(3, 2)).value ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("v2 gradient") {
  const LpSpace s2(2, 2);
  CHECK(v2_grad_xi(vec2(1, 1), vec2(1, 1), s2).cwiseAbs().maxCoeff() < 1e-14);
  const Vec g = v2_grad_xi(vec2(1, 0), vec2(0, 1), s2);
  CHECK(g[0] == doctest::Approx(-2.0));
  CHECK(g[1] == doctest::Approx(2.0));
  const Vec g3 = v2_grad_xi(vec2(1, 1), vec2(2, 0), LpSpace(3, 2));
  CHECK(g3[0] == doctest::Approx(2.0 * (2.0 - std::pow(2.0, -1.0 / 3.0))));
  CHECK(g3[1] == doctest::Approx(-2.0 * std::pow(2.0, -1.0 / 3.0)));
}

TEST_CASE("v2 gradient vs finite differences") {
  std::mt19937_64 rng(17);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const LpSpace s(p, 3);
    for (int k = 0; k < 40; ++k) {
      const Vec x = random_vec(rng, 3);
      Vec xi = random_vec(rng, 3);
      for (int i = 0; i < 3; ++i)
        if (std::abs(xi[i]) < 0.05) xi[i] = 0.4;  // avoid the p<2 kink
      const Vec g = v2_grad_xi(x, xi, s);
      const double h = 1e-6;
      for (int i = 0; i < 3; ++i) {
        Vec a = xi, b = xi;
        a[i] += h;
        b[i] -= h;
        const double fd = (v2(x, a, s).value - v2(x, b, s).value) / (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("v3") {
  const Vec z = vec2(0.8, -0.6);
  CHECK(v3(z, z, LpSpace(2.5, 2)) == doctest::Approx(0.0));
  // p=2 coincidence: V3 = V2 / 2
  CHECK(v3(vec2(1, 0), vec2(0, 1), LpSpace(2, 2)) == doctest::Approx(1.0));
  // p=3, x=(2,0), xi=0: value = ||x||^p / q = 8 * 2/3
  CHECK(v3(vec2(2, 0), vec2(0, 0), LpSpace(3, 2)) ==
        doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  std::mt19937_64 rng(29);
  for (double p : {1.5, 3.0}) {
    const LpSpace s(p, 4);
    for (int k = 0; k < 500; ++k)
      CHECK(v3(random_vec(rng, 4), random_vec(rng, 4), s) >= -1e-12);
  }
}

TEST_CASE("v4") {
  CHECK(v4(vec2(0, 0), vec2(-1, 0), LpSpace(2, 2)) == doctest::Approx(1.0));
  CHECK(v4(vec2(0, 0), vec2(0, 0), LpSpace(3, 2)) == 0.0);
  // V4(Jx, xi) = V2(Jx, xi)
  const LpSpace s3(3, 2);
  const Vec phi = duality_map(vec2(1, 1), s3);
  CHECK(v4(phi, vec2(1, 0), s3) == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(31);
  for (double p : {1.5, 2.0, 4.0}) {
    const LpSpace s(p, 3);
    for (int k = 0; k < 300; ++k) {
      const Vec x = random_vec(rng, 3), xi = random_vec(rng, 3);
      CHECK(v4(duality_map(x, s), xi, s) ==
            doctest::Approx(v2(x, xi, s).value).epsilon(1e-11));
    }
  }
}

TEST_CASE("v4 gradient in phi equals 2(J*phi - xi)") {
  std::mt19937_64 rng(37);
  const LpSpace s(3, 3);
  for (int k = 0; k < 30; ++k) {
    Vec phi = random_vec(rng, 3);
    for (int i = 0; i < 3; ++i)
      if (std::abs(phi[i]) < 0.05) phi[i] = 0.3;
    const Vec xi = random_vec(rng, 3);
    const Vec g = v4_grad_phi(phi, xi, s);
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
      Vec a = phi, b = phi;
      a[i] += h;
      b[i] -= h;
      const double fd = (v4(a, xi, s) - v4(b, xi, s)) / (2.0 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("bracketing, nonnegativity, convexity, coercivity") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const LpSpace s(p, 5);
    for (int k = 0; k < 500; ++k) {
      const Vec x = random_vec(rng, 5), xi = random_vec(rng, 5);
      const auto lv = v2(x, xi, s);
      CHECK(lv.value >= 0.0);
      CHECK(lv.value >= lv.lower_bound - 1e-10);
      CHECK(lv.value <= lv.upper_bound + 1e-10);
      // convexity in xi
      const Vec xi2 = random_vec(rng, 5);
      const double t = u01(rng);
      CHECK(v2(x, (t * xi + (1 - t) * xi2).eval(), s).value <=
            t * lv.value + (1 - t) * v2(x, xi2, s).value + 1e-10);
    }
    // coercivity via the lower bracket
    const Vec x = random_vec(rng, 5);
    double prev = 0.0;
    for (double scale : {10.0, 100.0, 1000.0}) {
      const auto lv = v2(x, (scale * Vec::Ones(5)).eval(), s);
      CHECK(lv.value > prev);
      prev = lv.value;
    }
    CHECK(prev > 1e4);
  }
}

TEST_CASE("zero only at x == xi") {
  std::mt19937_64 rng(43);
  for (double p : {1.5, 3.0}) {
    const LpSpace s(p, 3);
    for (int k = 0; k < 200; ++k) {
      const Vec x = random_vec(rng, 3);
      const Vec xi = random_vec(rng, 3);
      if (lp_norm(x - xi, s) > 1e-2) CHECK(v2(x, xi, s).value > 1e-12);
    }
  }
}

TEST_CASE("lemma s2 sandwich") {
  const LpSpace s2(2, 2);
  const Vec z = vec2(0.2, -1.0);
  auto [lo0, up0] = lemma_s2_sandwich(z, z, s2);
  CHECK(lo0 == doctest::Approx(0.0));
  CHECK(up0 == doctest::Approx(0.0));
  // pinned: p=2, x=(1,0), xi=(0,1): V2 = 2, C = 2, lower ~ 0.00983
  auto [lo, up] = lemma_s2_sandwich(vec2(1, 0), vec2(0, 1), s2);
  CHECK(lo == doctest::Approx(2.0 - (2.0 / 3.18) * (2.0 / 16.0) / 8.0)
                  .epsilon(1e-9));
  CHECK(up >= 0.0);
  std::mt19937_64 rng(47);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const LpSpace s(p, 4);
    for (int k = 0; k < 500; ++k) {
      auto [l, u] = lemma_s2_sandwich(random_vec(rng, 4), random_vec(rng, 4), s);
      CHECK(l >= -1e-10);
      CHECK(u >= -1e-8);
    }
  }
}

TEST_CASE("V2 vanishes with the separation on bounded sets") {
  const LpSpace s(3, 2);
  const Vec x = vec2(0.7, -0.4);
  double prev = 1e9;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto [lo, up] = lemma_s2_sandwich(x, (x + t * vec2(1, 1)).eval(), s);
    const double upper_bound = up + v2(x, (x + t * vec2(1, 1)).eval(), s).value;
    CHECK(upper_bound < prev);
    prev = upper_bound;
  }
  CHECK(prev < 1e-3);
}
