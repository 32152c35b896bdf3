#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "cpa/params.hpp"
#include "cpa/polynomial.hpp"

using namespace cpa;

namespace {

// Independent root finder: dense sign-change scan plus bisection. Used as an
// oracle against the companion-matrix path.
std::vector<double> scan_roots(const RealPoly& p, double lo, double hi, int samples) {
  std::vector<double> roots;
  double x_prev = lo;
  double f_prev = p(x_prev);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double fx = p(x);
    if (f_prev * fx < 0.0) {
      double a = x_prev, b = x, fa = f_prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = p(mid);
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

}  // namespace

TEST_CASE("cubic with known roots") {
  // (x - 1)(x - 2)(x - 3) = -6 + 11x - 6x^2 + x^3
  const RealPoly p({-6.0, 11.0, -6.0, 1.0});
  auto roots = real_roots(p);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("complex pair is filtered out") {
  // (x^2 + 1)(x - 5)
  const RealPoly p({-5.0, 1.0, -5.0, 1.0});
  auto roots = real_roots(p);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("negligible leading coefficients are trimmed") {
  const RealPoly p({-2.0, 1.0, 1e-30});
  auto roots = real_roots(p);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("companion roots satisfy the polynomial") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(8);
    for (auto& v : c) v = coeff(rng);
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    const RealPoly p(c);
    double max_c = 0.0;
    for (double v : c) max_c = std::max(max_c, std::abs(v));
    for (const Complex& z : companion_roots(p)) {
      Complex y = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * z + *it;
      const double scale = max_c * std::max(1.0, std::pow(std::abs(z), p.degree()));
      CHECK(std::abs(y) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("companion path agrees with a scan oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> root(-8.0, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double r1 = root(rng), r2 = root(rng), r3 = root(rng);
    RealPoly p = RealPoly({-r1, 1.0}) * RealPoly({-r2, 1.0}) * RealPoly({-r3, 1.0});
    auto expected = scan_roots(p, -10.0, 10.0, 20000);
    auto got = real_roots(p);
    // The scan can miss near-degenerate pairs; every scan root must be found.
    for (double e : expected) {
      const bool found = std::any_of(got.begin(), got.end(), [&](double g) {
        return std::abs(g - e) < 1e-6;
      });
      CHECK(found);
    }
  }
}

TEST_CASE("polynomial arithmetic and derivative") {
  const RealPoly a({1.0, 2.0, 3.0});
  const RealPoly b({0.0, -1.0});
  CHECK((a * b)(2.0) == doctest::Approx(a(2.0) * b(2.0)));
  CHECK((a + b)(0.7) == doctest::Approx(a(0.7) + b(0.7)));
  CHECK((a - b)(-1.3) == doctest::Approx(a(-1.3) - b(-1.3)));
  CHECK(a.times_x()(1.7) == doctest::Approx(1.7 * a(1.7)));

  const RealPoly d = a.derivative();
  const double h = 1e-6;
  CHECK(d(0.9) == doctest::Approx((a(0.9 + h) - a(0.9 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("abs_squared of a complex polynomial") {
  const ComplexPoly p({Complex(1.0, -2.0), Complex(0.5, 3.0)});
  const RealPoly w = p.abs_squared();
  for (double x : {0.0, 0.3, 2.0, -1.5}) {
    CHECK(w(x) == doctest::Approx(std::norm(p(x))).epsilon(1e-13));
  }
}

TEST_CASE("zero polynomial rejected") {
  CHECK_THROWS_AS(companion_roots(RealPoly()), RootFindingFailure);
}
