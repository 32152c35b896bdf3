#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cpa/model.hpp"
#include "cpa/params.hpp"

using namespace cpa;

namespace {

SystemParams defaults() { return SystemParams{}; }

SystemParams two_level() { return two_level_params(defaults()); }

ProbeDrive drive_at(double delta_p, double i_in, double phi = 0.0) {
  return ProbeDrive{delta_p, std::sqrt(i_in), phi};
}

// Independent root oracle: evaluates the self-consistency function
//   G(I) = I |kappa - i dp - chi(I)|^2 - |S|^2
// through complex arithmetic (no polynomial reduction) and scans for sign
// changes.
std::vector<double> oracle_roots(const SystemParams& p, const ProbeDrive& d,
                                 ModelVariant v, double i_hi) {
  const RationalChi chi = susceptibility_parts(p, d.delta_p, v);
  const Complex cavity(p.kappa(), -(d.delta_p - p.delta_ac));
  const double s_sq = std::norm(drive_sum(p, d));
  auto g = [&](double intensity) {
    return intensity * std::norm(cavity - chi(intensity)) - s_sq;
  };
  std::vector<double> roots;
  const int n = 400000;
  double x_prev = 0.0, f_prev = g(0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = i_hi * i / n;
    const double fx = g(x);
    if (f_prev * fx < 0.0) {
      double a = x_prev, b = x, fa = f_prev;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = g(mid);
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

TEST_CASE("coefficients vanish at zero pump and zero detuning") {
  auto p = defaults();
  p.r_pump = 0.0;
  const CoeffSet k = build_coefficients(p, 0.0);
  CHECK(std::abs(k.a) == 0.0);
  CHECK(std::abs(k.b) == 0.0);
}

TEST_CASE("two-photon coefficient at resonance") {
  auto p = defaults();
  p.omega1 = 1.0;
  const CoeffSet k = build_coefficients(p, 0.0);
  CHECK(k.x.real() == doctest::Approx(0.0));
  CHECK(k.x.imag() == doctest::Approx(-2.0));
}

TEST_CASE("saturation coefficient, hand-evaluated") {
  auto p = defaults();  // gamma31 = gamma32 = 0.5
  p.omega1 = 1.0;
  p.r_pump = 0.0;
  const CoeffSet k = build_coefficients(p, 3.7);
  CHECK(k.d == doctest::Approx(2.0));  // 4*W1^2*(gamma31 + 2r)
}

TEST_CASE("interference null at two-photon resonance") {
  auto p = defaults();
  p.omega1 = 1.0;
  p.r_pump = 0.0;
  for (double intensity : {0.0, 1.0, 1e4}) {
    const Complex chi = susceptibility(p, 0.0, intensity, ModelVariant::ReducedThreeLevel);
    CHECK(std::abs(chi) == 0.0);
  }
}

TEST_CASE("bare two-level response at line center") {
  auto p = two_level();
  const Complex chi = susceptibility(p, 0.0, 0.0, ModelVariant::TwoLevelBare);
  // Subtract convention: the undriven two-level term enters with +, so chi
  // evaluates to -2 g^2 N / Gamma here.
  CHECK(chi.real() == doctest::Approx(-200.0).epsilon(1e-12));
  CHECK(chi.imag() == doctest::Approx(0.0));
}

TEST_CASE("pump at the decay rate bleaches the medium") {
  auto p = two_level();
  p.r_pump = p.total_decay();
  for (double dp : {0.0, 1.0, 5.0}) {
    for (double intensity : {0.0, 100.0}) {
      CHECK(std::abs(susceptibility(p, dp, intensity, ModelVariant::TwoLevelPumped)) ==
            doctest::Approx(0.0));
    }
  }
}

TEST_CASE("two-level variants reject three-level parameters") {
  auto p = defaults();
  p.omega1 = 1.0;
  CHECK_THROWS_AS(susceptibility(p, 1.0, 0.0, ModelVariant::TwoLevelBare),
                  VariantMismatch);
  auto q = defaults();
  q.omega1 = 0.0;  // gamma32 still 0.5
  CHECK_THROWS_AS(susceptibility(q, 1.0, 0.0, ModelVariant::TwoLevelPumped),
                  VariantMismatch);
  auto b = two_level();
  b.r_pump = 0.5;
  CHECK_THROWS_AS(susceptibility(b, 1.0, 0.0, ModelVariant::TwoLevelBare),
                  VariantMismatch);
}

TEST_CASE("three-level solution with no coupling field is the empty cavity") {
  auto p = defaults();
  p.omega1 = 0.0;
  for (double dp : {0.0, 3.0, 7.0}) {
    CHECK(std::abs(susceptibility(p, dp, 50.0, ModelVariant::ReducedThreeLevel)) == 0.0);
    CHECK(std::abs(susceptibility(p, dp, 50.0, ModelVariant::FullThreeLevel)) == 0.0);
  }
}

TEST_CASE("degeneration chain: reduced three-level to pumped two-level") {
  auto p = defaults();
  p.gamma31 = 1.0;
  p.gamma32 = 0.0;
  p.omega1 = 1e-6;
  auto q = p;
  q.omega1 = 0.0;
  for (double r : {0.0, 0.3}) {
    p.r_pump = r;
    q.r_pump = r;
    for (double dp : {1.0, 3.0, 7.0}) {
      for (double intensity : {0.0, 10.0, 1e4}) {
        const Complex a = susceptibility(p, dp, intensity, ModelVariant::ReducedThreeLevel);
        const Complex b = susceptibility(q, dp, intensity, ModelVariant::TwoLevelPumped);
        CHECK(std::abs(a - b) <= 1e-4 * std::abs(b));
      }
    }
  }
}

TEST_CASE("pumped two-level at r = 0 equals the bare solution") {
  auto p = two_level();
  for (double dp : {0.0, 2.0, 7.0}) {
    for (double intensity : {0.0, 5.0, 2e4}) {
      const Complex a = susceptibility(p, dp, intensity, ModelVariant::TwoLevelPumped);
      const Complex b = susceptibility(p, dp, intensity, ModelVariant::TwoLevelBare);
      CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-14));
      CHECK(a.imag() == doctest::Approx(b.imag()).epsilon(1e-14));
    }
  }
}

TEST_CASE("mirror symmetry of the susceptibility in the probe detuning") {
  auto p = defaults();
  p.omega1 = 1.3;
  p.r_pump = 0.2;
  for (auto variant : {ModelVariant::ReducedThreeLevel, ModelVariant::FullThreeLevel}) {
    for (double dp : {0.3, 2.0, 6.7}) {
      for (double intensity : {0.0, 12.0, 4e3}) {
        const Complex plus = susceptibility(p, dp, intensity, variant);
        const Complex minus = susceptibility(p, -dp, intensity, variant);
        CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-12));
        CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("steady-state polynomial value matches the direct computation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto variant : {ModelVariant::ReducedThreeLevel, ModelVariant::FullThreeLevel,
                       ModelVariant::TwoLevelPumped}) {
    auto p = defaults();
    if (variant == ModelVariant::TwoLevelPumped) p = two_level();
    p.omega1 = (variant == ModelVariant::TwoLevelPumped) ? 0.0 : 1.5;
    p.r_pump = 0.05;
    const ProbeDrive d = drive_at(5.0, 20.0);
    const RealPoly f = steady_state_polynomial(p, d, variant);
    const RationalChi chi = susceptibility_parts(p, d.delta_p, variant);
    const Complex cavity(p.kappa(), -(d.delta_p - p.delta_ac));
    const double s_sq = std::norm(drive_sum(p, d));
    for (int k = 0; k < 20; ++k) {
      const double intensity = 3e4 * u(rng);
      const double q = chi.den(intensity);
      const double direct =
          intensity * std::norm(cavity * q - chi.num(intensity)) - s_sq * q * q;
      CHECK(f(intensity) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("polynomial degrees per variant") {
  auto p = defaults();
  p.omega1 = 1.0;
  const ProbeDrive d = drive_at(6.0, 10.0);
  CHECK(steady_state_polynomial(p, d, ModelVariant::ReducedThreeLevel).degree() == 3);
  CHECK(steady_state_polynomial(p, d, ModelVariant::FullThreeLevel).degree() == 7);
  CHECK(steady_state_polynomial(two_level(), d, ModelVariant::TwoLevelBare).degree() == 3);
}

TEST_CASE("every returned root is self-consistent") {
  auto check_roots = [](const SystemParams& p, const ProbeDrive& d, ModelVariant v) {
    const SteadyStateSet set = solve_steady_states(p, d, v);
    REQUIRE(!set.roots.empty());
    for (const auto& root : set.roots) {
      const double lhs = std::norm(root.alpha);
      CHECK(std::abs(lhs - root.intensity) <= 1e-10 * std::max(1.0, root.intensity));
    }
    return set;
  };

  auto p = defaults();
  p.omega1 = 1.0;
  check_roots(p, drive_at(7.0, 5.0), ModelVariant::ReducedThreeLevel);
  check_roots(p, drive_at(7.0, 5.0), ModelVariant::FullThreeLevel);
  check_roots(two_level(), drive_at(6.0, 800.0), ModelVariant::TwoLevelBare);
}

TEST_CASE("root counts across the bistable window") {
  // Single-valued far below the fold region.
  auto p = defaults();
  p.omega1 = 1.0;
  CHECK(solve_steady_states(p, drive_at(7.0, 5.0), ModelVariant::ReducedThreeLevel)
            .roots.size() == 1);

  // Three branches inside the window for the stronger coupling field.
  p.omega1 = 2.5;
  CHECK(solve_steady_states(p, drive_at(7.0, 200.0), ModelVariant::ReducedThreeLevel)
            .roots.size() == 3);

  // Two-level degeneration is bistable at this detuning.
  CHECK(solve_steady_states(two_level(), drive_at(6.0, 800.0), ModelVariant::TwoLevelBare)
            .roots.size() == 3);

  // Root count never exceeds the polynomial degree bound.
  for (double i_in : {1.0, 50.0, 400.0}) {
    auto full = solve_steady_states(p, drive_at(6.5, i_in), ModelVariant::FullThreeLevel);
    CHECK(full.roots.size() <= 7);
  }
}

TEST_CASE("solver roots agree with the scan oracle") {
  struct Case {
    SystemParams p;
    ProbeDrive d;
    ModelVariant v;
    double hi;
  };
  auto p = defaults();
  p.omega1 = 2.5;
  std::vector<Case> cases = {
      {two_level(), drive_at(6.0, 800.0), ModelVariant::TwoLevelBare, 3e5},
      {p, drive_at(7.0, 200.0), ModelVariant::ReducedThreeLevel, 1e5},
      {p, drive_at(7.0, 200.0), ModelVariant::FullThreeLevel, 1e5},
  };
  for (const auto& c : cases) {
    const auto expected = oracle_roots(c.p, c.d, c.v, c.hi);
    const auto got = solve_steady_states(c.p, c.d, c.v);
    REQUIRE(got.roots.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
      CHECK(got.roots[i].intensity ==
            doctest::Approx(expected[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("undriven cavity returns only the trivial root") {
  auto p = defaults();
  p.omega1 = 1.0;
  const auto set = solve_steady_states(p, drive_at(3.0, 0.0), ModelVariant::ReducedThreeLevel);
  REQUIRE(set.roots.size() == 1);
  CHECK(set.roots[0].intensity == 0.0);
  CHECK(std::abs(set.roots[0].alpha) == 0.0);
}

TEST_CASE("antisymmetric drive decouples from the cavity") {
  auto p = defaults();
  p.omega1 = 1.0;
  const ProbeDrive d = drive_at(2.0, 9.0, M_PI);
  const auto set = solve_steady_states(p, d, ModelVariant::ReducedThreeLevel);
  REQUIRE(set.roots.size() == 1);
  CHECK(set.roots[0].intensity == 0.0);
  const OutputFields f = output_fields(p, d, set.roots[0].alpha);
  CHECK(std::abs(f.out_l + d.amp_in * std::exp(Complex(0, 1) * d.phi)) < 1e-12);
  CHECK(std::abs(f.out_r + Complex(d.amp_in)) < 1e-12);
  CHECK(f.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty two-sided cavity is unitary") {
  auto p = defaults();
  p.omega1 = 0.0;  // three-level solution degenerates to the empty cavity
  for (double dp : {0.0, 1.0, 4.5, 11.0}) {
    const ProbeDrive d = drive_at(dp, 4.0);
    const auto set = solve_steady_states(p, d, ModelVariant::ReducedThreeLevel);
    REQUIRE(set.roots.size() == 1);
    const OutputFields f = output_fields(p, d, set.roots[0].alpha);
    CHECK(f.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("perfectly absorbed state has dark outputs") {
  auto p = defaults();
  const double amp = 2.0;
  const ProbeDrive d{3.0, amp, 0.0};
  const Complex alpha = amp / std::sqrt(p.kappa() * p.tau);
  const OutputFields f = output_fields(p, d, alpha);
  CHECK(std::abs(f.out_l) < 1e-12);
  CHECK(std::abs(f.out_r) < 1e-12);
}

TEST_CASE("resonant empty cavity transmits the inputs unchanged") {
  auto p = defaults();
  p.omega1 = 0.0;
  const ProbeDrive d = drive_at(0.0, 4.0);  // delta_p = delta_ac = 0
  const auto set = solve_steady_states(p, d, ModelVariant::ReducedThreeLevel);
  REQUIRE(set.roots.size() == 1);
  const OutputFields f = output_fields(p, d, set.roots[0].alpha);
  CHECK(f.out_l.real() == doctest::Approx(d.amp_in).epsilon(1e-12));
  CHECK(f.out_r.real() == doctest::Approx(d.amp_in).epsilon(1e-12));
  CHECK(std::abs(f.out_l.imag()) < 1e-12);
}
