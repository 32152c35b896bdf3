#include <benchmark/benchmark.h>

#include <cmath>

#include "cpa/analysis.hpp"
#include "cpa/dynamics.hpp"
#include "cpa/model.hpp"
#include "cpa/sweep.hpp"

namespace {

cpa::SystemParams defaults() { return cpa::SystemParams{}; }

void BM_BuildCoefficients(benchmark::State& state) {
  const auto p = defaults();
  double dp = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpa::build_coefficients(p, dp));
    dp += 1e-9;
  }
}
BENCHMARK(BM_BuildCoefficients);

void BM_Susceptibility(benchmark::State& state) {
  const auto p = defaults();
  const auto variant = state.range(0) == 0 ? cpa::ModelVariant::ReducedThreeLevel
                                           : cpa::ModelVariant::FullThreeLevel;
  const auto chi = cpa::susceptibility_parts(p, 5.0, variant);
  double intensity = 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi(intensity));
    intensity += 1e-6;
  }
}
BENCHMARK(BM_Susceptibility)->Arg(0)->Arg(1);

void BM_SolveSteadyStates(benchmark::State& state) {
  auto p = defaults();
  p.omega1 = 2.5;
  const auto variant = state.range(0) == 0 ? cpa::ModelVariant::ReducedThreeLevel
                                           : cpa::ModelVariant::FullThreeLevel;
  const cpa::ProbeDrive drive{7.0, std::sqrt(200.0), 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpa::solve_steady_states(p, drive, variant));
  }
}
BENCHMARK(BM_SolveSteadyStates)->Arg(0)->Arg(1);

void BM_InputOutputCurve(benchmark::State& state) {
  auto p = defaults();
  p.omega1 = 2.5;
  const auto grid = cpa::intensity_grid_for_input_range(
      p, 7.0, cpa::ModelVariant::ReducedThreeLevel, 500.0, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cpa::input_output_curve(p, 7.0, grid, cpa::ModelVariant::ReducedThreeLevel));
  }
}
BENCHMARK(BM_InputOutputCurve);

void BM_CpaThresholds(benchmark::State& state) {
  const auto p = defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpa::cpa_frequency_thresholds(p));
  }
}
BENCHMARK(BM_CpaThresholds);

void BM_DensityMapColumn(benchmark::State& state) {
  const auto p = defaults();
  std::vector<double> dps = {6.0};
  std::vector<double> iins;
  for (double v = 0.1; v <= 6.0; v += 0.1) iins.push_back(v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpa::density_map(p, dps, iins,
                                              cpa::BranchPolicy::AdiabaticUp,
                                              cpa::ModelVariant::ReducedThreeLevel));
  }
}
BENCHMARK(BM_DensityMapColumn);

void BM_DynamicsRhs(benchmark::State& state) {
  const auto spec = cpa::LiouvillianSpec::make(defaults(), 3.0);
  const cpa::ProbeDrive drive{3.0, 1.0, 0.0};
  auto s = cpa::AtomCavityState::ground();
  s.alpha = cpa::Complex(5.0, -2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpa::rhs(spec, drive, s));
  }
}
BENCHMARK(BM_DynamicsRhs);

void BM_RelaxToSteadyState(benchmark::State& state) {
  const auto p = cpa::two_level_params(defaults());
  const auto spec = cpa::LiouvillianSpec::make(p, 2.0);
  const cpa::ProbeDrive drive{2.0, std::sqrt(0.5), 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpa::integrate_to_steady_state(
        spec, drive, cpa::AtomCavityState::ground(), 2000.0));
  }
}
BENCHMARK(BM_RelaxToSteadyState);

}  // namespace

BENCHMARK_MAIN();
