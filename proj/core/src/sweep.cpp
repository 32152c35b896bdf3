#include "cpa/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "cpa/analysis.hpp"

namespace cpa {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

CurveKernel::CurveKernel(const SystemParams& params, double delta_p, ModelVariant variant)
    : delta_p_(delta_p),
      kappa_(params.kappa()),
      tau_(params.tau),
      chi_(susceptibility_parts(params, delta_p, variant)) {
  const Complex cavity(kappa_, -(delta_p - params.delta_ac));
  t_ = ComplexPoly(chi_.den) * cavity - chi_.num;
  w_ = t_.abs_squared();
  q_sq_ = chi_.den * chi_.den;
  const RealPoly wp = w_.derivative();
  const RealPoly qp = chi_.den.derivative();
  slope_ = (w_ + wp.times_x()) * chi_.den - (w_.times_x() * qp) * 2.0;
}

double CurveKernel::input_intensity(double intensity) const {
  const double q = chi_.den(intensity);
  return intensity * w_(intensity) / (q * q) * tau_ / (4.0 * kappa_);
}

Complex CurveKernel::denominator(double intensity) const {
  return t_(intensity) / chi_.den(intensity);
}

double CurveKernel::output_intensity(double intensity) const {
  const Complex den = denominator(intensity);
  const double ratio = std::norm(2.0 * kappa_ - den) / std::norm(den);
  return input_intensity(intensity) * ratio;
}

double CurveKernel::slope_sign(double intensity) const { return slope_(intensity); }

std::vector<double> CurveKernel::fold_intensities() const {
  std::vector<double> folds;
  for (double x : real_roots(slope_, tol::root_imag)) {
    if (x <= 0.0) continue;
    const double h = std::max(1e-7 * x, 1e-12);
    if (slope_(x - h) * slope_(x + h) < 0.0) folds.push_back(x);
  }
  // Collapse numerically split double roots.
  std::vector<double> out;
  for (double x : folds) {
    if (!out.empty() && x - out.back() < 1e-8 * std::max(1.0, x)) {
      out.pop_back();
      continue;
    }
    out.push_back(x);
  }
  return out;
}

double CurveKernel::intensity_upper_bound(double target_input) const {
  if (target_input <= 0.0) return 0.0;
  const double s_sq = 4.0 * kappa_ * target_input / tau_;
  const RealPoly f = w_.times_x() - q_sq_ * s_sq;
  double hi = 0.0;
  for (double x : real_roots(f, tol::root_imag)) hi = std::max(hi, x);
  return hi;
}

BranchCurve input_output_curve(const SystemParams& params, double delta_p,
                               const std::vector<double>& intensity_grid,
                               ModelVariant variant) {
  if (intensity_grid.empty()) throw GridError("empty intensity grid");
  for (size_t i = 0; i < intensity_grid.size(); ++i) {
    if (intensity_grid[i] < 0.0) throw GridError("intensity grid must be >= 0");
    if (i > 0 && intensity_grid[i] <= intensity_grid[i - 1]) {
      throw GridError("intensity grid must be strictly increasing");
    }
  }

  const CurveKernel kernel(params, delta_p, variant);
  BranchCurve curve;
  curve.delta_p = delta_p;
  curve.points.reserve(intensity_grid.size());
  for (double intensity : intensity_grid) {
    BranchPoint pt;
    pt.intensity = intensity;
    pt.i_in = kernel.input_intensity(intensity);
    pt.i_out = kernel.output_intensity(intensity);
    pt.stable = kernel.stable(intensity);
    curve.points.push_back(pt);
  }

  // Folds: slope sign changes between grid points, refined by bisection.
  for (size_t i = 1; i < intensity_grid.size(); ++i) {
    double a = intensity_grid[i - 1];
    double b = intensity_grid[i];
    double sa = kernel.slope_sign(a);
    double sb = kernel.slope_sign(b);
    if (sa == 0.0) sa = -sb;
    if (sa * sb >= 0.0) continue;
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
      const double mid = 0.5 * (a + b);
      const double sm = kernel.slope_sign(mid);
      if (sm == 0.0) { a = b = mid; break; }
      if (sa * sm < 0.0) {
        b = mid;
      } else {
        a = mid;
        sa = sm;
      }
    }
    const double x = 0.5 * (a + b);
    curve.folds.push_back({kernel.input_intensity(x), x});
  }
  return curve;
}

std::vector<double> intensity_grid_for_input_range(const SystemParams& params,
                                                   double delta_p, ModelVariant variant,
                                                   double iin_max, int n) {
  if (n < 2) throw GridError("grid needs at least 2 points");
  if (iin_max <= 0.0) throw GridError("iin_max must be > 0");
  const CurveKernel kernel(params, delta_p, variant);
  double hi = kernel.intensity_upper_bound(iin_max);
  if (hi <= 0.0) hi = iin_max;  // undriven response never reaches the target
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = hi * static_cast<double>(i) / (n - 1);
  return grid;
}

HysteresisTrace hysteresis_trace(const SystemParams& params, double delta_p,
                                 double i_min, double i_max, int steps,
                                 ModelVariant variant) {
  if (!(i_max > i_min) || i_min < 0.0 || steps < 2) {
    throw GridError("hysteresis sweep needs 0 <= i_min < i_max and steps >= 2");
  }

  auto roots_at = [&](double i_in) {
    ProbeDrive drive;
    drive.delta_p = delta_p;
    drive.amp_in = std::sqrt(i_in);
    drive.phi = 0.0;
    return solve_steady_states(params, drive, variant);
  };

  auto sweep = [&](bool upward, std::vector<std::pair<double, double>>& out,
                   std::optional<double>& jump, bool& saw_multiroot) {
    double prev = upward ? 0.0 : std::numeric_limits<double>::infinity();
    for (int k = 0; k < steps; ++k) {
      const int idx = upward ? k : steps - 1 - k;
      const double i_in = i_min + (i_max - i_min) * idx / (steps - 1);
      const SteadyStateSet set = roots_at(i_in);
      if (set.roots.empty()) continue;
      if (set.roots.size() > 1) saw_multiroot = true;

      const SteadyRoot* chosen = &set.roots.front();
      if (std::isfinite(prev)) {
        double best = std::abs(set.roots.front().intensity - prev);
        for (const auto& r : set.roots) {
          const double d = std::abs(r.intensity - prev);
          if (d < best) {
            best = d;
            chosen = &r;
          }
        }
      } else {
        chosen = &set.roots.back();  // descend from the upper branch
      }

      const double intensity = chosen->intensity;
      if (k > 0 && std::isfinite(prev) && !jump.has_value()) {
        const double scale = std::max({prev, intensity, 1e-12});
        if (std::abs(intensity - prev) > 0.25 * scale) jump = i_in;
      }
      prev = intensity;

      const OutputFields fields = output_fields(
          params, ProbeDrive{delta_p, std::sqrt(i_in), 0.0}, chosen->alpha);
      out.emplace_back(i_in, 0.5 * (fields.i_out_l + fields.i_out_r));
    }
    if (!upward) std::reverse(out.begin(), out.end());
  };

  HysteresisTrace trace;
  bool multiroot = false;
  sweep(true, trace.up, trace.jump_up, multiroot);
  sweep(false, trace.down, trace.jump_down, multiroot);
  trace.bistable = multiroot;
  if (!trace.bistable) {
    trace.jump_up.reset();
    trace.jump_down.reset();
    trace.down = trace.up;
  }
  return trace;
}

std::string to_string(BranchPolicy p) {
  switch (p) {
    case BranchPolicy::AdiabaticUp: return "adiabatic-up";
    case BranchPolicy::AdiabaticDown: return "adiabatic-down";
    case BranchPolicy::MinOutput: return "min-output";
    case BranchPolicy::MaxOutput: return "max-output";
  }
  return "unknown";
}

BranchPolicy policy_from_string(const std::string& name) {
  if (name == "adiabatic-up") return BranchPolicy::AdiabaticUp;
  if (name == "adiabatic-down") return BranchPolicy::AdiabaticDown;
  if (name == "min-output") return BranchPolicy::MinOutput;
  if (name == "max-output") return BranchPolicy::MaxOutput;
  throw std::invalid_argument("unknown branch policy: " + name);
}

DensityMap density_map(const SystemParams& params, const std::vector<double>& dp_grid,
                       const std::vector<double>& iin_grid, BranchPolicy policy,
                       ModelVariant variant) {
  if (dp_grid.empty() || iin_grid.empty()) throw GridError("empty density-map grid");
  for (double v : iin_grid) {
    if (v < 0.0) throw GridError("input-intensity grid must be >= 0");
  }

  DensityMap map;
  map.delta_p_axis = dp_grid;
  map.input_axis = iin_grid;
  map.policy = policy;
  map.values.assign(dp_grid.size() * iin_grid.size(), kNaN);

  auto fill_column = [&](size_t col) {
    const double dp = dp_grid[col];
    const bool descending = (policy == BranchPolicy::AdiabaticDown);
    double prev = descending ? std::numeric_limits<double>::infinity() : 0.0;

    for (size_t k = 0; k < iin_grid.size(); ++k) {
      const size_t row = descending ? iin_grid.size() - 1 - k : k;
      const double i_in = iin_grid[row];
      double value = kNaN;
      try {
        ProbeDrive drive{dp, std::sqrt(i_in), 0.0};
        const SteadyStateSet set = solve_steady_states(params, drive, variant);
        if (!set.roots.empty()) {
          const SteadyRoot* chosen = &set.roots.front();
          if (policy == BranchPolicy::AdiabaticUp || policy == BranchPolicy::AdiabaticDown) {
            if (std::isfinite(prev)) {
              double best = std::abs(chosen->intensity - prev);
              for (const auto& r : set.roots) {
                const double d = std::abs(r.intensity - prev);
                if (d < best) {
                  best = d;
                  chosen = &r;
                }
              }
            } else {
              chosen = &set.roots.back();
            }
            prev = chosen->intensity;
          } else {
            auto i_out = [](const SteadyRoot& r) {
              return 0.5 * (std::norm(r.out_l) + std::norm(r.out_r));
            };
            for (const auto& r : set.roots) {
              const bool better = (policy == BranchPolicy::MinOutput)
                                      ? i_out(r) < i_out(*chosen)
                                      : i_out(r) > i_out(*chosen);
              if (better) chosen = &r;
            }
          }
          value = 0.5 * (std::norm(chosen->out_l) + std::norm(chosen->out_r));
        }
      } catch (const RootFindingFailure&) {
        // recorded as a missing cell
      }
      map.values[col * iin_grid.size() + row] = value;
    }
  };

  const size_t n_cols = dp_grid.size();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t n_workers = std::min<size_t>(hw, n_cols);
  if (n_workers <= 1) {
    for (size_t c = 0; c < n_cols; ++c) fill_column(c);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&, w]() {
        for (size_t c = w; c < n_cols; c += n_workers) fill_column(c);
      });
    }
    for (auto& t : workers) t.join();
  }
  return map;
}

std::string to_string(LocusAxis a) {
  switch (a) {
    case LocusAxis::DeltaP: return "delta_p_over_Gamma";
    case LocusAxis::PumpRate: return "r_over_Gamma";
    case LocusAxis::Omega1: return "omega1_over_Gamma";
  }
  return "unknown";
}

CpaLocusMap cpa_locus_map(const SystemParams& params, LocusAxis axis1,
                          const std::vector<double>& grid1, LocusAxis axis2,
                          const std::vector<double>& grid2) {
  if (grid1.empty() || grid2.empty()) throw GridError("empty locus grid");
  if (axis1 == axis2) throw GridError("locus axes must differ");

  CpaLocusMap map;
  map.axis1 = axis1;
  map.axis2 = axis2;
  map.grid1 = grid1;
  map.grid2 = grid2;
  map.input_intensity.assign(grid1.size() * grid2.size(), kNaN);

  for (size_t i = 0; i < grid1.size(); ++i) {
    for (size_t j = 0; j < grid2.size(); ++j) {
      SystemParams p = params;
      double dp = 0.0;
      auto apply = [&](LocusAxis axis, double value) {
        switch (axis) {
          case LocusAxis::DeltaP: dp = value; break;
          case LocusAxis::PumpRate: p.r_pump = value; break;
          case LocusAxis::Omega1: p.omega1 = value; break;
        }
      };
      apply(axis1, grid1[i]);
      apply(axis2, grid2[j]);
      try {
        const CpaPoint point = cpa_intracavity_intensity(p, dp);
        if (point.feasible) {
          map.input_intensity[i * grid2.size() + j] = point.intensity_input;
        }
      } catch (const FormulaDomainError&) {
        // no closed form at this cell (omega1 = 0 with branching decay)
      }
    }
  }
  return map;
}

}  // namespace cpa
