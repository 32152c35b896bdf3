#include "cpa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpa/sweep.hpp"

namespace cpa {

namespace {

struct X123 {
  double x1;
  double x2;
  double x3;
};

X123 cpa_x_coefficients(const SystemParams& p, double delta_p) {
  const double gamma = p.total_decay();
  const double kappa = p.kappa();
  const double w2 = p.omega1 * p.omega1;
  const double dp2 = delta_p * delta_p;
  X123 x;
  x.x1 = p.gamma32 * (gamma * gamma * dp2 - 4.0 * w2 * w2) +
         8.0 * gamma * w2 * (dp2 + w2);
  x.x2 = 2.0 * p.g2n() * gamma * dp2 -
         kappa * (gamma * gamma * dp2 + 4.0 * (dp2 - w2) * (dp2 - w2));
  x.x3 = gamma * dp2 + p.gamma32 * (w2 - dp2);
  return x;
}

enum class CpaFormula { ThreeLevel, TwoLevel };

CpaFormula select_formula(const SystemParams& p) {
  if (p.omega1 > 0.0) return CpaFormula::ThreeLevel;
  if (p.gamma32 == 0.0) return CpaFormula::TwoLevel;
  throw FormulaDomainError(
      "no closed-form CPA intensity for omega1 == 0 with gamma32 > 0");
}

double two_level_cpa_value(const SystemParams& p, double delta_p) {
  const double gamma = p.total_decay();
  const double kappa = p.kappa();
  const double r = p.r_pump;
  const double line = gamma * gamma + 4.0 * delta_p * delta_p;
  const double num = 2.0 * p.g2n() * gamma * (gamma - r) - kappa * (gamma + 2.0 * r) * line;
  const double den = 4.0 * p.g * p.g * kappa * (2.0 * gamma + r);
  return num / den;
}

double three_level_cpa_value(const SystemParams& p, double delta_p) {
  const double gamma = p.total_decay();
  const double kappa = p.kappa();
  const double g2 = p.g * p.g;
  const double g2n = p.g2n();
  const double w2 = p.omega1 * p.omega1;
  const double dp2 = delta_p * delta_p;
  const double r = p.r_pump;
  const X123 x = cpa_x_coefficients(p, delta_p);

  const double num =
      4.0 * p.gamma31 * w2 * x.x2 -
      r * ((gamma * p.gamma32 + 8.0 * w2) * (2.0 * g2n * gamma * dp2 - x.x2) +
           8.0 * g2n * w2 * x.x3);
  const double den =
      4.0 * g2 *
      (2.0 * r * w2 * (p.gamma32 * (gamma * kappa + g2n) + 2.0 * kappa * (dp2 + w2)) +
       kappa * x.x1);
  return num / den;
}

double two_level_taylor_value(const SystemParams& p, double delta_p) {
  const double gamma = p.total_decay();
  const double kappa = p.kappa();
  const double g2 = p.g * p.g;
  const double g2n = p.g2n();
  const double r = p.r_pump;
  const double line = gamma * gamma + 4.0 * delta_p * delta_p;
  return (2.0 * g2n * gamma - kappa * line) / (8.0 * g2 * kappa) -
         r * (6.0 * g2n * gamma + 3.0 * kappa * line) / (16.0 * g2 * kappa * gamma);
}

double three_level_taylor_value(const SystemParams& p, double delta_p) {
  const double gamma = p.total_decay();
  const double kappa = p.kappa();
  const double g2 = p.g * p.g;
  const double g2n = p.g2n();
  const double w2 = p.omega1 * p.omega1;
  const double w4 = w2 * w2;
  const double dp2 = delta_p * delta_p;
  const double r = p.r_pump;
  const X123 x = cpa_x_coefficients(p, delta_p);

  const double zeroth = p.gamma31 * w2 * x.x2 / (g2 * kappa * x.x1);
  const double brace =
      8.0 * p.gamma31 * w4 * x.x2 *
          (2.0 * kappa * (dp2 + w2) + p.gamma32 * (g2n + gamma * kappa)) +
      kappa * x.x1 *
          (8.0 * g2n * w2 * x.x3 +
           (gamma * p.gamma32 + 8.0 * w2) * (2.0 * g2n * gamma * dp2 - x.x2));
  return zeroth - r / (4.0 * g2 * kappa * kappa * x.x1 * x.x1) * brace;
}

CpaPoint make_point(const SystemParams& p, double delta_p, double value) {
  CpaPoint point;
  point.delta_p = delta_p;
  point.intensity_intracavity = value;
  point.feasible = value >= 0.0;
  point.intensity_input = point.feasible ? p.kappa() * p.tau * value : 0.0;
  return point;
}

/// Raw (possibly negative) CPA intracavity value for scan-based root finding.
double raw_cpa_value(const SystemParams& p, double delta_p) {
  return select_formula(p) == CpaFormula::TwoLevel ? two_level_cpa_value(p, delta_p)
                                                   : three_level_cpa_value(p, delta_p);
}

/// Scan f over [window.lo, window.hi] and refine each sign change by
/// bisection to 1e-9 absolute.
template <typename F>
std::vector<double> scan_sign_changes(F&& f, const ScanWindow& window) {
  if (window.samples < 2 || !(window.hi > window.lo)) {
    throw GridError("scan window needs hi > lo and at least 2 samples");
  }
  std::vector<double> out;
  const double step = (window.hi - window.lo) / (window.samples - 1);
  double x_prev = window.lo;
  double f_prev = f(x_prev);
  for (int i = 1; i < window.samples; ++i) {
    const double x = window.lo + i * step;
    const double fx = f(x);
    if (f_prev == 0.0) {
      out.push_back(x_prev);
    } else if (f_prev * fx < 0.0) {
      double a = x_prev, b = x, fa = f_prev;
      while (b - a > 1e-9) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) { a = b = mid; break; }
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) out.push_back(x_prev);
  return out;
}

/// True when some input intensity in (0, input_scan_max] admits three or
/// more steady states. Folds pair up into multi-root windows spanning
/// [min, max] of the fold input intensities; the scan sees the window as
/// soon as its lower edge is inside.
bool has_bistable_window(const SystemParams& p, double delta_p, ModelVariant variant,
                         double input_scan_max) {
  const CurveKernel kernel(p, delta_p, variant);
  const auto folds = kernel.fold_intensities();
  if (folds.size() < 2) return false;
  double lowest = std::numeric_limits<double>::infinity();
  for (double x : folds) {
    lowest = std::min(lowest, kernel.input_intensity(x));
  }
  return lowest > 0.0 && lowest <= input_scan_max;
}

}  // namespace

CpaPoint cpa_intracavity_intensity(const SystemParams& params, double delta_p) {
  params.validate();
  if (!params.is_symmetric()) params.kappa();  // throws
  return make_point(params, delta_p, raw_cpa_value(params, delta_p));
}

CpaPoint cpa_intensity_taylor(const SystemParams& params, double delta_p) {
  params.validate();
  const double value = select_formula(params) == CpaFormula::TwoLevel
                           ? two_level_taylor_value(params, delta_p)
                           : three_level_taylor_value(params, delta_p);
  return make_point(params, delta_p, value);
}

std::vector<double> cpa_frequency_thresholds(const SystemParams& params,
                                             const ScanWindow& window) {
  params.validate();
  return scan_sign_changes([&](double dp) { return raw_cpa_value(params, dp); }, window);
}

std::vector<double> cpa_frequencies_at_intensity(const SystemParams& params, double i_in,
                                                 const ScanWindow& window) {
  params.validate();
  if (!(i_in > 0.0)) throw std::invalid_argument("i_in must be > 0");
  const double kt = params.kappa() * params.tau;
  return scan_sign_changes(
      [&](double dp) { return kt * raw_cpa_value(params, dp) - i_in; }, window);
}

CpaVerification verify_cpa(const SystemParams& params, double delta_p,
                           ModelVariant variant, double pass_tolerance) {
  CpaVerification v;
  v.point = cpa_intracavity_intensity(params, delta_p);
  if (!v.point.feasible) {
    v.status = CpaVerification::Status::Infeasible;
    return v;
  }

  const double target = v.point.intensity_intracavity;
  v.denominator_mismatch = Complex(params.kappa(), -(delta_p - params.delta_ac)) -
                           susceptibility(params, delta_p, target, variant) -
                           2.0 * params.kappa();

  ProbeDrive drive;
  drive.delta_p = delta_p;
  drive.amp_in = std::sqrt(v.point.intensity_input);
  drive.phi = 0.0;
  const SteadyStateSet set = solve_steady_states(params, drive, variant);

  double best = std::numeric_limits<double>::infinity();
  const SteadyRoot* nearest = nullptr;
  for (const auto& root : set.roots) {
    const double d = std::abs(root.intensity - target);
    if (d < best) {
      best = d;
      nearest = &root;
    }
  }
  if (nearest == nullptr) {
    v.status = CpaVerification::Status::NoMatchingRoot;
    return v;
  }

  v.nearest_root = nearest->intensity;
  v.root_rel_diff = best / std::max(target, 1e-300);
  v.residual = (std::norm(nearest->out_l) + std::norm(nearest->out_r)) /
               (2.0 * drive.input_intensity());
  if (v.root_rel_diff > 1e-6) {
    v.status = CpaVerification::Status::NoMatchingRoot;
  } else {
    v.status = v.residual <= pass_tolerance ? CpaVerification::Status::Pass
                                            : CpaVerification::Status::Fail;
  }
  return v;
}

std::string to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Linear: return "Linear";
    case RegimeLabel::NormallyNonlinear: return "NormallyNonlinear";
    case RegimeLabel::Bistable: return "Bistable";
    case RegimeLabel::NoCpa: return "NoCpa";
  }
  return "unknown";
}

double linear_regime_bound(const SystemParams& params) {
  const double gamma = params.total_decay();
  return 0.25 * params.kappa() * params.tau * gamma * gamma / (params.g * params.g);
}

RegimeReport regime_classify(const SystemParams& params, double delta_p,
                             ModelVariant variant, double band_edge_tolerance) {
  RegimeReport report;
  report.linear_bound = linear_regime_bound(params);
  report.cpa = cpa_intracavity_intensity(params, delta_p);

  if (!report.cpa.feasible && band_edge_tolerance > 0.0) {
    // Quoted band edges are rounded; accept a detuning within the tolerance
    // of a feasible band through the nearest in-band point.
    const double step = band_edge_tolerance / 8.0;
    for (double shift = step; shift <= band_edge_tolerance + 1e-15; shift += step) {
      for (double sign : {-1.0, 1.0}) {
        const CpaPoint probe = cpa_intracavity_intensity(params, delta_p + sign * shift);
        if (probe.feasible) {
          report.cpa = probe;
          break;
        }
      }
      if (report.cpa.feasible) break;
    }
  }

  if (!report.cpa.feasible) {
    report.label = RegimeLabel::NoCpa;
    return report;
  }

  const double scan_max = std::max(100.0, 4.0 * report.cpa.intensity_input);
  const CurveKernel kernel(params, report.cpa.delta_p, variant);
  const bool bistable_window =
      has_bistable_window(params, report.cpa.delta_p, variant, scan_max);

  if (bistable_window) {
    report.label = RegimeLabel::Bistable;
    report.cpa_on_unstable_branch = !kernel.stable(report.cpa.intensity_intracavity);
  } else if (report.cpa.intensity_input > report.linear_bound) {
    report.label = RegimeLabel::NormallyNonlinear;
  } else {
    report.label = RegimeLabel::Linear;
  }
  return report;
}

OnsetResult bistability_onset(const SystemParams& params, double delta_p,
                              SweepParameter swept, double lo, double hi,
                              double tolerance, double input_scan_max) {
  if (!(hi > lo)) throw GridError("onset bracket needs hi > lo");

  auto with_value = [&](double value) {
    SystemParams p = params;
    if (swept == SweepParameter::Omega1) {
      p.omega1 = value;
    } else {
      p.r_pump = value;
    }
    return p;
  };
  auto bistable = [&](double value) {
    return has_bistable_window(with_value(value), delta_p,
                               ModelVariant::ReducedThreeLevel, input_scan_max);
  };

  OnsetResult result;
  const bool at_lo = bistable(lo);
  const bool at_hi = bistable(hi);
  if (at_lo && at_hi) {
    result.status = OnsetResult::Status::AlreadyAtBracketStart;
    result.value = lo;
    return result;
  }
  if (!at_lo && !at_hi) {
    result.status = OnsetResult::Status::NotFound;
    return result;
  }

  // Bisect the appearance (or disappearance) of the multi-root window.
  double a = lo, b = hi;
  while (b - a > tolerance) {
    const double mid = 0.5 * (a + b);
    if (bistable(mid) == at_hi) {
      b = mid;
    } else {
      a = mid;
    }
  }
  result.status = OnsetResult::Status::Found;
  result.value = 0.5 * (a + b);
  return result;
}

std::optional<double> pump_feasibility_cutoff(const SystemParams& params) {
  SystemParams p = two_level_params(params);
  auto value_at = [&](double r) {
    p.r_pump = r;
    return two_level_cpa_value(p, 0.0);
  };
  const double gamma = p.total_decay();
  double a = 0.0, b = gamma;
  double fa = value_at(a);
  double fb = value_at(b);
  if (fa * fb > 0.0) return std::nullopt;
  while (b - a > 1e-6) {
    const double mid = 0.5 * (a + b);
    const double fm = value_at(mid);
    if (fa * fm <= 0.0) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace cpa
