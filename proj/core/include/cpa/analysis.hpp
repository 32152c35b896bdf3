#pragma once

#include <optional>
#include <vector>

#include "cpa/model.hpp"

namespace cpa {

/// Closed-form CPA point at one probe detuning. The intracavity value may
/// come out negative, in which case the point is infeasible and
/// intensity_input is not meaningful.
struct CpaPoint {
  double delta_p = 0.0;
  double intensity_intracavity = 0.0;  ///< |alpha_CPA|^2
  double intensity_input = 0.0;        ///< kappa*tau*|alpha_CPA|^2 when feasible
  bool feasible = false;
};

/// Closed-form CPA intracavity intensity. Uses the three-level expression
/// when omega1 > 0; with omega1 == 0 and gamma32 == 0 it dispatches to the
/// two-level expression. Throws FormulaDomainError when omega1 == 0 with
/// gamma32 > 0 (neither closed form applies).
CpaPoint cpa_intracavity_intensity(const SystemParams& params, double delta_p);

/// First-order-in-r Taylor approximation of the CPA intensity, same
/// dispatch rules.
CpaPoint cpa_intensity_taylor(const SystemParams& params, double delta_p);

struct ScanWindow {
  double lo = -12.0;
  double hi = 12.0;
  int samples = 4801;
};

/// Sign-change boundaries of |alpha_CPA|^2(delta_p) over the scan window,
/// refined by bisection to 1e-9 absolute. An empty result means CPA is
/// infeasible everywhere in the window.
std::vector<double> cpa_frequency_thresholds(const SystemParams& params,
                                             const ScanWindow& window = {});

/// Detunings where the CPA input intensity equals i_in, by scan plus
/// bisection. Empty when the level is never reached.
std::vector<double> cpa_frequencies_at_intensity(const SystemParams& params,
                                                 double i_in,
                                                 const ScanWindow& window = {});

/// Consistency check between the closed-form CPA point and the steady-state
/// solver: drive the cavity with amp_in = sqrt(kappa*tau*|alpha_CPA|^2) at
/// phi = 0, locate the steady-state root nearest |alpha_CPA|^2, and report
/// the summed output intensity relative to the total input.
struct CpaVerification {
  enum class Status {
    Pass,            ///< residual at or below the pass tolerance
    Fail,            ///< root matched but outputs do not vanish
    NoMatchingRoot,  ///< no root within 1e-6 relative of |alpha_CPA|^2
    Infeasible,      ///< the closed form gives a negative intensity
  };
  Status status = Status::Infeasible;
  CpaPoint point;
  double nearest_root = 0.0;
  double root_rel_diff = 0.0;
  double residual = 0.0;  ///< (|out_l|^2 + |out_r|^2) / (2 I_in) at the root
  /// kappa - i(dp - dac) - chi(|alpha_CPA|^2) minus 2*kappa; zero iff the
  /// closed-form point is an exact two-sided absorption state.
  Complex denominator_mismatch{0.0, 0.0};
};

CpaVerification verify_cpa(const SystemParams& params, double delta_p,
                           ModelVariant variant, double pass_tolerance = 1e-8);

enum class RegimeLabel { Linear, NormallyNonlinear, Bistable, NoCpa };

std::string to_string(RegimeLabel label);

struct RegimeReport {
  RegimeLabel label = RegimeLabel::NoCpa;
  CpaPoint cpa;
  bool cpa_on_unstable_branch = false;
  double linear_bound = 0.0;  ///< kappa*tau*Gamma^2 / (4 g^2)
};

/// Excitation-regime classification at one detuning:
///  - Bistable: some input intensity in the scan window yields >= 3 roots
///    and a feasible CPA point exists (flagged when the CPA intensity lies
///    on the negative-slope branch);
///  - NormallyNonlinear: CPA feasible, single-valued in the window, input
///    above the linear bound kappa*tau*Gamma^2/(4 g^2);
///  - Linear: CPA feasible at or below the bound; NoCpa otherwise.
/// A detuning within band_edge_tolerance of a feasible band is treated as
/// feasible through the nearest band point (the printed band edges are
/// quoted to one decimal).
RegimeReport regime_classify(const SystemParams& params, double delta_p,
                             ModelVariant variant,
                             double band_edge_tolerance = 0.05);

/// Input intensity below which the excitation is linear at default
/// parameters: kappa*tau*Gamma^2 / (4 g^2) = 6.25.
double linear_regime_bound(const SystemParams& params);

enum class SweepParameter { Omega1, PumpRate };

struct OnsetResult {
  enum class Status { Found, NotFound, AlreadyAtBracketStart };
  Status status = Status::NotFound;
  double value = 0.0;  ///< critical parameter value when Found
};

/// Bisection (tolerance 1e-3) on the swept parameter for the first
/// appearance of a multi-root input-intensity window inside
/// [0, input_scan_max]. ReducedThreeLevel only.
OnsetResult bistability_onset(const SystemParams& params, double delta_p,
                              SweepParameter swept, double lo, double hi,
                              double tolerance = 1e-3,
                              double input_scan_max = 1000.0);

/// Pump rate above which the two-level CPA intensity at delta_p = 0 turns
/// negative (bisection to 1e-6); nullopt when feasibility never flips in
/// [0, total decay].
std::optional<double> pump_feasibility_cutoff(const SystemParams& params);

}  // namespace cpa
