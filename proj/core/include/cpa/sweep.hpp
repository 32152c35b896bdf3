#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cpa/model.hpp"

namespace cpa {

/// Precomputed polynomial pieces of the input-output relation at one
/// (params, delta_p, variant) point, with phi = 0. The curve is
/// parameterized by intracavity intensity I:
///   i_in(I)  = I * |den(I)|^2 * tau / (4 kappa),  den = kappa - i(dp-dac) - chi
///   i_out(I) = i_in(I) * |2 kappa / den(I) - 1|^2   (per side)
/// and d(i_in)/dI has the sign of (W + I W')Q - 2 I W Q' where W = |T|^2,
/// T = (kappa - i(dp-dac)) Q - P. Q > 0 on I >= 0 for valid inputs.
class CurveKernel {
 public:
  CurveKernel(const SystemParams& params, double delta_p, ModelVariant variant);

  double input_intensity(double intensity) const;
  double output_intensity(double intensity) const;
  Complex denominator(double intensity) const;
  /// Sign of d(i_in)/dI; negative-slope segments are the unstable branch.
  double slope_sign(double intensity) const;
  bool stable(double intensity) const { return slope_sign(intensity) >= 0.0; }

  /// All strictly positive simple roots of d(i_in)/dI = 0, ascending in I.
  std::vector<double> fold_intensities() const;

  /// Largest I with i_in(I) == target (the curve eventually grows linearly),
  /// or 0 when the target is not reached.
  double intensity_upper_bound(double target_input) const;

  double delta_p() const { return delta_p_; }

 private:
  double delta_p_;
  double kappa_;
  double tau_;
  RationalChi chi_;
  ComplexPoly t_;
  RealPoly w_;       // |T|^2
  RealPoly q_sq_;    // Q^2
  RealPoly slope_;   // (W + I W')Q - 2 I W Q'
};

struct BranchPoint {
  double i_in = 0.0;
  double i_out = 0.0;
  double intensity = 0.0;
  bool stable = true;
};

struct FoldPoint {
  double i_in = 0.0;
  double intensity = 0.0;
};

/// Input-output curve, single-valued in the intracavity intensity I and
/// multi-valued in i_in when folds are present.
struct BranchCurve {
  double delta_p = 0.0;
  std::vector<BranchPoint> points;  ///< sorted by intensity
  std::vector<FoldPoint> folds;
};

/// Evaluates the curve on the given strictly increasing intracavity
/// intensity grid (I >= 0). Folds are located by sign changes of the slope
/// polynomial refined with bisection. Throws GridError on malformed grids.
BranchCurve input_output_curve(const SystemParams& params, double delta_p,
                               const std::vector<double>& intensity_grid,
                               ModelVariant variant);

/// Convenience grid: n points linear in I from 0 up to the intensity at
/// which i_in reaches iin_max.
std::vector<double> intensity_grid_for_input_range(const SystemParams& params,
                                                   double delta_p, ModelVariant variant,
                                                   double iin_max, int n);

struct HysteresisTrace {
  std::vector<std::pair<double, double>> up;    ///< (i_in, i_out)
  std::vector<std::pair<double, double>> down;
  std::optional<double> jump_up;    ///< i_in of the upward jump
  std::optional<double> jump_down;  ///< i_in of the downward jump
  bool bistable = false;
};

/// Up-then-down sweep of i_in with branch following (nearest root to the
/// previous step). A degenerate trace with up == down and bistable = false
/// is returned when no step has more than one root.
HysteresisTrace hysteresis_trace(const SystemParams& params, double delta_p,
                                 double i_min, double i_max, int steps,
                                 ModelVariant variant);

enum class BranchPolicy { AdiabaticUp, AdiabaticDown, MinOutput, MaxOutput };

std::string to_string(BranchPolicy p);
BranchPolicy policy_from_string(const std::string& name);

/// Output-intensity map over (delta_p, i_in). Missing cells (solver failure)
/// are NaN. Values are per-side output intensities of the policy-selected
/// root. Cell-parallel across delta_p columns; assembly is deterministic.
struct DensityMap {
  std::vector<double> delta_p_axis;
  std::vector<double> input_axis;
  std::vector<double> values;  ///< row-major [delta_p][i_in]
  BranchPolicy policy = BranchPolicy::AdiabaticUp;

  double at(size_t dp_index, size_t iin_index) const {
    return values[dp_index * input_axis.size() + iin_index];
  }
};

DensityMap density_map(const SystemParams& params, const std::vector<double>& dp_grid,
                       const std::vector<double>& iin_grid, BranchPolicy policy,
                       ModelVariant variant);

enum class LocusAxis { DeltaP, PumpRate, Omega1 };

std::string to_string(LocusAxis a);

/// CPA input-intensity surface over two of {delta_p, r_pump, omega1};
/// infeasible cells are NaN.
struct CpaLocusMap {
  LocusAxis axis1 = LocusAxis::DeltaP;
  LocusAxis axis2 = LocusAxis::PumpRate;
  std::vector<double> grid1;
  std::vector<double> grid2;
  std::vector<double> input_intensity;  ///< row-major [axis1][axis2]

  double at(size_t i, size_t j) const { return input_intensity[i * grid2.size() + j]; }
};

CpaLocusMap cpa_locus_map(const SystemParams& params, LocusAxis axis1,
                          const std::vector<double>& grid1, LocusAxis axis2,
                          const std::vector<double>& grid2);

}  // namespace cpa
