#pragma once

#include <optional>
#include <vector>

#include "cpa/params.hpp"
#include "cpa/polynomial.hpp"

namespace cpa {

namespace tol {
/// Roots keep only eigenvalues with |Im| below this times max(1, |Re|).
inline constexpr double root_imag = 1e-9;
/// Slightly negative intensities down to -this are clamped to zero.
inline constexpr double root_negative_clamp = 1e-12;
/// Roots closer than this (absolute) are merged and flagged fold-adjacent.
inline constexpr double root_dedup = 1e-9;
/// Self-consistency bound |alpha|^2 vs I for every returned root.
inline constexpr double root_residual = 1e-10;
}  // namespace tol

/// Auxiliary coefficients of the steady-state solution, evaluated at one
/// (params, delta_p) point. Names follow the roles they play: a and b carry
/// the pump/detuning interference, x the two-photon structure, the s_g*
/// terms the ground-state decoherence channels.
struct CoeffSet {
  Complex a;    ///< Gamma*r + 2i*dp*(Gamma + r)
  Complex b;    ///< Gamma32*r - 2i*dp*(r - Gamma31)
  double c;     ///< Gamma*Gamma32*r + 2*dp^2*(2*Gamma + r)
  double d;     ///< Gamma*Gamma32*r + 4*Omega1^2*(Gamma31 + 2r)
  Complex x;    ///< Gamma*dp + 2i*(dp^2 - Omega1^2)
  double y;     ///< Gamma^2*Gamma32*dp^2 + 4*Omega1^4*(Gamma + Gamma31 + r)
  Complex s_g1; ///< (r - Gamma31)*(2*dp - i*Gamma)
  Complex s_g2; ///< Gamma32*r*(2*dp - i*Gamma)
  double s_g3;  ///< Gamma^2*[Gamma*Gamma32*r + 2*Omega1^2*(r + 2*Gamma)]
                ///<   + 2*Gamma*(Gamma32*r*dp^2 + 12*Omega1^4)
};

CoeffSet build_coefficients(const SystemParams& params, double delta_p);

/// Atomic susceptibility chi(I) as a ratio of polynomials in the intracavity
/// intensity I = |alpha|^2. The denominator polynomial is real for every
/// variant; the numerator is complex and linear in I.
struct RationalChi {
  ComplexPoly num;
  RealPoly den;

  Complex operator()(double intensity) const {
    return num(intensity) / den(intensity);
  }
};

/// Sign convention: the cavity response denominator is
///     kappa - i*(delta_p - delta_ac) - chi(I)
/// for every variant, with the variant's sign folded into chi. Under this
/// convention the bare two-level susceptibility at delta_p = 0, I = 0 is
/// -2 g^2 N / Gamma (the term appears with "+" in the undriven two-level
/// solution).
///
/// A three-level variant with omega1 == 0 is the empty-cavity limit of the
/// printed solutions (chi -> 0 pointwise for I > 0); it is returned as the
/// exact zero. Front ends that want the physical two-level degeneration with
/// omega1 = 0 must select a two-level variant (see two_level_params).
RationalChi susceptibility_parts(const SystemParams& params, double delta_p,
                                 ModelVariant variant);

/// chi evaluated at one intensity. Throws VariantMismatch when a two-level
/// variant is requested with omega1 != 0 or gamma32 != 0 (or r_pump != 0 for
/// TwoLevelBare).
Complex susceptibility(const SystemParams& params, double delta_p,
                       double intensity, ModelVariant variant);

/// Sum drive term S = (amp*e^{i phi} + amp) * sqrt(kappa/tau).
Complex drive_sum(const SystemParams& params, const ProbeDrive& drive);

/// Real-coefficient polynomial in I whose nonnegative real roots are the
/// steady-state intracavity intensities:
///     F(I) = I * |(kappa - i*(dp - dac))*Q(I) - P(I)|^2 - |S|^2 * Q(I)^2
/// with chi = P/Q. Degree 3 for the reduced/two-level variants, up to 7 for
/// the full model.
RealPoly steady_state_polynomial(const SystemParams& params, const ProbeDrive& drive,
                                 ModelVariant variant);

enum class Stability { Undetermined, Stable, Unstable };

struct SteadyRoot {
  double intensity = 0.0;
  Complex alpha{0.0, 0.0};
  Complex out_l{0.0, 0.0};
  Complex out_r{0.0, 0.0};
  Stability stability = Stability::Undetermined;
  bool fold_adjacent = false;  ///< merged with a near-degenerate partner
};

struct SteadyStateSet {
  ProbeDrive drive;
  std::vector<SteadyRoot> roots;  ///< sorted by intensity
};

/// All physical steady states at one drive point. Companion-matrix roots of
/// the steady-state polynomial, filtered (|Im| <= 1e-9*max(1,|Re|),
/// Re >= -1e-12 clamped to 0), deduplicated within 1e-9 absolute, each with
/// the field alpha recomputed from the closed form and the two output
/// fields. Stability flags are left Undetermined here; the sweep layer sets
/// them. With zero net drive only the trivial root is returned.
SteadyStateSet solve_steady_states(const SystemParams& params, const ProbeDrive& drive,
                                   ModelVariant variant);

struct OutputFields {
  Complex out_l;
  Complex out_r;
  double i_out_l = 0.0;
  double i_out_r = 0.0;
  /// (|out_l|^2 + |out_r|^2) / (2 * I_in); NaN when amp_in == 0.
  double ratio = 0.0;
};

/// Input-output relations of the two-sided cavity:
///   out_l = sqrt(kappa*tau)*alpha - amp*e^{i phi},
///   out_r = sqrt(kappa*tau)*alpha - amp.
OutputFields output_fields(const SystemParams& params, const ProbeDrive& drive,
                           Complex alpha);

}  // namespace cpa
