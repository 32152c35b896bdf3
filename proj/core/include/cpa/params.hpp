#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpa {

/// Requested model does not match the supplied parameters (e.g. a two-level
/// variant with a nonzero coupling field).
struct VariantMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A closed-form expression was evaluated outside its domain of validity.
struct FormulaDomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed scan or sweep grid.
struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The all-roots polynomial solver failed to converge.
struct RootFindingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed physical rates and couplings of the atom-cavity system. All rates
/// are measured in units of the excited-state decay rate, so the defaults
/// put the total decay of |3> at 1.
struct SystemParams {
  double gamma31 = 0.5;     ///< decay |3> -> |1>
  double gamma32 = 0.5;     ///< decay |3> -> |2>
  double gamma12 = 0.001;   ///< ground-state decoherence
  double kappa_l = 1.0;     ///< left-mirror field decay
  double kappa_r = 1.0;     ///< right-mirror field decay
  double tau = 0.01;        ///< photon round-trip time
  double g = 0.02;          ///< single-atom coupling
  double n_atoms = 250000;  ///< atom number (g*sqrt(N) = 10 at defaults)
  double omega1 = 1.0;      ///< coupling-laser Rabi frequency
  double r_pump = 0.0;      ///< incoherent pump rate |1> -> |3>
  double delta1 = 0.0;      ///< coupling-laser detuning
  double delta_ac = 0.0;    ///< cavity detuning from the |1>->|3> transition

  /// Total decay rate of |3>.
  double total_decay() const { return gamma31 + gamma32; }

  /// Collective coupling strength squared, g^2 N.
  double g2n() const { return g * g * n_atoms; }

  bool is_symmetric() const { return kappa_l == kappa_r; }

  /// Mirror decay rate of the symmetric cavity. Throws when the mirrors
  /// differ; the closed-form analysis assumes kappa_l == kappa_r.
  double kappa() const;

  /// Throws std::invalid_argument when a rate is negative, tau is not
  /// positive or n_atoms < 1.
  void validate() const;
};

/// Per-beam probe drive. Both beams carry amplitude amp_in; the left beam is
/// advanced by the relative phase phi.
struct ProbeDrive {
  double delta_p = 0.0;  ///< probe detuning
  double amp_in = 0.0;   ///< per-beam amplitude, >= 0
  double phi = 0.0;      ///< relative phase of the left beam, [0, 2*pi)

  /// Input intensity per beam.
  double input_intensity() const { return amp_in * amp_in; }

  void validate() const;
};

/// Which steady-state solution of the intracavity field to use.
///
/// FullThreeLevel keeps the ground-state decoherence terms and the
/// higher-order intensity corrections; ReducedThreeLevel drops both;
/// the two-level variants describe the gamma32 -> 0 degeneration with and
/// without the incoherent pump.
enum class ModelVariant {
  FullThreeLevel,
  ReducedThreeLevel,
  TwoLevelPumped,
  TwoLevelBare,
};

std::string to_string(ModelVariant v);

/// Parses "full", "reduced", "two-level", "two-level-bare".
ModelVariant variant_from_string(const std::string& name);

/// Copy of params with the fields a two-level variant requires forced
/// (omega1 = 0, gamma32 = 0, gamma31 = total decay). Used by front ends that
/// select the two-level degeneration explicitly.
SystemParams two_level_params(const SystemParams& p);

}  // namespace cpa
