#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cpa/model.hpp"

namespace cpa {

/// Collective single-atom density matrix coupled to the cavity field
/// amplitude. rho is row-major 3x3 with levels ordered |1>, |2>, |3>.
struct AtomCavityState {
  std::array<Complex, 9> rho{};
  Complex alpha{0.0, 0.0};

  Complex& at(int row, int col) { return rho[row * 3 + col]; }
  const Complex& at(int row, int col) const { return rho[row * 3 + col]; }

  double trace() const { return (at(0, 0) + at(1, 1) + at(2, 2)).real(); }
  double hermiticity_error() const;
  double norm() const;

  /// All population in |1>, no field.
  static AtomCavityState ground();
};

/// Coherent and dissipative generators of the semiclassical equations of
/// motion: detunings and couplings from the rotating-frame Hamiltonian plus
/// the decay channels (Gamma31: |3>->|1>, Gamma32: |3>->|2>), ground-state
/// decoherence gamma12 on rho_12, and the incoherent pump r (|1>->|3> with
/// coherence damping r/2 on rho_12 and rho_13).
struct LiouvillianSpec {
  SystemParams system;
  double delta_p = 0.0;

  static LiouvillianSpec make(const SystemParams& system, double delta_p) {
    return {system, delta_p};
  }
};

/// Time derivative of (rho, alpha): commutator with the rotating-frame
/// Hamiltonian, rate terms, and the driven-cavity field equation
///   d(alpha)/dt = [i(dp - dac) - (kl + kr)/2] alpha + i g N rho_31
///                 + sqrt(kl/tau) amp e^{i phi} + sqrt(kr/tau) amp.
AtomCavityState rhs(const LiouvillianSpec& spec, const ProbeDrive& drive,
                    const AtomCavityState& state);

struct IntegrationResult {
  AtomCavityState state;
  bool converged = false;
  double t_final = 0.0;
  std::size_t steps = 0;
};

/// Adaptive RK4 with step-halving error control (per-step tolerance
/// step_tol). Stops when ||rhs|| < tol * max(1, ||state||) or at t_max.
IntegrationResult integrate_to_steady_state(const LiouvillianSpec& spec,
                                            const ProbeDrive& drive,
                                            const AtomCavityState& initial,
                                            double t_max = 5000.0, double tol = 1e-9,
                                            double step_tol = 1e-10);

/// Atoms relaxed to their steady state for a frozen field amplitude; used to
/// seed basin-of-attraction runs without an atomic transient.
AtomCavityState relaxed_state_for_field(const LiouvillianSpec& spec,
                                        const ProbeDrive& drive, Complex alpha,
                                        double t_max = 2000.0, double tol = 1e-11);

/// One trajectory sample for debug dumps.
struct TrajectorySample {
  double t = 0.0;
  AtomCavityState state;
};

/// Fixed-interval samples of a free-running trajectory.
std::vector<TrajectorySample> sample_trajectory(const LiouvillianSpec& spec,
                                                const ProbeDrive& drive,
                                                const AtomCavityState& initial,
                                                double t_max, int n_samples,
                                                double step_tol = 1e-10);

struct OracleRootCheck {
  double intensity = 0.0;       ///< root being probed
  bool labeled_stable = false;  ///< slope-criterion label under test
  bool confirmed = false;
  double final_intensity = 0.0;  ///< relaxed |alpha|^2 of the probe run
};

struct OracleReport {
  std::vector<OracleRootCheck> checks;
  int confirmed = 0;
  int mismatched = 0;
};

/// For each root: stable roots must attract a nearby seed to within 1e-4
/// relative in intensity; unstable roots must repel a seed perturbed by
/// 1e-6. Report-only; never throws on mismatches.
OracleReport oracle_compare(const LiouvillianSpec& spec, const ProbeDrive& drive,
                            const SteadyStateSet& steady,
                            const std::vector<bool>& stable_labels);

}  // namespace cpa
