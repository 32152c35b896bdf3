#include "cpa/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace cpa {

namespace {

constexpr Complex kI{0.0, 1.0};

AtomCavityState axpy(const AtomCavityState& a, double s, const AtomCavityState& b) {
  AtomCavityState out = a;
  for (int i = 0; i < 9; ++i) out.rho[i] += s * b.rho[i];
  out.alpha += s * b.alpha;
  return out;
}

double distance(const AtomCavityState& a, const AtomCavityState& b) {
  double sq = std::norm(a.alpha - b.alpha);
  for (int i = 0; i < 9; ++i) sq += std::norm(a.rho[i] - b.rho[i]);
  return std::sqrt(sq);
}

AtomCavityState rk4_step(const LiouvillianSpec& spec, const ProbeDrive& drive,
                         const AtomCavityState& y, double h, bool freeze_field) {
  auto deriv = [&](const AtomCavityState& s) {
    AtomCavityState d = rhs(spec, drive, s);
    if (freeze_field) d.alpha = 0.0;
    return d;
  };
  const AtomCavityState k1 = deriv(y);
  const AtomCavityState k2 = deriv(axpy(y, 0.5 * h, k1));
  const AtomCavityState k3 = deriv(axpy(y, 0.5 * h, k2));
  const AtomCavityState k4 = deriv(axpy(y, h, k3));
  AtomCavityState out = y;
  for (int i = 0; i < 9; ++i) {
    out.rho[i] += (h / 6.0) * (k1.rho[i] + 2.0 * k2.rho[i] + 2.0 * k3.rho[i] + k4.rho[i]);
  }
  out.alpha += (h / 6.0) * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
  return out;
}

struct AdaptiveOptions {
  double t_max = 5000.0;
  double tol = 1e-9;
  double step_tol = 1e-10;
  bool freeze_field = false;
};

IntegrationResult integrate_adaptive(const LiouvillianSpec& spec, const ProbeDrive& drive,
                                     const AtomCavityState& initial,
                                     const AdaptiveOptions& opt) {
  IntegrationResult result;
  result.state = initial;

  double t = 0.0;
  double h = 1e-4;
  const double h_min = 1e-12;
  const double h_max = 1.0;

  while (t < opt.t_max) {
    h = std::min(h, opt.t_max - t);
    const AtomCavityState full = rk4_step(spec, drive, result.state, h, opt.freeze_field);
    const AtomCavityState half = rk4_step(spec, drive, result.state, 0.5 * h, opt.freeze_field);
    const AtomCavityState two_half = rk4_step(spec, drive, half, 0.5 * h, opt.freeze_field);

    const double scale = std::max(1.0, result.state.norm());
    const double err = distance(full, two_half) / 15.0;
    if (err <= opt.step_tol * scale || h <= h_min) {
      // Accept, with the Richardson correction folded in.
      result.state = two_half;
      for (int i = 0; i < 9; ++i) {
        result.state.rho[i] += (two_half.rho[i] - full.rho[i]) / 15.0;
      }
      result.state.alpha += (two_half.alpha - full.alpha) / 15.0;
      t += h;
      ++result.steps;

      AtomCavityState d = rhs(spec, drive, result.state);
      if (opt.freeze_field) d.alpha = 0.0;
      if (d.norm() < opt.tol * scale) {
        result.converged = true;
        break;
      }
    }
    const double grow = (err > 0.0)
                            ? 0.9 * std::pow(opt.step_tol * scale / err, 0.2)
                            : 5.0;
    h = std::clamp(h * std::clamp(grow, 0.2, 5.0), h_min, h_max);
  }
  result.t_final = t;
  return result;
}

}  // namespace

double AtomCavityState::hermiticity_error() const {
  double err = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      err = std::max(err, std::abs(at(i, j) - std::conj(at(j, i))));
    }
  }
  return err;
}

double AtomCavityState::norm() const {
  double sq = std::norm(alpha);
  for (const auto& v : rho) sq += std::norm(v);
  return std::sqrt(sq);
}

AtomCavityState AtomCavityState::ground() {
  AtomCavityState s;
  s.at(0, 0) = 1.0;
  return s;
}

AtomCavityState rhs(const LiouvillianSpec& spec, const ProbeDrive& drive,
                    const AtomCavityState& state) {
  const SystemParams& p = spec.system;
  const double dp = spec.delta_p;
  const double gamma31 = p.gamma31;
  const double gamma32 = p.gamma32;
  const double gamma = gamma31 + gamma32;
  const double r = p.r_pump;

  // Rotating-frame Hamiltonian (units hbar = 1):
  //   H = -[ (dp - delta1) s22 + dp s33 + g a* s13 + g a s31 + W1 (s23 + s32) ]
  const Complex g_alpha = p.g * state.alpha;
  Complex h[3][3] = {};
  h[1][1] = -(dp - p.delta1);
  h[2][2] = Complex(-dp);
  h[0][2] = -std::conj(g_alpha);
  h[2][0] = -g_alpha;
  h[1][2] = Complex(-p.omega1);
  h[2][1] = Complex(-p.omega1);

  AtomCavityState d;
  // -i [H, rho]
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Complex comm = 0.0;
      for (int k = 0; k < 3; ++k) {
        comm += h[i][k] * state.at(k, j) - state.at(i, k) * h[k][j];
      }
      d.at(i, j) = -kI * comm;
    }
  }

  // Population transfer: decay |3> -> |1>, |2> and pump |1> -> |3>.
  const Complex p33 = state.at(2, 2);
  const Complex p11 = state.at(0, 0);
  d.at(0, 0) += gamma31 * p33 - r * p11;
  d.at(1, 1) += gamma32 * p33;
  d.at(2, 2) += -gamma * p33 + r * p11;

  // Coherence damping: Gamma/2 on anything touching |3>, r/2 on anything
  // touching |1>, gamma12 between the ground states.
  const double d12 = p.gamma12 + 0.5 * r;
  const double d13 = 0.5 * (gamma + r);
  const double d23 = 0.5 * gamma;
  d.at(0, 1) -= d12 * state.at(0, 1);
  d.at(1, 0) -= d12 * state.at(1, 0);
  d.at(0, 2) -= d13 * state.at(0, 2);
  d.at(2, 0) -= d13 * state.at(2, 0);
  d.at(1, 2) -= d23 * state.at(1, 2);
  d.at(2, 1) -= d23 * state.at(2, 1);

  // Driven-cavity field equation; the collective coherence term couples to
  // <sigma_13> = <3|rho|1>.
  const Complex detuning(0.0, dp - p.delta_ac);
  const double damping = 0.5 * (p.kappa_l + p.kappa_r);
  d.alpha = (detuning - damping) * state.alpha +
            kI * p.g * p.n_atoms * state.at(2, 0) +
            std::sqrt(p.kappa_l / p.tau) * drive.amp_in * std::exp(kI * drive.phi) +
            std::sqrt(p.kappa_r / p.tau) * drive.amp_in;
  return d;
}

IntegrationResult integrate_to_steady_state(const LiouvillianSpec& spec,
                                            const ProbeDrive& drive,
                                            const AtomCavityState& initial,
                                            double t_max, double tol, double step_tol) {
  AdaptiveOptions opt;
  opt.t_max = t_max;
  opt.tol = tol;
  // The derivative norm at the fixed point floors out at the per-step noise
  // level, so a tight convergence tolerance needs matching step control.
  opt.step_tol = std::min(step_tol, 0.05 * tol);
  return integrate_adaptive(spec, drive, initial, opt);
}

AtomCavityState relaxed_state_for_field(const LiouvillianSpec& spec,
                                        const ProbeDrive& drive, Complex alpha,
                                        double t_max, double tol) {
  AtomCavityState start = AtomCavityState::ground();
  start.alpha = alpha;
  AdaptiveOptions opt;
  opt.t_max = t_max;
  opt.tol = tol;
  opt.freeze_field = true;
  return integrate_adaptive(spec, drive, start, opt).state;
}

std::vector<TrajectorySample> sample_trajectory(const LiouvillianSpec& spec,
                                                const ProbeDrive& drive,
                                                const AtomCavityState& initial,
                                                double t_max, int n_samples,
                                                double step_tol) {
  if (n_samples < 2) throw GridError("trajectory needs at least 2 samples");
  std::vector<TrajectorySample> samples;
  samples.reserve(n_samples);
  AtomCavityState state = initial;
  samples.push_back({0.0, state});
  const double dt = t_max / (n_samples - 1);
  AdaptiveOptions opt;
  opt.t_max = dt;
  opt.tol = 0.0;  // run each slice to its end
  opt.step_tol = step_tol;
  for (int i = 1; i < n_samples; ++i) {
    state = integrate_adaptive(spec, drive, state, opt).state;
    samples.push_back({i * dt, state});
  }
  return samples;
}

OracleReport oracle_compare(const LiouvillianSpec& spec, const ProbeDrive& drive,
                            const SteadyStateSet& steady,
                            const std::vector<bool>& stable_labels) {
  OracleReport report;
  for (size_t i = 0; i < steady.roots.size(); ++i) {
    const SteadyRoot& root = steady.roots[i];
    OracleRootCheck check;
    check.intensity = root.intensity;
    check.labeled_stable = i < stable_labels.size() ? stable_labels[i] : true;

    const double nudge = check.labeled_stable ? 0.02 : 1e-6;
    const Complex seed_alpha = root.alpha * (1.0 + nudge);
    AtomCavityState seed = relaxed_state_for_field(spec, drive, seed_alpha);
    const IntegrationResult run = integrate_to_steady_state(spec, drive, seed);
    check.final_intensity = std::norm(run.state.alpha);

    const double scale = std::max(root.intensity, 1e-12);
    const double rel = std::abs(check.final_intensity - root.intensity) / scale;
    check.confirmed = check.labeled_stable ? (rel <= 1e-4) : (rel >= 1e-2);
    (check.confirmed ? report.confirmed : report.mismatched) += 1;
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace cpa
