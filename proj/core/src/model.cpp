#include "cpa/model.hpp"

#include <algorithm>
#include <cmath>

namespace cpa {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_two_level(const SystemParams& p, ModelVariant variant) {
  if (p.omega1 != 0.0) {
    throw VariantMismatch("two-level variant requires omega1 == 0, got " +
                          std::to_string(p.omega1));
  }
  if (p.gamma32 != 0.0) {
    throw VariantMismatch("two-level variant requires gamma32 == 0, got " +
                          std::to_string(p.gamma32));
  }
  if (variant == ModelVariant::TwoLevelBare && p.r_pump != 0.0) {
    throw VariantMismatch("bare two-level variant requires r_pump == 0, got " +
                          std::to_string(p.r_pump));
  }
}

RationalChi two_level_chi(const SystemParams& p, double delta_p, double r) {
  const double gamma = p.total_decay();
  const double g2 = p.g * p.g;
  const double g2n = p.g2n();
  // chi = 2 g^2 N (r - Gamma)(Gamma + 2i dp) / (4 I g^2 (2Gamma + r)
  //        + (Gamma + 2r)(Gamma^2 + 4 dp^2)),  subtract convention.
  const Complex num0 = 2.0 * g2n * (r - gamma) * Complex(gamma, 2.0 * delta_p);
  const double q0 = (gamma + 2.0 * r) * (gamma * gamma + 4.0 * delta_p * delta_p);
  const double q1 = 4.0 * g2 * (2.0 * gamma + r);
  return {ComplexPoly({num0}), RealPoly({q0, q1})};
}

RationalChi three_level_chi(const SystemParams& p, double delta_p, bool full) {
  const double gamma = p.total_decay();
  const double g2 = p.g * p.g;
  const double w2 = p.omega1 * p.omega1;
  const double dp2 = delta_p * delta_p;
  const double r = p.r_pump;
  const double g12 = full ? p.gamma12 : 0.0;
  const CoeffSet k = build_coefficients(p, delta_p);
  const double x_sq = std::norm(k.x);

  // Numerator: linear in I, prefactor 4 i g^2 N Omega1^2.
  const Complex prefactor = 4.0 * kI * g2 * p.n_atoms * w2;
  const Complex p1 = 2.0 * g2 * (2.0 * g12 * k.s_g1 - kI * k.a * p.gamma32);
  const Complex p0 = 2.0 * g12 * g12 * gamma * k.s_g1 +
                     g12 * gamma * (k.s_g2 - 4.0 * kI * w2 * (r - p.gamma31)) +
                     gamma * k.b * k.x;
  ComplexPoly num = ComplexPoly({p0, p1}) * prefactor;

  // Denominator: real, linear in I for the reduced model, cubic when the
  // higher-order intensity corrections are kept.
  const double q1 = 4.0 * g2 *
                    (g12 * g12 * gamma * gamma * (gamma * p.gamma32 + 12.0 * w2) +
                     g12 * (k.s_g3 + 2.0 * k.d * dp2) + gamma * (k.y + 2.0 * k.c * w2));
  const double q0 = gamma * k.d *
                    (g12 * g12 * (gamma * gamma + 4.0 * dp2) + 4.0 * g12 * gamma * w2 + x_sq);
  std::vector<double> q = {q0, q1};
  if (full) {
    const double g4 = g2 * g2;
    const double g6 = g4 * g2;
    // |s_g2|^2 / (Gamma32 r) written in the cancelled form
    // Gamma32 * r * (4 dp^2 + Gamma^2); the singularity at Gamma32*r = 0 is
    // removable.
    const double s_g2_cancelled = p.gamma32 * r * (4.0 * dp2 + gamma * gamma);
    const double q2 = 16.0 * g4 * g12 * gamma * (gamma * p.gamma32 + 6.0 * w2) +
                      4.0 * g4 * (s_g2_cancelled + 4.0 * gamma * w2 * (gamma + p.gamma32 - r));
    const double q3 = 16.0 * g6 * gamma * p.gamma32;
    q.push_back(q2);
    q.push_back(q3);
  }
  return {std::move(num), RealPoly(std::move(q))};
}

}  // namespace

CoeffSet build_coefficients(const SystemParams& p, double delta_p) {
  const double gamma = p.total_decay();
  const double w2 = p.omega1 * p.omega1;
  const double w4 = w2 * w2;
  const double dp2 = delta_p * delta_p;
  const double r = p.r_pump;

  CoeffSet k;
  k.a = Complex(gamma * r, 2.0 * delta_p * (gamma + r));
  k.b = Complex(p.gamma32 * r, -2.0 * delta_p * (r - p.gamma31));
  k.c = gamma * p.gamma32 * r + 2.0 * dp2 * (2.0 * gamma + r);
  k.d = gamma * p.gamma32 * r + 4.0 * w2 * (p.gamma31 + 2.0 * r);
  k.x = Complex(gamma * delta_p, 2.0 * (dp2 - w2));
  k.y = gamma * gamma * p.gamma32 * dp2 + 4.0 * w4 * (gamma + p.gamma31 + r);
  k.s_g1 = (r - p.gamma31) * Complex(2.0 * delta_p, -gamma);
  k.s_g2 = p.gamma32 * r * Complex(2.0 * delta_p, -gamma);
  k.s_g3 = gamma * gamma * (gamma * p.gamma32 * r + 2.0 * w2 * (r + 2.0 * gamma)) +
           2.0 * gamma * (p.gamma32 * r * dp2 + 12.0 * w4);
  return k;
}

RationalChi susceptibility_parts(const SystemParams& params, double delta_p,
                                 ModelVariant variant) {
  params.validate();
  switch (variant) {
    case ModelVariant::TwoLevelBare:
      require_two_level(params, variant);
      return two_level_chi(params, delta_p, 0.0);
    case ModelVariant::TwoLevelPumped:
      require_two_level(params, variant);
      return two_level_chi(params, delta_p, params.r_pump);
    case ModelVariant::ReducedThreeLevel:
    case ModelVariant::FullThreeLevel:
      if (params.omega1 == 0.0) {
        // Empty-cavity limit of the printed solutions.
        return {ComplexPoly::constant(0.0), RealPoly::constant(1.0)};
      }
      return three_level_chi(params, delta_p,
                             variant == ModelVariant::FullThreeLevel);
  }
  throw std::invalid_argument("unknown variant");
}

Complex susceptibility(const SystemParams& params, double delta_p, double intensity,
                       ModelVariant variant) {
  if (intensity < 0.0) throw std::invalid_argument("intensity must be >= 0");
  return susceptibility_parts(params, delta_p, variant)(intensity);
}

Complex drive_sum(const SystemParams& params, const ProbeDrive& drive) {
  const Complex both = drive.amp_in * (std::exp(kI * drive.phi) + 1.0);
  return both * std::sqrt(params.kappa() / params.tau);
}

RealPoly steady_state_polynomial(const SystemParams& params, const ProbeDrive& drive,
                                 ModelVariant variant) {
  drive.validate();
  const RationalChi chi = susceptibility_parts(params, drive.delta_p, variant);
  const Complex cavity(params.kappa(), -(drive.delta_p - params.delta_ac));
  const ComplexPoly t = ComplexPoly(chi.den) * cavity - chi.num;
  const RealPoly w = t.abs_squared();
  const double s_sq = std::norm(drive_sum(params, drive));
  return w.times_x() - (chi.den * chi.den) * s_sq;
}

SteadyStateSet solve_steady_states(const SystemParams& params, const ProbeDrive& drive,
                                   ModelVariant variant) {
  drive.validate();
  SteadyStateSet set;
  set.drive = drive;

  const RationalChi chi = susceptibility_parts(params, drive.delta_p, variant);
  const Complex cavity(params.kappa(), -(drive.delta_p - params.delta_ac));
  const Complex s = drive_sum(params, drive);

  const double drive_scale = 2.0 * drive.amp_in * std::sqrt(params.kappa() / params.tau);
  const bool undriven = std::abs(s) <= 1e-14 * drive_scale || drive.amp_in == 0.0;

  auto make_root = [&](double intensity, bool fold_adjacent) {
    SteadyRoot root;
    root.intensity = intensity;
    const Complex denominator = cavity - chi(intensity);
    root.alpha = undriven ? Complex(0.0) : s / denominator;
    const OutputFields out = output_fields(params, drive, root.alpha);
    root.out_l = out.out_l;
    root.out_r = out.out_r;
    root.fold_adjacent = fold_adjacent;
    return root;
  };

  // Undriven cavity (amp_in = 0 or destructive phase, where roundoff leaves
  // a ~1e-16 residual in 1 + e^{i phi}): trivial root only.
  if (undriven) {
    set.roots.push_back(make_root(0.0, false));
    return set;
  }

  const RealPoly poly = steady_state_polynomial(params, drive, variant);
  std::vector<double> candidates;
  try {
    for (double x : real_roots(poly, tol::root_imag)) {
      if (x < -tol::root_negative_clamp) continue;
      candidates.push_back(std::max(x, 0.0));
    }
  } catch (const RootFindingFailure& e) {
    std::string coeffs;
    for (double c : poly.coeffs()) coeffs += std::to_string(c) + " ";
    throw RootFindingFailure(std::string(e.what()) + "; variant " + to_string(variant) +
                             ", delta_p " + std::to_string(drive.delta_p) + ", amp_in " +
                             std::to_string(drive.amp_in) + ", coefficients [ " + coeffs +
                             "]");
  }
  std::sort(candidates.begin(), candidates.end());

  for (size_t i = 0; i < candidates.size();) {
    size_t j = i + 1;
    while (j < candidates.size() && candidates[j] - candidates[j - 1] < tol::root_dedup) ++j;
    const bool merged = (j - i) > 1;
    set.roots.push_back(make_root(candidates[i], merged));
    i = j;
  }
  return set;
}

OutputFields output_fields(const SystemParams& params, const ProbeDrive& drive,
                           Complex alpha) {
  const double out_coupling = std::sqrt(params.kappa() * params.tau);
  OutputFields f;
  f.out_l = out_coupling * alpha - drive.amp_in * std::exp(kI * drive.phi);
  f.out_r = out_coupling * alpha - drive.amp_in;
  f.i_out_l = std::norm(f.out_l);
  f.i_out_r = std::norm(f.out_r);
  const double i_in = drive.input_intensity();
  f.ratio = (f.i_out_l + f.i_out_r) / (2.0 * i_in);  // NaN when undriven
  return f;
}

}  // namespace cpa
